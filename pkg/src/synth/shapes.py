"""Surface sampling of primitive shapes, centered at the origin, with outward normals."""
from typing import Tuple

import numpy as np

from src.errors import SpecError

SHAPES = ("box", "panel", "cylinder", "composite")


def sample_box(rng: np.random.Generator, size, count: int) -> Tuple[np.ndarray, np.ndarray]:
    sx, sy, sz = (float(v) for v in size)
    areas = np.array([sy * sz, sy * sz, sx * sz, sx * sz, sx * sy, sx * sy])
    faces = rng.choice(6, size=count, p=areas / areas.sum())
    uv = rng.uniform(-0.5, 0.5, size=(count, 2))

    points = np.empty((count, 3))
    normals = np.zeros((count, 3))
    half = np.array([sx, sy, sz]) / 2.0
    for face in range(6):
        mask = faces == face
        axis, sign = divmod(face, 2)
        sign = 1.0 if sign == 0 else -1.0
        others = [i for i in range(3) if i != axis]
        pts = np.zeros((mask.sum(), 3))
        pts[:, axis] = sign * half[axis]
        pts[:, others[0]] = uv[mask, 0] * 2.0 * half[others[0]]
        pts[:, others[1]] = uv[mask, 1] * 2.0 * half[others[1]]
        points[mask] = pts
        normals[mask, axis] = sign
    return points, normals


def sample_cylinder(rng: np.random.Generator, radius: float, height: float, count: int) -> Tuple[np.ndarray, np.ndarray]:
    """Closed cylinder along z."""
    lateral = 2.0 * np.pi * radius * height
    cap = np.pi * radius * radius
    kind = rng.choice(3, size=count, p=np.array([lateral, cap, cap]) / (lateral + 2.0 * cap))

    theta = rng.uniform(0.0, 2.0 * np.pi, size=count)
    z = rng.uniform(-height / 2.0, height / 2.0, size=count)
    rho = radius * np.sqrt(rng.uniform(0.0, 1.0, size=count))

    points = np.empty((count, 3))
    normals = np.zeros((count, 3))
    side = kind == 0
    points[side] = np.column_stack([radius * np.cos(theta[side]), radius * np.sin(theta[side]), z[side]])
    normals[side] = np.column_stack([np.cos(theta[side]), np.sin(theta[side]), np.zeros(side.sum())])
    for kind_id, sign in ((1, 1.0), (2, -1.0)):
        mask = kind == kind_id
        points[mask] = np.column_stack([
            rho[mask] * np.cos(theta[mask]),
            rho[mask] * np.sin(theta[mask]),
            np.full(mask.sum(), sign * height / 2.0),
        ])
        normals[mask, 2] = sign
    return points, normals


def sample_shape(rng: np.random.Generator, shape: str, size, count: int) -> Tuple[np.ndarray, np.ndarray]:
    """Sample ``count`` surface points of a primitive of the given bounding ``size``.

    ``composite`` is a box of ``size`` sitting on a vertical post below it.
    """
    size = np.asarray(size, dtype=float)
    if shape in ("box", "panel"):
        return sample_box(rng, size, count)
    if shape == "cylinder":
        return sample_cylinder(rng, 0.5 * min(size[0], size[1]), size[2], count)
    if shape == "composite":
        top = count // 2
        box_pts, box_normals = sample_box(rng, size, top)
        post_radius = 0.25 * min(size[0], size[1])
        post_height = size[2] * 1.5
        post_pts, post_normals = sample_cylinder(rng, post_radius, post_height, count - top)
        post_pts[:, 2] -= size[2] / 2.0 + post_height / 2.0
        return np.vstack([box_pts, post_pts]), np.vstack([box_normals, post_normals])
    raise SpecError(f"unknown shape {shape!r}; expected one of {', '.join(SHAPES)}")
