from typing import Tuple

import numpy as np
from scipy.spatial import cKDTree

from src.config import settings
from src.errors import DegenerateGeometry, EmptyCloud
from src.geometry.point_cloud import PointCloud
from src.geometry.transforms import RigidTransform, compose

RANK_TOL = 1e-10


def _kabsch_arrays(src: np.ndarray, dst: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    if src.shape != dst.shape:
        raise DegenerateGeometry(f"point count mismatch: {src.shape[0]} vs {dst.shape[0]}")
    if src.shape[0] < 3:
        raise DegenerateGeometry(f"at least 3 corresponding points required, got {src.shape[0]}")

    centroid_src = src.mean(axis=0)
    centroid_dst = dst.mean(axis=0)
    src_c = src - centroid_src
    dst_c = dst - centroid_dst

    spread = np.linalg.svd(src_c, compute_uv=False)
    if spread[0] == 0.0 or spread[1] <= RANK_TOL * spread[0]:
        raise DegenerateGeometry("source points are collinear or coincident")

    h = src_c.T @ dst_c
    u, _, vt = np.linalg.svd(h)
    v = vt.T
    d = np.sign(np.linalg.det(v @ u.T))
    if d == 0.0:
        d = 1.0
    rotation = v @ np.diag([1.0, 1.0, d]) @ u.T
    translation = centroid_dst - rotation @ centroid_src
    return rotation, translation


def kabsch_align(src: PointCloud, dst: PointCloud) -> RigidTransform:
    """Least-squares rigid transform taking ``src[i]`` onto ``dst[i]``."""
    rotation, translation = _kabsch_arrays(src.points, dst.points)
    return RigidTransform(rotation, translation)


def icp_align(
    src: PointCloud,
    dst: PointCloud,
    max_iters: int = settings.ICP_MAX_ITERS,
    tol: float = settings.ICP_TOL,
) -> Tuple[RigidTransform, float]:
    """Point-to-point ICP seeded by centroid alignment.

    Stops when the mean residual changes by less than ``tol`` or after
    ``max_iters`` rounds; the final mean residual is returned either way.
    """
    if len(src) == 0 or len(dst) == 0:
        raise EmptyCloud("ICP needs two non-empty clouds")

    tree = cKDTree(dst.points)
    estimate = RigidTransform.from_translation(dst.points.mean(axis=0) - src.points.mean(axis=0))
    moved = estimate.apply(src.points)
    distances, idx = tree.query(moved)
    residual = float(distances.mean())

    for _ in range(max_iters):
        step_r, step_t = _kabsch_arrays(moved, dst.points[idx])
        estimate = compose(RigidTransform(step_r, step_t), estimate)
        moved = estimate.apply(src.points)
        distances, idx = tree.query(moved)
        new_residual = float(distances.mean())
        converged = abs(residual - new_residual) < tol
        residual = new_residual
        if converged:
            break

    return estimate, residual
