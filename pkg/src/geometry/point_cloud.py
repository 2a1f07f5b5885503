from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.errors import EmptyCloud

NORMAL_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Ordered points of shape (n, 3) with optional unit normals of the same shape."""

    points: np.ndarray
    normals: Optional[np.ndarray] = None

    def __post_init__(self):
        points = np.array(self.points, dtype=float).reshape(-1, 3)
        points.setflags(write=False)
        object.__setattr__(self, "points", points)
        if self.normals is not None:
            normals = np.array(self.normals, dtype=float).reshape(-1, 3)
            if normals.shape != points.shape:
                raise ValueError(
                    f"normals shape {normals.shape} does not match points shape {points.shape}"
                )
            normals.setflags(write=False)
            object.__setattr__(self, "normals", normals)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def has_normals(self) -> bool:
        return self.normals is not None

    def normals_are_unit(self, tol: float = NORMAL_TOL) -> bool:
        if self.normals is None:
            return True
        return bool(np.all(np.abs(np.linalg.norm(self.normals, axis=1) - 1.0) <= tol))


def centroid(cloud: PointCloud) -> np.ndarray:
    if len(cloud) == 0:
        raise EmptyCloud("centroid of an empty point cloud")
    return cloud.points.mean(axis=0)


def enclosing_radius(cloud: PointCloud) -> float:
    """Radius of a sphere around the centroid containing every point.

    Upper bound of the minimal enclosing sphere, at most twice its radius.
    """
    center = centroid(cloud)
    return float(np.max(np.linalg.norm(cloud.points - center, axis=1)))
