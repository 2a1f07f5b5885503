"""SE(3) and screw algebra on plain numpy arrays.

Rotations are 3x3 matrices acting on column vectors; clouds are (n, 3)
arrays, so a transform maps rows with ``points @ R.T + t``.
"""
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.spatial.transform import Rotation

from src.config import settings
from src.geometry.point_cloud import PointCloud

ROTATION_TOL = 1e-9
UNIT_TOL = 1e-9
CANONICAL_DIRECTION = np.array([0.0, 0.0, 1.0])


def _vec3(value, name: str) -> np.ndarray:
    arr = np.array(value, dtype=float).reshape(3)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite, got {arr}")
    arr.setflags(write=False)
    return arr


def is_rotation(m: np.ndarray, tol: float = ROTATION_TOL) -> bool:
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3) or not np.all(np.isfinite(m)):
        return False
    return (np.allclose(m.T @ m, np.eye(3), atol=tol, rtol=0.0)
            and abs(np.linalg.det(m) - 1.0) <= tol)


def skew(v: np.ndarray) -> np.ndarray:
    x, y, z = v
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def axis_angle_matrix(direction: np.ndarray, angle: float) -> np.ndarray:
    """Rodrigues formula, R = I + sin(a) K + (1 - cos(a)) K^2 for unit ``direction``."""
    k = skew(np.asarray(direction, dtype=float))
    return np.eye(3) + math.sin(angle) * k + (1.0 - math.cos(angle)) * (k @ k)


@dataclass(frozen=True, eq=False)
class RigidTransform:
    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        rotation = np.array(self.rotation, dtype=float)
        if not is_rotation(rotation):
            raise ValueError("rotation must be orthonormal with determinant +1")
        rotation.setflags(write=False)
        object.__setattr__(self, "rotation", rotation)
        object.__setattr__(self, "translation", _vec3(self.translation, "translation"))

    @classmethod
    def identity(cls) -> "RigidTransform":
        return cls(np.eye(3), np.zeros(3))

    @classmethod
    def from_translation(cls, translation) -> "RigidTransform":
        return cls(np.eye(3), translation)

    def as_matrix(self) -> np.ndarray:
        out = np.eye(4)
        out[:3, :3] = self.rotation
        out[:3, 3] = self.translation
        return out

    def apply(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(points, dtype=float) @ self.rotation.T + self.translation


@dataclass(frozen=True, eq=False)
class ScrewAxis:
    """Line with unit ``direction`` passing through ``position``."""

    direction: np.ndarray
    position: np.ndarray

    def __post_init__(self):
        direction = _vec3(self.direction, "direction")
        if abs(np.linalg.norm(direction) - 1.0) > UNIT_TOL:
            raise ValueError(f"axis direction must be unit length, got norm {np.linalg.norm(direction)}")
        object.__setattr__(self, "direction", direction)
        object.__setattr__(self, "position", _vec3(self.position, "position"))

    @classmethod
    def from_vectors(cls, direction, position) -> "ScrewAxis":
        """Build an axis from any non-zero direction vector."""
        direction = np.asarray(direction, dtype=float)
        norm = np.linalg.norm(direction)
        if norm <= settings.DIRECTION_RAW_MIN_NORM:
            raise ValueError("axis direction has zero length")
        return cls(direction / norm, position)

    def closest_point_to(self, point: np.ndarray) -> np.ndarray:
        offset = np.asarray(point, dtype=float) - self.position
        return self.position + np.dot(offset, self.direction) * self.direction


def wrap_angle(angle: float) -> float:
    """Map an angle into (-pi, pi]."""
    wrapped = math.remainder(angle, 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


@dataclass(frozen=True, eq=False)
class ScrewMotion:
    """Rotation by ``angle`` about ``axis`` followed by ``distance`` along it."""

    axis: ScrewAxis
    angle: float
    distance: float

    def __post_init__(self):
        if not (math.isfinite(self.angle) and math.isfinite(self.distance)):
            raise ValueError("screw angle and distance must be finite")
        object.__setattr__(self, "angle", wrap_angle(float(self.angle)))
        object.__setattr__(self, "distance", float(self.distance))


def compose(a: RigidTransform, b: RigidTransform) -> RigidTransform:
    """Transform applying ``b`` first, then ``a``."""
    return RigidTransform(a.rotation @ b.rotation, a.rotation @ b.translation + a.translation)


def invert(t: RigidTransform) -> RigidTransform:
    rt = t.rotation.T
    return RigidTransform(rt, -rt @ t.translation)


def rotation_axis_angle(r: np.ndarray) -> Tuple[np.ndarray, float]:
    """Unit axis and angle in [0, pi] of a rotation matrix.

    The identity yields angle 0 with the placeholder axis +z. Near pi, where
    the right-hand rule cannot fix the sign, the largest-magnitude component
    of the axis is made positive.
    """
    rotvec = Rotation.from_matrix(np.asarray(r, dtype=float)).as_rotvec()
    angle = float(np.linalg.norm(rotvec))
    if angle == 0.0:
        return CANONICAL_DIRECTION.copy(), 0.0
    direction = rotvec / angle
    if math.pi - angle < settings.NEAR_PI_EPSILON:
        if direction[np.argmax(np.abs(direction))] < 0.0:
            direction = -direction
    return direction, min(angle, math.pi)


def screw_decompose(t: RigidTransform, angle_epsilon: float = settings.ANGLE_EPSILON) -> ScrewMotion:
    """Chasles decomposition of a rigid transform.

    Below ``angle_epsilon`` the motion is read as a pure translation: the
    axis runs along the translation through the origin.
    """
    direction, angle = rotation_axis_angle(t.rotation)
    if angle <= angle_epsilon:
        length = float(np.linalg.norm(t.translation))
        if length < 1e-15:
            return ScrewMotion(ScrewAxis(CANONICAL_DIRECTION, np.zeros(3)), 0.0, 0.0)
        return ScrewMotion(ScrewAxis(t.translation / length, np.zeros(3)), 0.0, length)

    pitch_distance = float(np.dot(direction, t.translation))
    t_perp = t.translation - pitch_distance * direction
    # minimum-norm solution of (I - R) q = t_perp, lying in the plane orthogonal to the axis
    position = 0.5 * (t_perp + np.cross(direction, t_perp) / math.tan(0.5 * angle))
    position = position - np.dot(position, direction) * direction
    return ScrewMotion(ScrewAxis(direction, position), angle, pitch_distance)


def screw_to_transform(m: ScrewMotion) -> RigidTransform:
    direction = m.axis.direction
    rotation = axis_angle_matrix(direction, m.angle)
    translation = m.axis.position - rotation @ m.axis.position + m.distance * direction
    return RigidTransform(rotation, translation)


def transform_cloud(t: RigidTransform, cloud: PointCloud) -> PointCloud:
    normals = None if cloud.normals is None else cloud.normals @ t.rotation.T
    return PointCloud(t.apply(cloud.points), normals)
