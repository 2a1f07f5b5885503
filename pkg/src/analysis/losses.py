"""Motion and alignment losses with their analytic gradients.

A part's state ``a`` is reached from frame 0 by the screw motion with the
prefix sums of its per-frame quantities. Both states share one axis, so the
transport ``M_b @ inv(M_a)`` is itself a screw about that axis with the
differences of the prefix sums; the gradients are taken through that form.
"""
import math
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree

from src.config import settings
from src.geometry.point_cloud import PointCloud
from src.geometry.transforms import (
    ScrewAxis,
    ScrewMotion,
    axis_angle_matrix,
    compose,
    invert,
    screw_to_transform,
)

PartFrames = Mapping[int, Sequence[PointCloud]]
DISTANCE_EPSILON = 1e-12       # residuals below this carry no gradient direction


@dataclass
class PartParams:
    label: int
    direction_raw: np.ndarray
    position: np.ndarray
    delta_alpha: np.ndarray
    delta_phi: np.ndarray

    @classmethod
    def from_axis(cls, label: int, axis: ScrewAxis, num_frames: int) -> "PartParams":
        return cls(
            label=label,
            direction_raw=np.array(axis.direction, dtype=float),
            position=np.array(axis.position, dtype=float),
            delta_alpha=np.zeros(num_frames - 1),
            delta_phi=np.zeros(num_frames - 1),
        )

    @property
    def num_frames(self) -> int:
        return self.delta_alpha.shape[0] + 1

    @property
    def direction(self) -> np.ndarray:
        norm = np.linalg.norm(self.direction_raw)
        if norm <= settings.DIRECTION_RAW_MIN_NORM:
            raise ValueError(f"part {self.label}: axis direction collapsed to zero length")
        return self.direction_raw / norm

    @property
    def axis(self) -> ScrewAxis:
        return ScrewAxis(self.direction, self.position)

    def copy(self) -> "PartParams":
        return PartParams(
            self.label,
            self.direction_raw.copy(),
            self.position.copy(),
            self.delta_alpha.copy(),
            self.delta_phi.copy(),
        )


@dataclass
class PartGradient:
    direction_raw: np.ndarray
    position: np.ndarray
    delta_alpha: np.ndarray
    delta_phi: np.ndarray

    def norm(self) -> float:
        return float(np.sqrt(sum(np.sum(g * g) for g in
                                 (self.direction_raw, self.position, self.delta_alpha, self.delta_phi))))


@dataclass(frozen=True)
class StatePair:
    a: int
    b: int

    def validate(self, num_frames: int) -> None:
        if self.a == self.b or not (0 <= self.a < num_frames and 0 <= self.b < num_frames):
            raise ValueError(f"invalid state pair ({self.a}, {self.b}) for {num_frames} frames")


@dataclass
class LossTerms:
    total: float
    per_part: Dict[int, float] = field(default_factory=dict)
    gradients: Dict[int, PartGradient] = field(default_factory=dict)


def cumulative_motion(params: PartParams, a: int) -> ScrewMotion:
    """Screw motion taking frame 0 to frame ``a``; ``a = 0`` is the zero motion."""
    if not 0 <= a < params.num_frames:
        raise ValueError(f"frame index {a} outside [0, {params.num_frames - 1}]")
    return ScrewMotion(
        params.axis,
        angle=float(np.sum(params.delta_phi[:a])),
        distance=float(np.sum(params.delta_alpha[:a])),
    )


def _pair_signs(num_deltas: int, pair: StatePair) -> np.ndarray:
    """d(prefix_b - prefix_a) / d(delta_i): +1 on [a, b), -1 on [b, a), 0 elsewhere."""
    signs = np.zeros(num_deltas)
    if pair.a < pair.b:
        signs[pair.a:pair.b] = 1.0
    else:
        signs[pair.b:pair.a] = -1.0
    return signs


@dataclass
class _Transport:
    direction: np.ndarray
    rotation: np.ndarray
    angle: float
    distance: float
    offsets: np.ndarray        # source points minus axis position
    moved: np.ndarray
    signs: np.ndarray


def _transport(params: PartParams, pair: StatePair, source: np.ndarray) -> _Transport:
    signs = _pair_signs(params.delta_phi.shape[0], pair)
    angle = float(np.dot(signs, params.delta_phi))
    distance = float(np.dot(signs, params.delta_alpha))
    direction = params.direction
    rotation = axis_angle_matrix(direction, angle)
    offsets = source - params.position
    moved = offsets @ rotation.T + params.position + distance * direction
    return _Transport(direction, rotation, angle, distance, offsets, moved, signs)


def _unit_rows(diff: np.ndarray, dist: np.ndarray) -> np.ndarray:
    out = np.zeros_like(diff)
    nonzero = dist > DISTANCE_EPSILON
    out[nonzero] = diff[nonzero] / dist[nonzero, None]
    return out


def _motion_term(moved: np.ndarray, target: np.ndarray, correspondent: bool,
                 target_tree: Optional[cKDTree] = None) -> Tuple[float, np.ndarray]:
    if correspondent and moved.shape == target.shape:
        matched = target
    else:
        tree = target_tree if target_tree is not None else cKDTree(target)
        _, idx = tree.query(moved)
        matched = target[idx]
    diff = moved - matched
    dist = np.linalg.norm(diff, axis=1)
    n = moved.shape[0]
    return float(dist.mean()), _unit_rows(diff, dist) / n


def _chamfer_term(moved: np.ndarray, target: np.ndarray,
                  target_tree: Optional[cKDTree] = None) -> Tuple[float, np.ndarray]:
    tree = target_tree if target_tree is not None else cKDTree(target)
    forward_dist, forward_idx = tree.query(moved)
    forward_diff = moved - target[forward_idx]
    weights = _unit_rows(forward_diff, forward_dist) / moved.shape[0]

    backward_dist, backward_idx = cKDTree(moved).query(target)
    backward_diff = moved[backward_idx] - target
    np.add.at(weights, backward_idx, _unit_rows(backward_diff, backward_dist) / target.shape[0])
    return float(forward_dist.mean() + backward_dist.mean()), weights


def _chain(params: PartParams, tr: _Transport, weights: np.ndarray) -> PartGradient:
    """Pull dL/d(moved points) back to the part parameters."""
    r, v, w = tr.direction, tr.offsets, weights
    s, c = math.sin(tr.angle), math.cos(tr.angle)
    r_dot_v = v @ r
    r_dot_w = w @ r
    w_sum = w.sum(axis=0)

    g_distance = float(w_sum @ r)
    d_rot = -s * v + c * np.cross(r, v) + s * np.outer(r_dot_v, r)
    g_angle = float(np.sum(w * d_rot))
    g_position = (np.eye(3) - tr.rotation).T @ w_sum
    g_r = (s * np.cross(v, w).sum(axis=0)
           + (1.0 - c) * ((r_dot_v[:, None] * w).sum(axis=0) + (r_dot_w[:, None] * v).sum(axis=0))
           + tr.distance * w_sum)
    norm = np.linalg.norm(params.direction_raw)
    g_raw = (g_r - r * np.dot(r, g_r)) / norm

    return PartGradient(
        direction_raw=g_raw,
        position=g_position,
        delta_alpha=g_distance * tr.signs,
        delta_phi=g_angle * tr.signs,
    )


def evaluate_losses(
    params: Mapping[int, PartParams],
    pair: StatePair,
    frames: PartFrames,
    lambda_motion: float = settings.LAMBDA_MOTION,
    lambda_align: float = 0.0,
    correspondent: bool = True,
    with_gradients: bool = True,
    trees: Optional[Mapping[Tuple[int, int], cKDTree]] = None,
) -> LossTerms:
    """Weighted loss ``lambda_motion * motion + lambda_align * alignment`` summed over parts."""
    terms = LossTerms(total=0.0)
    for label in sorted(params):
        part = params[label]
        source = frames[label][pair.a].points
        target = frames[label][pair.b].points
        tree = trees.get((label, pair.b)) if trees is not None else None
        tr = _transport(part, pair, source)

        value = 0.0
        weights = np.zeros_like(source)
        if lambda_motion:
            loss, w = _motion_term(tr.moved, target, correspondent, tree)
            value += lambda_motion * loss
            weights += lambda_motion * w
        if lambda_align:
            loss, w = _chamfer_term(tr.moved, target, tree)
            value += lambda_align * loss
            weights += lambda_align * w

        terms.per_part[label] = value
        terms.total += value
        if with_gradients:
            terms.gradients[label] = _chain(part, tr, weights)
    return terms


def transport_transform(params: PartParams, pair: StatePair):
    """Mat_{a->b} = Mat_b @ inv(Mat_a) for one part."""
    mat_a = screw_to_transform(cumulative_motion(params, pair.a))
    mat_b = screw_to_transform(cumulative_motion(params, pair.b))
    return compose(mat_b, invert(mat_a))


def motion_loss(params: Mapping[int, PartParams], pair: StatePair, frames: PartFrames,
                correspondent: bool = True) -> float:
    """Sum over parts of the mean distance between transported and observed points."""
    total = 0.0
    for label in sorted(params):
        moved = transport_transform(params[label], pair).apply(frames[label][pair.a].points)
        total += _motion_term(moved, frames[label][pair.b].points, correspondent)[0]
    return total


def alignment_loss(params: Mapping[int, PartParams], pair: StatePair, frames: PartFrames) -> float:
    """Symmetric chamfer distance between transported and observed points, summed over parts."""
    total = 0.0
    for label in sorted(params):
        moved = transport_transform(params[label], pair).apply(frames[label][pair.a].points)
        total += _chamfer_term(moved, frames[label][pair.b].points)[0]
    return total


def gradients(
    params: Mapping[int, PartParams],
    pair: StatePair,
    frames: PartFrames,
    lambda_motion: float = settings.LAMBDA_MOTION,
    lambda_align: float = 0.0,
    correspondent: bool = True,
) -> Dict[int, PartGradient]:
    return evaluate_losses(params, pair, frames, lambda_motion, lambda_align, correspondent).gradients
