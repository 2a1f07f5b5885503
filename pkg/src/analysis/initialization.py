"""Motion-attribute initialization from the largest-motion frame pair of each part."""
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.config import settings
from src.config.optim_config import OptimConfig
from src.errors import DegenerateGeometry, ZeroMotion
from src.geometry.point_cloud import PointCloud, centroid, enclosing_radius
from src.geometry.registration import icp_align, kabsch_align
from src.geometry.transforms import CANONICAL_DIRECTION, RigidTransform, ScrewAxis, screw_decompose
from src.ingest.records import MotionType, SceneSequence
from src.logging_utils.logger import get_logger

log = get_logger("init")


@dataclass(frozen=True)
class MotionInit:
    label: int
    axis: ScrewAxis
    angle: float
    translation_norm: float
    assumed_type: MotionType = MotionType.RT
    pair: Tuple[int, int] = (0, 1)
    zero_motion: bool = False


def _corresponded(a: PointCloud, b: PointCloud, correspondent: bool) -> bool:
    return correspondent and len(a) == len(b)


def motion_magnitude(a: PointCloud, b: PointCloud, correspondent: bool = True) -> float:
    """Mean per-point displacement, or centroid displacement without correspondences."""
    if _corresponded(a, b, correspondent):
        return float(np.mean(np.linalg.norm(b.points - a.points, axis=1)))
    return float(np.linalg.norm(centroid(b) - centroid(a)))


def select_max_motion_pair(
    part_frames: Sequence[PointCloud],
    correspondent: bool = True,
    all_pairs_limit: int = settings.ALL_PAIRS_LIMIT,
) -> Tuple[int, int]:
    """0-based frame pair (i < j) with the largest motion magnitude.

    Every pair is scored up to ``all_pairs_limit`` frames; longer sequences
    only compare the first frame against each later one.
    """
    n = len(part_frames)
    if n < 2:
        raise ValueError(f"need at least 2 frames, got {n}")
    if n <= all_pairs_limit:
        candidates = [(i, j) for i in range(n) for j in range(i + 1, n)]
    else:
        candidates = [(0, j) for j in range(1, n)]

    best, best_score = candidates[0], -1.0
    for i, j in candidates:
        score = motion_magnitude(part_frames[i], part_frames[j], correspondent)
        if score > best_score:
            best, best_score = (i, j), score
    return best


def register(src: PointCloud, dst: PointCloud, correspondent: bool = True) -> RigidTransform:
    if _corresponded(src, dst, correspondent):
        return kabsch_align(src, dst)
    transform, residual = icp_align(src, dst)
    log.debug("ICP registration residual %.3g", residual)
    return transform


def init_motion_axis(
    p_i: PointCloud,
    p_j: PointCloud,
    p_first: PointCloud,
    theta_min: float = math.radians(settings.THETA_MIN_DEG),
    label: int = 0,
    correspondent: bool = True,
    pair: Tuple[int, int] = (0, 1),
) -> MotionInit:
    """Register ``p_i`` onto ``p_j`` and branch on the decomposed rotation angle.

    Above ``theta_min`` the screw axis of the registration is used; otherwise
    the axis follows the translation through the first-frame centroid.
    """
    transform = register(p_i, p_j, correspondent)
    screw = screw_decompose(transform)
    t = transform.translation
    t_norm = float(np.linalg.norm(t))

    if screw.angle > theta_min:
        axis = screw.axis
    else:
        length_epsilon = settings.ZERO_MOTION_FACTOR * enclosing_radius(p_first)
        if t_norm < length_epsilon or t_norm == 0.0:
            raise ZeroMotion(
                f"part {label}: rotation {math.degrees(screw.angle):.3g} deg and translation {t_norm:.3g} "
                f"between frames {pair[0]} and {pair[1]} are below threshold",
                label=label,
            )
        axis = ScrewAxis(t / t_norm, centroid(p_first))

    return MotionInit(
        label=label,
        axis=axis,
        angle=screw.angle,
        translation_norm=t_norm,
        pair=pair,
    )


def placeholder_init(label: int, p_first: PointCloud, zero_motion: bool = False) -> MotionInit:
    return MotionInit(
        label=label,
        axis=ScrewAxis(CANONICAL_DIRECTION, centroid(p_first)),
        angle=0.0,
        translation_norm=0.0,
        zero_motion=zero_motion,
    )


def initialize_parts(sequence: SceneSequence, cfg: Optional[OptimConfig] = None) -> List[MotionInit]:
    """MotionInit for every part label.

    Parts without measurable motion, or too degenerate to register, get a
    placeholder axis flagged ``zero_motion``; judgment later prunes them.
    """
    cfg = cfg or OptimConfig()
    inits = []
    for label in sequence.part_labels:
        frames = sequence.part_frames(label)
        if not cfg.axis_init:
            inits.append(placeholder_init(label, frames[0]))
            continue
        i, j = select_max_motion_pair(frames, sequence.correspondent)
        try:
            init = init_motion_axis(
                frames[i], frames[j], frames[0], cfg.theta_min,
                label=label, correspondent=sequence.correspondent, pair=(i, j),
            )
            branch = "rotation" if init.angle > cfg.theta_min else "translation"
            log.info(
                "Part %d: %s branch from frames (%d, %d), angle %.2f deg",
                label, branch, i, j, math.degrees(init.angle),
            )
        except ZeroMotion as exc:
            log.warning("%s; recorded as a static outlier candidate", exc)
            init = placeholder_init(label, frames[0], zero_motion=True)
        except DegenerateGeometry as exc:
            log.warning("Part %d cannot be registered (%s); recorded as a static outlier candidate", label, exc)
            init = placeholder_init(label, frames[0], zero_motion=True)
        inits.append(init)
    return inits
