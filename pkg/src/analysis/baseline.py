"""Axis estimation from a single registration, given true parts and motion types."""
from typing import Dict, Mapping

import numpy as np

from src.analysis.initialization import register, select_max_motion_pair
from src.errors import DegenerateGeometry
from src.geometry.point_cloud import centroid
from src.geometry.transforms import ScrewAxis, screw_decompose
from src.ingest.records import MotionType, SceneSequence


def estimate_without_optimization(
    sequence: SceneSequence,
    gt_parts,
    gt_types: Mapping[int, MotionType],
) -> Dict[int, ScrewAxis]:
    """One axis per moving part, no iteration.

    T parts take the registration's translation direction through the
    first-frame centroid; R and RT parts take its screw axis.
    """
    axes = {}
    for label in gt_parts:
        kind = gt_types[label]
        if not kind.moves:
            continue
        frames = sequence.part_frames(label)
        i, j = select_max_motion_pair(frames, sequence.correspondent)
        transform = register(frames[i], frames[j], sequence.correspondent)
        if kind is MotionType.T:
            t = transform.translation
            norm = np.linalg.norm(t)
            if norm == 0.0:
                raise DegenerateGeometry(f"part {label} shows no translation between frames {i} and {j}")
            axes[label] = ScrewAxis(t / norm, centroid(frames[0]))
        else:
            axes[label] = screw_decompose(transform).axis
    return axes
