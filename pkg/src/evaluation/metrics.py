"""Axis, type and segmentation metrics between an analysis report and its ground truth.

Parts are matched by label. AE ignores axis orientation and PE measures the
distance between infinite lines.
"""
import math
from typing import Dict, Optional

import numpy as np
from scipy.spatial import cKDTree

from src.config import settings
from src.errors import MatchError
from src.geometry.transforms import ScrewAxis
from src.ingest.records import AnalysisReport, GroundTruth, MetricBlock, MotionType, SceneSequence
from src.logging_utils.logger import get_logger

PARALLEL_EPSILON = 1e-12

log = get_logger("evaluation")


def angle_error(pred: ScrewAxis, gt: ScrewAxis) -> float:
    """Angle in degrees between the axis lines, in [0, 90]."""
    cross = float(np.linalg.norm(np.cross(pred.direction, gt.direction)))
    dot = abs(float(np.dot(pred.direction, gt.direction)))
    return math.degrees(math.atan2(cross, dot))


def position_error(pred: ScrewAxis, gt: ScrewAxis) -> float:
    offset = gt.position - pred.position
    normal = np.cross(pred.direction, gt.direction)
    normal_norm = float(np.linalg.norm(normal))
    if normal_norm < PARALLEL_EPSILON:
        return float(np.linalg.norm(offset - np.dot(offset, pred.direction) * pred.direction))
    return abs(float(np.dot(offset, normal))) / normal_norm


def _check_matched(report: AnalysisReport, truth: GroundTruth) -> None:
    if not set(report.labels) & set(truth.labels):
        raise MatchError(
            f"report labels {report.labels} and ground-truth labels {truth.labels} are disjoint"
        )


def predicted_type(report: AnalysisReport, label: int) -> MotionType:
    part = report.part(label)
    return part.motion_type if part is not None else MotionType.PRUNED


def type_accuracy(report: AnalysisReport, truth: GroundTruth) -> float:
    """Correct true movers over true movers plus true statics the report kept."""
    _check_matched(report, truth)
    correct = 0
    counted = 0
    for label, part in truth.parts.items():
        predicted = predicted_type(report, label)
        if part.motion_type.moves:
            counted += 1
            correct += int(predicted is part.motion_type)
        elif predicted is not MotionType.PRUNED:
            # kept static is scored as type STATIC against its prediction
            counted += 1
    return correct / counted if counted else 1.0


def index_iou(predicted: np.ndarray, expected: np.ndarray) -> float:
    predicted = np.unique(np.asarray(predicted, dtype=int))
    expected = np.unique(np.asarray(expected, dtype=int))
    union = np.union1d(predicted, expected).size
    if union == 0:
        return 1.0
    return np.intersect1d(predicted, expected).size / union


def nearest_neighbour_iou(predicted: np.ndarray, expected: np.ndarray, radius: float) -> float:
    """IOU of point sets where an expected point counts as shared when a predicted point lies within ``radius``."""
    if len(predicted) == 0 and len(expected) == 0:
        return 1.0
    if len(predicted) == 0 or len(expected) == 0:
        return 0.0
    distances, _ = cKDTree(predicted).query(expected, k=1)
    shared = int(np.count_nonzero(distances <= radius))
    return shared / (len(predicted) + len(expected) - shared)


def predicted_members(report: AnalysisReport, sequence: SceneSequence, frame: int = 0) -> Dict[int, np.ndarray]:
    """Point indices each report part claims: a retained label owns its segment, a pruned one owns nothing."""
    index_sets = sequence.label_index_sets(frame)
    empty = np.array([], dtype=int)
    return {label: index_sets[label] if label in report.retained_labels else empty
            for label in sequence.part_labels}


def scene_diameter(sequence: SceneSequence, frame: int = 0) -> float:
    points = sequence.all_points(frame)
    return 2.0 * float(np.max(np.linalg.norm(points - points.mean(axis=0), axis=1)))


def part_iou(
    report: AnalysisReport,
    truth: GroundTruth,
    sequence: Optional[SceneSequence] = None,
    members: Optional[Dict[int, np.ndarray]] = None,
) -> float:
    """Mean IOU over the true moving parts.

    With a sequence the comparison is point-level on frame 0: index sets on
    correspondent data, nearest-neighbour matching otherwise. Without one it
    falls back to label level (a retained true mover scores 1, a pruned one 0).
    """
    _check_matched(report, truth)
    moving = truth.moving_labels
    if not moving:
        return 1.0

    if sequence is None:
        return float(np.mean([1.0 if label in report.retained_labels else 0.0 for label in moving]))

    index_sets = sequence.label_index_sets(0)
    members = members if members is not None else predicted_members(report, sequence)
    empty = np.array([], dtype=int)
    scores = []
    if sequence.correspondent:
        for label in moving:
            scores.append(index_iou(members.get(label, empty), index_sets.get(label, empty)))
    else:
        points = sequence.all_points(0)
        radius = settings.IOU_NN_FACTOR * scene_diameter(sequence)
        for label in moving:
            scores.append(nearest_neighbour_iou(
                points[members.get(label, empty)], points[index_sets.get(label, empty)], radius,
            ))
    return float(np.mean(scores))


def evaluate(
    report: AnalysisReport,
    truth: GroundTruth,
    sequence: Optional[SceneSequence] = None,
) -> MetricBlock:
    """AE and PE are means over true movers the report kept; PE only over rotating truth."""
    _check_matched(report, truth)
    angle_errors = []
    position_errors = []
    for label in truth.moving_labels:
        gt = truth.parts[label]
        part = report.part(label)
        if part is None:
            continue
        angle_errors.append(angle_error(part.axis, gt.axis))
        if gt.motion_type.rotates:
            position_errors.append(position_error(part.axis, gt.axis))

    block = MetricBlock(
        iou=part_iou(report, truth, sequence),
        ta=type_accuracy(report, truth),
        ae_deg=float(np.mean(angle_errors)) if angle_errors else None,
        pe=float(np.mean(position_errors)) if position_errors else None,
    )
    log.debug("Metrics: %s", block.to_dict())
    return block
