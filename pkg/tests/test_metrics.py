import math

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from src.errors import MatchError
from src.evaluation.metrics import (
    angle_error,
    evaluate,
    index_iou,
    nearest_neighbour_iou,
    part_iou,
    position_error,
    type_accuracy,
)
from src.evaluation.summary import format_csv, format_table, summarize
from src.geometry.point_cloud import PointCloud
from src.geometry.transforms import ScrewAxis
from src.ingest.records import (
    AnalysisReport,
    FrameData,
    GroundTruth,
    MetricBlock,
    MotionType,
    PartResult,
    PartTruth,
    SceneSequence,
)
from tests.conftest import random_axis

Z_AXIS = ScrewAxis([0.0, 0.0, 1.0], [0.0, 0.0, 0.0])


def _truth(types):
    parts = {}
    for label, kind in types.items():
        axis = None if kind is MotionType.STATIC else ScrewAxis([0.0, 0.0, 1.0], [float(label), 0.0, 0.0])
        parts[label] = PartTruth(label=label, motion_type=kind, axis=axis)
    return GroundTruth(parts=parts)


def _perfect_report(truth, types=None, pruned=()):
    types = types or {label: part.motion_type for label, part in truth.parts.items()}
    parts = [
        PartResult(label=label, motion_type=kind, axis=truth.parts[label].axis,
                   delta_alpha=np.zeros(2), delta_phi=np.zeros(2))
        for label, kind in types.items() if label not in pruned
    ]
    return AnalysisReport(parts=parts, pruned=sorted(pruned))


def test_angle_error_examples():
    assert angle_error(Z_AXIS, Z_AXIS) == 0.0
    x = ScrewAxis([1.0, 0.0, 0.0], [0.0, 0.0, 0.0])
    y = ScrewAxis([0.0, 1.0, 0.0], [0.0, 0.0, 0.0])
    assert angle_error(x, y) == pytest.approx(90.0)
    flipped = ScrewAxis([0.0, 0.0, -1.0], [0.0, 0.0, 0.0])
    assert angle_error(Z_AXIS, flipped) == 0.0


def test_angle_error_symmetric_and_flip_invariant(rng):
    for _ in range(100):
        a, b = random_axis(rng), random_axis(rng)
        flipped = ScrewAxis(-a.direction, a.position)
        assert angle_error(a, b) == pytest.approx(angle_error(b, a), abs=1e-12)
        assert angle_error(flipped, b) == pytest.approx(angle_error(a, b), abs=1e-12)
        assert 0.0 <= angle_error(a, b) <= 90.0


def test_position_error_examples():
    slid = ScrewAxis([0.0, 0.0, 1.0], [0.0, 0.0, 4.0])
    assert position_error(Z_AXIS, slid) == 0.0
    offset = ScrewAxis([0.0, 0.0, 1.0], [0.05, 0.0, 0.0])
    assert position_error(Z_AXIS, offset) == pytest.approx(0.05)
    skew = ScrewAxis([0.0, 1.0, 0.0], [1.0, 0.0, 0.0])
    assert position_error(Z_AXIS, skew) == pytest.approx(1.0)


def test_position_error_matches_brute_force(rng):
    a, b = random_axis(rng), random_axis(rng)
    s = np.linspace(-6.0, 6.0, 1201)
    pa = a.position + s[:, None] * a.direction
    pb = b.position + s[:, None] * b.direction
    brute = np.min(np.linalg.norm(pa[:, None, :] - pb[None, :, :], axis=2))
    assert position_error(a, b) == pytest.approx(brute, abs=0.02)
    assert position_error(a, b) <= brute + 1e-12


def test_position_error_invariant_to_anchor_slides(rng):
    for _ in range(50):
        a, b = random_axis(rng), random_axis(rng)
        base = position_error(a, b)
        for shift in (-10.0, 10.0):
            slid_a = ScrewAxis(a.direction, a.position + shift * a.direction)
            slid_b = ScrewAxis(b.direction, b.position - shift * b.direction)
            assert abs(position_error(slid_a, slid_b) - base) < 1e-10


def test_metrics_invariant_under_global_rigid_motion(rng):
    rotation = Rotation.from_rotvec([0.3, -0.2, 0.9]).as_matrix()
    translation = np.array([1.0, -2.0, 0.5])

    def moved(axis):
        return ScrewAxis(rotation @ axis.direction, rotation @ axis.position + translation)

    for _ in range(50):
        a, b = random_axis(rng), random_axis(rng)
        assert abs(angle_error(moved(a), moved(b)) - angle_error(a, b)) < 1e-9
        assert abs(position_error(moved(a), moved(b)) - position_error(a, b)) < 1e-9


def test_perfect_report_scores_full_marks():
    truth = _truth({1: MotionType.R, 2: MotionType.T, 3: MotionType.STATIC})
    report = _perfect_report(truth, {1: MotionType.R, 2: MotionType.T}, pruned=())
    report.pruned = [3]
    block = evaluate(report, truth)
    assert block.ta == 1.0
    assert block.iou == 1.0
    assert block.ae_deg == 0.0
    assert block.pe == 0.0


def test_one_wrong_type_of_three():
    truth = _truth({1: MotionType.T, 2: MotionType.T, 3: MotionType.R})
    report = _perfect_report(truth, {1: MotionType.R, 2: MotionType.T, 3: MotionType.R})
    assert type_accuracy(report, truth) == pytest.approx(2.0 / 3.0)


def test_pruned_mover_and_kept_static_count_against_accuracy():
    truth = _truth({1: MotionType.R, 2: MotionType.STATIC})
    pruned_mover = _perfect_report(truth, {2: MotionType.R}, pruned=(1,))
    pruned_mover.parts[0].axis = Z_AXIS
    assert type_accuracy(pruned_mover, truth) == 0.0

    kept_static = _perfect_report(truth, {1: MotionType.R}, pruned=())
    kept_static.parts.append(PartResult(2, MotionType.T, Z_AXIS, np.zeros(2), np.zeros(2)))
    assert type_accuracy(kept_static, truth) == pytest.approx(0.5)


def test_pe_only_over_rotating_parts():
    truth = _truth({1: MotionType.T})
    block = evaluate(_perfect_report(truth), truth)
    assert block.pe is None
    assert block.ae_deg == 0.0


def test_disjoint_labels_raise_match_error():
    truth = _truth({1: MotionType.R})
    report = AnalysisReport(
        parts=[PartResult(5, MotionType.R, Z_AXIS, np.zeros(1), np.zeros(1))], pruned=[],
    )
    with pytest.raises(MatchError):
        evaluate(report, truth)


def test_index_iou_half_coverage():
    expected = np.arange(100)
    assert index_iou(expected[:50], expected) == pytest.approx(0.5)
    assert index_iou(expected, expected) == 1.0
    assert index_iou(np.array([], dtype=int), expected) == 0.0


def test_nearest_neighbour_iou(rng):
    points = rng.uniform(size=(80, 3))
    assert nearest_neighbour_iou(points, rng.permutation(points), 1e-9) == 1.0
    assert nearest_neighbour_iou(points[:40], points, 1e-9) == pytest.approx(0.5)
    assert nearest_neighbour_iou(points[:0], points, 1e-9) == 0.0


def _two_part_sequence(correspondent=True):
    clouds = {
        0: PointCloud(np.zeros((4, 3)) + [0.0, 0.0, -1.0] + np.eye(4, 3)),
        1: PointCloud(np.arange(12, dtype=float).reshape(4, 3)),
        2: PointCloud(np.arange(12, dtype=float).reshape(4, 3) + 20.0),
    }
    frames = [FrameData(i, dict(clouds), correspondent=correspondent) for i in range(2)]
    return SceneSequence(frames=frames)


def test_point_level_iou_with_pruned_mover():
    sequence = _two_part_sequence()
    truth = _truth({1: MotionType.R, 2: MotionType.R})
    report = _perfect_report(truth, {2: MotionType.R, 1: MotionType.R}, pruned=(1,))
    assert part_iou(report, truth, sequence) == pytest.approx(0.5)


def test_point_level_iou_with_partial_membership():
    sequence = _two_part_sequence()
    truth = _truth({1: MotionType.R})
    report = _perfect_report(truth)
    index_sets = sequence.label_index_sets(0)
    members = {1: index_sets[1][:2]}
    assert part_iou(report, truth, sequence, members=members) == pytest.approx(0.5)


def test_nearest_neighbour_iou_without_correspondence():
    sequence = _two_part_sequence(correspondent=False)
    truth = _truth({1: MotionType.R, 2: MotionType.T})
    assert part_iou(_perfect_report(truth), truth, sequence) == 1.0


def _scored(category, ae, pe, ta, iou):
    return AnalysisReport(parts=[], pruned=[], metrics=MetricBlock(iou=iou, ta=ta, ae_deg=ae, pe=pe),
                          metadata={"category": category})


def test_summary_groups_by_category(tmp_path):
    reports = {
        tmp_path / "a.json": _scored("door", 1.0, 0.02, 1.0, 1.0),
        tmp_path / "b.json": _scored("door", 3.0, 0.04, 1.0, 1.0),
        tmp_path / "c.json": _scored("drawer", 2.0, None, 0.5, 1.0),
    }
    rows = summarize(reports)
    assert [row.category for row in rows] == ["door", "drawer", "mean"]
    assert rows[0].ae == pytest.approx(2.0)
    assert rows[0].pe == pytest.approx(0.03)
    assert rows[1].pe is None
    assert rows[2].ae == pytest.approx(2.0)
    assert rows[2].ta == pytest.approx(0.75)
    assert rows[2].scenes == 3

    table = format_table(rows)
    assert "door" in table and "2.000" in table
    csv_text = format_csv(rows)
    assert csv_text.splitlines()[0] == "category,scenes,AE,PE,TA,IOU"
    assert csv_text.splitlines()[2] == "drawer,1,2.000,,0.500,1.000"


def test_perfect_report_table_row(tmp_path):
    rows = summarize({tmp_path / "r.json": _scored("door", 0.0, 0.0, 1.0, 1.0)})
    assert "0.000" in format_table(rows).splitlines()[2]


def test_global_rigid_motion_leaves_scene_metrics_unchanged():
    rotation = Rotation.from_rotvec([0.1, 0.7, -0.4]).as_matrix()
    truth = _truth({1: MotionType.R, 2: MotionType.RT})
    report = _perfect_report(truth)
    report.parts[0].axis = ScrewAxis.from_vectors([0.1, 0.0, 1.0], [1.2, 0.1, 0.0])

    def move(axis):
        return ScrewAxis(rotation @ axis.direction, rotation @ axis.position + np.array([3.0, 0.0, -1.0]))

    moved_truth = GroundTruth({label: PartTruth(label, p.motion_type, move(p.axis)) for label, p in truth.parts.items()})
    moved_report = _perfect_report(moved_truth)
    moved_report.parts[0].axis = move(report.parts[0].axis)

    a, b = evaluate(report, truth), evaluate(moved_report, moved_truth)
    assert abs(a.ae_deg - b.ae_deg) < 1e-9
    assert abs(a.pe - b.pe) < 1e-9
    assert a.ta == b.ta and a.iou == b.iou
    assert a.ae_deg > 0.0 and math.isfinite(a.pe)
