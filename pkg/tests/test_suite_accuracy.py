"""Full-length runs over the built-in scenes."""
import numpy as np
import pytest

from src.analysis.baseline import estimate_without_optimization
from src.analysis.initialization import initialize_parts
from src.analysis.optimizer import moving_average, optimize_scene
from src.analysis.pipeline import analyze_sequence, build_report
from src.config.optim_config import OptimConfig
from src.evaluation.metrics import angle_error, evaluate, scene_diameter
from src.ingest.annotations import save_report
from src.synth.generator import generate
from src.synth.suite import builtin_suite, door

pytestmark = pytest.mark.slow

SUITE = builtin_suite()


@pytest.fixture(scope="module")
def clean_runs():
    runs = {}
    for spec in SUITE:
        scene = generate(spec)
        cfg = OptimConfig()
        result = optimize_scene(scene.sequence, initialize_parts(scene.sequence, cfg), cfg)
        runs[spec.name] = (scene, build_report(scene.sequence, result), result.trace)
    return runs


def test_clean_suite_accuracy(clean_runs):
    angle_errors, relative_position_errors = [], []
    for name, (scene, report, _) in clean_runs.items():
        block = evaluate(report, scene.truth, scene.sequence)
        assert block.ta == 1.0, name
        assert block.iou == 1.0, name
        outliers = [label for label, part in scene.truth.parts.items() if not part.motion_type.moves]
        assert set(outliers) <= set(report.pruned), name
        angle_errors.append(block.ae_deg)
        if block.pe is not None:
            relative_position_errors.append(block.pe / scene_diameter(scene.sequence))
    assert np.mean(angle_errors) <= 1.0
    assert np.mean(relative_position_errors) <= 0.01


def test_windowed_loss_never_rises_materially_on_any_scene(clean_runs):
    for name, (_, _, trace) in clean_runs.items():
        smoothed = moving_average(trace.totals, width=200)
        rises = smoothed - np.minimum.accumulate(smoothed)
        assert np.max(rises) <= 0.05 * smoothed[0], name


@pytest.mark.parametrize("spec", SUITE, ids=lambda spec: spec.name)
def test_reports_are_byte_identical_across_runs(spec, clean_runs, tmp_path):
    _, first, _ = clean_runs[spec.name]
    second = analyze_sequence(clean_runs[spec.name][0].sequence, OptimConfig())
    save_report(first, tmp_path / "first.json")
    save_report(second, tmp_path / "second.json")
    assert (tmp_path / "first.json").read_bytes() == (tmp_path / "second.json").read_bytes()


@pytest.mark.parametrize("offset", range(5))
def test_noisy_suite_robustness_and_benefit_of_optimization(offset):
    optimized, single_pair, accuracies = [], [], []
    for spec in SUITE:
        scene = generate(spec.with_overrides(noise=0.01, seed=spec.seed + 100 + offset))
        truth = scene.truth
        report = analyze_sequence(scene.sequence, OptimConfig())
        block = evaluate(report, truth, scene.sequence)
        accuracies.append(block.ta)
        outliers = [label for label, part in truth.parts.items() if not part.motion_type.moves]
        assert set(outliers) <= set(report.pruned), spec.name

        types = {label: part.motion_type for label, part in truth.parts.items()}
        baseline = estimate_without_optimization(scene.sequence, truth.labels, types)
        for label in truth.moving_labels:
            part = report.part(label)
            if part is None:
                continue
            optimized.append(angle_error(part.axis, truth.parts[label].axis))
            single_pair.append(angle_error(baseline[label], truth.parts[label].axis))
    assert np.mean(optimized) <= 5.0
    assert np.mean(accuracies) >= 0.9
    assert np.mean(optimized) < np.mean(single_pair)


def test_optimization_beats_single_pair_estimate_over_seeds():
    optimized, single_pair = [], []
    for seed in range(20):
        scene = generate(door().with_overrides(noise=0.01, seed=seed))
        axis = scene.truth.parts[1].axis
        report = analyze_sequence(scene.sequence, OptimConfig(seed=seed))
        baseline = estimate_without_optimization(
            scene.sequence, [1], {1: scene.truth.parts[1].motion_type},
        )
        optimized.append(angle_error(report.part(1).axis, axis))
        single_pair.append(angle_error(baseline[1], axis))
    assert np.mean(single_pair) > np.mean(optimized)
