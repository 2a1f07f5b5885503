import json

import pytest

from src.ingest.annotations import load_report
from src.ingest.records import MotionType
from src.ingest.scene_store import load_sequence, save_sequence
from src.interface.cli import main
from src.synth.generator import generate, write_labeled_scene
from tests.conftest import door_spec, outlier_spec

QUICK = {"total_iters": 1200, "iter_judge": 600, "axis_warmup_iters": 100, "log_every": 200}


@pytest.fixture
def quick_config(tmp_path):
    path = tmp_path / "configs" / "quick.json"
    path.parent.mkdir()
    path.write_text(json.dumps(QUICK))
    return path


def test_synth_spec_writes_loadable_scene(tmp_path):
    spec_path = tmp_path / "door.json"
    spec_path.write_text(json.dumps(door_spec().to_dict()))
    assert main(["synth", "--spec", str(spec_path), str(tmp_path / "out")]) == 0
    sequence = load_sequence(tmp_path / "out" / "door")
    assert sequence.num_parts == 1
    assert (tmp_path / "out" / "door" / "truth.json").is_file()


def test_synth_suite_writes_every_scene(tmp_path):
    assert main(["-q", "synth", "--suite", str(tmp_path / "suite")]) == 0
    scenes = [p for p in (tmp_path / "suite").iterdir() if p.is_dir()]
    assert len(scenes) >= 10


def test_synth_missing_parent_fails(tmp_path):
    spec_path = tmp_path / "door.json"
    spec_path.write_text(json.dumps(door_spec().to_dict()))
    target = tmp_path / "absent" / "out"
    assert main(["synth", "--spec", str(spec_path), str(target)]) == 1


def test_synth_needs_a_source(tmp_path):
    assert main(["synth", str(tmp_path / "out")]) == 2


def test_unknown_subcommand():
    assert main(["render"]) == 2


def test_analyze_eval_report_pipeline(tmp_path, quick_config, capsys):
    scene_dir = tmp_path / "door_outlier"
    truth_path = write_labeled_scene(generate(outlier_spec()), scene_dir)
    report_path = tmp_path / "report.json"
    trace_path = tmp_path / "trace.csv"

    code = main(["analyze", str(scene_dir), "--config", str(quick_config), "--seed", "3",
                 "--trace", str(trace_path), str(report_path)])
    assert code == 0
    report = load_report(report_path)
    assert report.pruned == [2]
    assert report.part(1).motion_type is MotionType.R
    assert trace_path.read_text().startswith("iteration,total,part_1,part_2")

    capsys.readouterr()
    assert main(["eval", str(report_path), str(truth_path)]) == 0
    table = capsys.readouterr().out
    assert "door" in table
    scored = load_report(report_path)
    assert scored.metrics.ta == 1.0
    assert scored.metrics.iou == 1.0
    assert scored.metrics.ae_deg < 2.0

    assert main(["report", "--csv", str(tmp_path / "*.json")]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "category,scenes,AE,PE,TA,IOU"
    assert lines[-1].startswith("mean,1,")


def test_analyze_is_reproducible(tmp_path, quick_config):
    scene_dir = tmp_path / "door"
    write_labeled_scene(generate(door_spec()), scene_dir)
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    for target in (first, second):
        assert main(["analyze", str(scene_dir), "--config", str(quick_config), str(target)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_analyze_single_frame_scene_fails(tmp_path, door_scene):
    scene_dir = tmp_path / "door"
    save_sequence(door_scene.sequence, scene_dir)
    manifest = json.loads((scene_dir / "manifest.json").read_text())
    manifest["frames"] = 1
    (scene_dir / "manifest.json").write_text(json.dumps(manifest))
    for extra in sorted(scene_dir.glob("frame_*.ply"))[1:]:
        extra.unlink()
    assert main(["analyze", str(scene_dir), str(tmp_path / "report.json")]) == 1


def test_analyze_missing_config(tmp_path, door_scene):
    scene_dir = tmp_path / "door"
    save_sequence(door_scene.sequence, scene_dir)
    code = main(["analyze", str(scene_dir), "--config", str(tmp_path / "nope.json"), str(tmp_path / "r.json")])
    assert code == 1


def test_report_without_metrics_fails(tmp_path, capsys):
    report = tmp_path / "report.json"
    report.write_text(json.dumps({"parts": [], "pruned": [1]}))
    assert main(["report", str(report)]) == 1
    assert capsys.readouterr().out == ""


def test_report_with_no_matches_fails(tmp_path):
    assert main(["report", str(tmp_path / "*.json")]) == 1


def test_eval_with_disjoint_labels_fails(tmp_path, door_scene):
    scene_dir = tmp_path / "door"
    truth_path = write_labeled_scene(door_scene, scene_dir)
    report = tmp_path / "report.json"
    report.write_text(json.dumps({
        "parts": [{"label": 7, "type": "R", "axis": {"direction": [0, 0, 1], "position": [0, 0, 0]},
                   "delta_alpha": [0.0], "delta_phi": [0.0]}],
        "pruned": [],
    }))
    assert main(["eval", str(report), str(truth_path)]) == 1


def test_synth_applies_noise_and_seed_overrides(tmp_path):
    spec_path = tmp_path / "door.json"
    spec_path.write_text(json.dumps(door_spec().to_dict()))
    assert main(["synth", "--spec", str(spec_path), "--noise", "0.01", "--seed", "9", str(tmp_path / "out")]) == 0
    metadata = load_sequence(tmp_path / "out" / "door").metadata
    assert metadata["noise"] == "0.01"
    assert metadata["seed"] == "9"


def test_analyze_saves_effective_config(tmp_path, quick_config):
    scene_dir = tmp_path / "door"
    write_labeled_scene(generate(door_spec()), scene_dir)
    saved = tmp_path / "effective.json"
    code = main(["analyze", str(scene_dir), "--config", str(quick_config), "--seed", "3",
                 "--save-config", str(saved), str(tmp_path / "report.json")])
    assert code == 0
    values = json.loads(saved.read_text())
    assert values["seed"] == 3
    assert values["total_iters"] == QUICK["total_iters"]
    assert values["judge_window"] == 200
