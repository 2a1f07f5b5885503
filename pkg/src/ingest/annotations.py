"""JSON files for ground-truth annotations and analysis reports.

Report schema::

    {"parts": [{"label", "type", "axis": {"direction": [3], "position": [3]},
                "delta_alpha": [], "delta_phi": [], "total_alpha", "total_phi"}],
     "pruned": [labels],
     "metrics": {"ae_deg", "pe", "ta", "iou"},      # optional
     "loss": {"initial", "final", "iterations"},    # optional
     "metadata": {...}}                             # optional
"""
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np

from src.errors import FormatError
from src.geometry.transforms import ScrewAxis
from src.ingest.records import (
    AnalysisReport,
    GroundTruth,
    LossSummary,
    MetricBlock,
    MotionType,
    PartResult,
    PartTruth,
)
from src.ingest.scene_store import read_json, write_json

TRUTH_TYPES = {MotionType.T, MotionType.R, MotionType.RT, MotionType.STATIC}
REPORT_TYPES = {MotionType.T, MotionType.R, MotionType.RT}


def _axis_to_dict(axis: ScrewAxis) -> Dict:
    return {"direction": [float(v) for v in axis.direction], "position": [float(v) for v in axis.position]}


def _axis_from_dict(data, path: Path, where: str) -> ScrewAxis:
    try:
        direction = np.array(data["direction"], dtype=float)
        position = np.array(data["position"], dtype=float)
        if direction.shape != (3,) or position.shape != (3,):
            raise ValueError("direction and position need 3 components")
        if abs(np.linalg.norm(direction) - 1.0) <= 1e-9:
            return ScrewAxis(direction, position)
        return ScrewAxis.from_vectors(direction, position)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{where}: invalid axis ({exc})", path) from None


def _float_list(data, path: Path, where: str) -> np.ndarray:
    try:
        values = np.array(data, dtype=float).reshape(-1)
    except (TypeError, ValueError):
        raise FormatError(f"{where}: expected a list of numbers", path) from None
    if not np.all(np.isfinite(values)):
        raise FormatError(f"{where}: non-finite value", path)
    return values


def _motion_type(value, allowed, path: Path, where: str) -> MotionType:
    try:
        motion_type = MotionType(value)
    except ValueError:
        raise FormatError(f"{where}: unknown motion type {value!r}", path) from None
    if motion_type not in allowed:
        raise FormatError(f"{where}: motion type {value!r} not allowed here", path)
    return motion_type


def _label(value, path: Path, where: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise FormatError(f"{where}: part label must be a positive integer, got {value!r}", path)
    return value


def ground_truth_to_dict(truth: GroundTruth) -> Dict:
    parts = []
    for label in truth.labels:
        part = truth.parts[label]
        entry: Dict = {"label": label, "type": part.motion_type.value}
        if part.axis is not None:
            entry["axis"] = _axis_to_dict(part.axis)
        if part.delta_alpha is not None:
            entry["delta_alpha"] = [float(v) for v in part.delta_alpha]
        if part.delta_phi is not None:
            entry["delta_phi"] = [float(v) for v in part.delta_phi]
        parts.append(entry)
    return {"parts": parts}


def save_ground_truth(truth: GroundTruth, path: Union[str, Path]) -> None:
    write_json(Path(path), ground_truth_to_dict(truth))


def load_ground_truth(path: Union[str, Path]) -> GroundTruth:
    path = Path(path)
    data = read_json(path)
    entries = data.get("parts")
    if not isinstance(entries, list):
        raise FormatError("'parts' must be a list", path)

    parts = {}
    for i, entry in enumerate(entries):
        where = f"parts[{i}]"
        if not isinstance(entry, dict):
            raise FormatError(f"{where}: expected an object", path)
        label = _label(entry.get("label"), path, where)
        if label in parts:
            raise FormatError(f"{where}: duplicate label {label}", path)
        motion_type = _motion_type(entry.get("type"), TRUTH_TYPES, path, where)
        axis = None
        if motion_type is not MotionType.STATIC:
            if "axis" not in entry:
                raise FormatError(f"{where}: type {motion_type.value} needs an axis", path)
            axis = _axis_from_dict(entry["axis"], path, where)
        parts[label] = PartTruth(
            label=label,
            motion_type=motion_type,
            axis=axis,
            delta_alpha=_float_list(entry["delta_alpha"], path, where) if "delta_alpha" in entry else None,
            delta_phi=_float_list(entry["delta_phi"], path, where) if "delta_phi" in entry else None,
        )
    return GroundTruth(parts=parts)


def report_to_dict(report: AnalysisReport) -> Dict:
    payload: Dict = {
        "parts": [
            {
                "label": part.label,
                "type": part.motion_type.value,
                "axis": _axis_to_dict(part.axis),
                "delta_alpha": [float(v) for v in part.delta_alpha],
                "delta_phi": [float(v) for v in part.delta_phi],
                "total_alpha": part.total_alpha,
                "total_phi": part.total_phi,
            }
            for part in sorted(report.parts, key=lambda p: p.label)
        ],
        "pruned": sorted(int(label) for label in report.pruned),
    }
    if report.metrics is not None:
        payload["metrics"] = report.metrics.to_dict()
    if report.loss is not None:
        payload["loss"] = report.loss.to_dict()
    if report.metadata:
        payload["metadata"] = dict(sorted(report.metadata.items()))
    return payload


def save_report(report: AnalysisReport, path: Union[str, Path]) -> None:
    write_json(Path(path), report_to_dict(report))


def load_report(path: Union[str, Path]) -> AnalysisReport:
    path = Path(path)
    data = read_json(path)
    entries = data.get("parts")
    pruned = data.get("pruned")
    if not isinstance(entries, list) or not isinstance(pruned, list):
        raise FormatError("report needs 'parts' and 'pruned' lists", path)

    parts: List[PartResult] = []
    for i, entry in enumerate(entries):
        where = f"parts[{i}]"
        if not isinstance(entry, dict):
            raise FormatError(f"{where}: expected an object", path)
        for key in ("label", "type", "axis", "delta_alpha", "delta_phi"):
            if key not in entry:
                raise FormatError(f"{where}: missing {key!r}", path)
        delta_alpha = _float_list(entry["delta_alpha"], path, where)
        delta_phi = _float_list(entry["delta_phi"], path, where)
        if delta_alpha.shape != delta_phi.shape:
            raise FormatError(f"{where}: delta_alpha and delta_phi differ in length", path)
        parts.append(PartResult(
            label=_label(entry["label"], path, where),
            motion_type=_motion_type(entry["type"], REPORT_TYPES, path, where),
            axis=_axis_from_dict(entry["axis"], path, where),
            delta_alpha=delta_alpha,
            delta_phi=delta_phi,
        ))
    pruned_labels = [_label(value, path, "pruned") for value in pruned]
    retained = [part.label for part in parts]
    if len(set(retained + pruned_labels)) != len(retained) + len(pruned_labels):
        raise FormatError("a label is listed more than once across parts and pruned", path)

    metrics: Optional[MetricBlock] = None
    if data.get("metrics") is not None:
        try:
            metrics = MetricBlock.from_dict(data["metrics"])
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"invalid metrics block ({exc})", path) from None
    loss: Optional[LossSummary] = None
    if data.get("loss") is not None:
        try:
            loss = LossSummary.from_dict(data["loss"])
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"invalid loss block ({exc})", path) from None
    metadata = data.get("metadata", {})
    if not isinstance(metadata, dict):
        raise FormatError("'metadata' must be an object", path)

    return AnalysisReport(
        parts=parts,
        pruned=pruned_labels,
        loss=loss,
        metrics=metrics,
        metadata={str(k): str(v) for k, v in metadata.items()},
    )
