import json
import re
from pathlib import Path
from typing import Dict, Union

import numpy as np

from src.errors import ConsistencyError, FormatError, IoError
from src.geometry.point_cloud import PointCloud
from src.ingest.ply_io import PlyVertices, read_ply, write_ply
from src.ingest.records import FrameData, SceneSequence
from src.logging_utils.logger import get_logger

MANIFEST_NAME = "manifest.json"
FRAME_PATTERN = re.compile(r"^frame_(\d+)\.ply$")

log = get_logger("ingest")


def frame_file_name(index: int) -> str:
    return f"frame_{index:04d}.ply"


def ensure_directory(path: Path) -> None:
    try:
        path.mkdir(exist_ok=True)
    except FileNotFoundError:
        raise IoError("parent directory does not exist", path) from None
    except OSError as exc:
        raise IoError(f"cannot create directory: {exc.strerror or exc}", path) from exc


def write_json(path: Path, payload: Dict) -> None:
    """Deterministic JSON text; floats use Python's shortest round-trip repr."""
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(payload, f, indent=2, allow_nan=False)
            f.write("\n")
    except OSError as exc:
        raise IoError(f"cannot write file: {exc.strerror or exc}", path) from exc


def read_json(path: Path) -> Dict:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f, parse_constant=_reject_constant)
    except FileNotFoundError:
        raise IoError("file not found", path) from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", path, exc.lineno) from None
    except ValueError as exc:
        raise FormatError(str(exc), path) from None
    except OSError as exc:
        raise IoError(f"cannot read file: {exc.strerror or exc}", path) from exc
    if not isinstance(data, dict):
        raise FormatError("top-level JSON value must be an object", path, 1)
    return data


def _reject_constant(name: str):
    raise ValueError(f"non-finite number {name} is not allowed")


def _read_manifest(path: Path) -> Dict:
    manifest = read_json(path)
    for key, kind in (("frames", int), ("parts", int), ("correspondence", bool)):
        value = manifest.get(key)
        if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
            raise FormatError(f"manifest field {key!r} must be {kind.__name__}", path)
    if manifest["frames"] < 2:
        raise ConsistencyError(f"{path}: a sequence needs at least 2 frames, manifest declares {manifest['frames']}")
    if manifest["parts"] < 1:
        raise ConsistencyError(f"{path}: manifest declares no motion parts")
    units = manifest.get("units", "m")
    metadata = manifest.get("metadata", {})
    if not isinstance(units, str) or not isinstance(metadata, dict):
        raise FormatError("manifest 'units' must be a string and 'metadata' an object", path)
    manifest["units"] = units
    manifest["metadata"] = {str(k): str(v) for k, v in metadata.items()}
    return manifest


def _frame_from_vertices(index: int, ply: PlyVertices, num_parts: int, correspondent: bool, path: Path) -> FrameData:
    clouds = {}
    for label in np.unique(ply.labels):
        label = int(label)
        if label > num_parts:
            raise ConsistencyError(f"frame {index} ({path.name}) uses label {label}, manifest declares {num_parts} parts")
        mask = ply.labels == label
        normals = None if ply.normals is None else ply.normals[mask]
        cloud = PointCloud(ply.points[mask], normals)
        if not cloud.normals_are_unit():
            raise FormatError(f"part {label} has normals that are not unit length", path)
        clouds[label] = cloud
    return FrameData(index=index, clouds=clouds, correspondent=correspondent)


def load_sequence(path: Union[str, Path]) -> SceneSequence:
    root = Path(path)
    if not root.is_dir():
        raise IoError("scene directory not found", root)
    manifest = _read_manifest(root / MANIFEST_NAME)
    num_frames, num_parts = manifest["frames"], manifest["parts"]

    found = sorted(int(m.group(1)) for m in (FRAME_PATTERN.match(p.name) for p in root.iterdir()) if m)
    expected = list(range(num_frames))
    if found != expected:
        missing = sorted(set(expected) - set(found))
        extra = sorted(set(found) - set(expected))
        raise ConsistencyError(f"{root}: frame files do not match manifest (missing {missing}, unexpected {extra})")

    frames = []
    for index in expected:
        frame_path = root / frame_file_name(index)
        ply = read_ply(frame_path)
        frames.append(_frame_from_vertices(index, ply, num_parts, manifest["correspondence"], frame_path))

    sequence = SceneSequence(frames=frames, units=manifest["units"], metadata=manifest["metadata"])
    if sequence.num_parts != num_parts:
        raise ConsistencyError(f"{root}: manifest declares {num_parts} parts, frames carry {sequence.num_parts}")
    log.debug("Loaded scene %s: %d frames, %d parts", root, sequence.num_frames, sequence.num_parts)
    return sequence


def save_sequence(sequence: SceneSequence, path: Union[str, Path]) -> None:
    root = Path(path)
    for frame in sequence.frames:
        flags = {cloud.has_normals for cloud in frame.clouds.values()}
        if len(flags) > 1:
            raise ConsistencyError(
                f"frame {frame.index}: normals are present on some parts only; a PLY frame stores them for all or none"
            )
    ensure_directory(root)
    manifest = {
        "frames": sequence.num_frames,
        "parts": sequence.num_parts,
        "units": sequence.units,
        "correspondence": sequence.correspondent,
        "metadata": dict(sorted(sequence.metadata.items())),
    }
    write_json(root / MANIFEST_NAME, manifest)

    for frame in sequence.frames:
        labels = frame.labels
        clouds = [frame.clouds[label] for label in labels]
        with_normals = all(cloud.has_normals for cloud in clouds)
        write_ply(root / frame_file_name(frame.index), PlyVertices(
            points=np.vstack([cloud.points for cloud in clouds]),
            labels=np.concatenate([np.full(len(cloud), label) for label, cloud in zip(labels, clouds)]),
            normals=np.vstack([cloud.normals for cloud in clouds]) if with_normals else None,
            comments=[f"units {sequence.units}", f"frame {frame.index}"],
        ))
    log.debug("Saved scene %s: %d frames", root, sequence.num_frames)
