"""ASCII PLY vertex files with x, y, z, optional nx, ny, nz and an integer ``part`` label.

Reading goes through plyfile. Writing stays on shortest round-trip decimals,
which plyfile's fixed ``%.18g`` text output does not give.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np
from plyfile import PlyData, PlyElement, PlyElementParseError, PlyHeaderParseError, PlyParseError

from src.errors import FormatError, IoError

POSITION_PROPS = ("x", "y", "z")
NORMAL_PROPS = ("nx", "ny", "nz")
LABEL_PROP = "part"


@dataclass
class PlyVertices:
    points: np.ndarray
    labels: np.ndarray
    normals: Optional[np.ndarray] = None
    comments: List[str] = field(default_factory=list)


def format_number(value: float) -> str:
    """Shortest decimal text that parses back to the same double."""
    return repr(float(value))


def write_ply(path: Path, vertices: PlyVertices) -> None:
    points = np.asarray(vertices.points, dtype=float).reshape(-1, 3)
    labels = np.asarray(vertices.labels, dtype=int).reshape(-1)
    normals = None if vertices.normals is None else np.asarray(vertices.normals, dtype=float).reshape(-1, 3)
    if labels.shape[0] != points.shape[0] or (normals is not None and normals.shape != points.shape):
        raise ValueError("points, labels and normals must have the same length")

    lines = ["ply", "format ascii 1.0"]
    lines.extend(f"comment {comment}" for comment in vertices.comments)
    lines.append(f"element vertex {points.shape[0]}")
    properties = list(POSITION_PROPS) + (list(NORMAL_PROPS) if normals is not None else [])
    lines.extend(f"property double {name}" for name in properties)
    lines.append(f"property int {LABEL_PROP}")
    lines.append("end_header")

    for i in range(points.shape[0]):
        row = [format_number(v) for v in points[i]]
        if normals is not None:
            row.extend(format_number(v) for v in normals[i])
        row.append(str(int(labels[i])))
        lines.append(" ".join(row))

    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoError(f"cannot write PLY file: {exc.strerror or exc}", path) from exc


def _header_length(path: Path) -> int:
    """Number of header lines, ``end_header`` included."""
    try:
        with open(path, "r", encoding="ascii") as f:
            for number, line in enumerate(f, start=1):
                if line.strip() == "end_header":
                    return number
    except UnicodeDecodeError:
        raise FormatError("not an ASCII PLY file", path) from None
    except OSError as exc:
        raise IoError(f"cannot read PLY file: {exc.strerror or exc}", path) from exc
    raise FormatError("header is not terminated by 'end_header'", path)


def _trailing_line(path: Path, first_body_line: int) -> Optional[int]:
    with open(path, "r", encoding="ascii") as f:
        for number, line in enumerate(f, start=1):
            if number >= first_body_line and line.strip():
                return number
    return None


def _vertex_element(ply: PlyData, path: Path) -> PlyElement:
    if not ply.text:
        raise FormatError("only 'format ascii 1.0' is supported", path, 2)
    names = [element.name for element in ply.elements]
    if names != ["vertex"]:
        raise FormatError(f"expected a single 'vertex' element, found {names}", path)
    vertex = ply["vertex"]
    dtype = vertex.data.dtype
    for name in POSITION_PROPS + (LABEL_PROP,):
        if name not in dtype.names:
            raise FormatError(f"missing vertex property {name!r}", path)
    for name in dtype.names:
        kind = dtype[name].kind
        expected = "iu" if name == LABEL_PROP else "f"
        if kind not in expected:
            raise FormatError(f"property {name!r} has unsupported type {dtype[name]}", path)
    present = [name in dtype.names for name in NORMAL_PROPS]
    if any(present) and not all(present):
        raise FormatError("normals need all of nx, ny, nz", path)
    return vertex


def read_ply(path: Path) -> PlyVertices:
    path = Path(path)
    header_lines = _header_length(path)
    try:
        ply = PlyData.read(str(path))
    except PlyElementParseError as exc:
        row = getattr(exc, "row", None)
        line = header_lines + row + 1 if row is not None else None
        raise FormatError(getattr(exc, "message", str(exc)), path, line) from None
    except PlyHeaderParseError as exc:
        raise FormatError(getattr(exc, "message", str(exc)), path, getattr(exc, "line", None)) from None
    except (PlyParseError, ValueError, EOFError) as exc:
        raise FormatError(f"unreadable PLY file ({exc})", path) from None
    except OSError as exc:
        raise IoError(f"cannot read PLY file: {exc.strerror or exc}", path) from exc

    vertex = _vertex_element(ply, path)
    count = vertex.count
    extra = _trailing_line(path, header_lines + count + 1)
    if extra is not None:
        raise FormatError("unexpected data after the declared vertices", path, extra)

    points = np.column_stack([vertex[name] for name in POSITION_PROPS]).astype(float)
    labels = np.asarray(vertex[LABEL_PROP], dtype=int)
    normals = None
    if NORMAL_PROPS[0] in vertex.data.dtype.names:
        normals = np.column_stack([vertex[name] for name in NORMAL_PROPS]).astype(float)

    bad_rows = np.flatnonzero(~np.isfinite(points).all(axis=1))
    if bad_rows.size:
        raise FormatError("non-finite coordinate", path, header_lines + int(bad_rows[0]) + 1)
    if normals is not None:
        bad_rows = np.flatnonzero(~np.isfinite(normals).all(axis=1))
        if bad_rows.size:
            raise FormatError("non-finite normal", path, header_lines + int(bad_rows[0]) + 1)
    bad_rows = np.flatnonzero(labels < 0)
    if bad_rows.size:
        row = int(bad_rows[0])
        raise FormatError(f"negative part label {labels[row]}", path, header_lines + row + 1)

    return PlyVertices(points=points, labels=labels, normals=normals, comments=list(ply.comments))
