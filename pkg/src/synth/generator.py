import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Union

import numpy as np

from src.errors import IoError, SpecError
from src.geometry.point_cloud import PointCloud, centroid, enclosing_radius
from src.geometry.transforms import ScrewAxis, ScrewMotion, axis_angle_matrix, screw_to_transform, transform_cloud
from src.ingest.annotations import save_ground_truth
from src.ingest.records import FrameData, GroundTruth, MotionType, PartTruth, SceneSequence
from src.ingest.scene_store import save_sequence
from src.synth.shapes import SHAPES, sample_shape

PART_TYPES = ("T", "R", "RT", "STATIC_OUTLIER")
SCHEDULES = ("linear", "ease", "oscillate")
EXACTNESS_TOL = 1e-12


@dataclass
class PartSpec:
    """One rigid part: a sampled primitive posed at ``center`` and moved along a screw schedule.

    ``total_angle`` (radians) and ``total_distance`` are the peak motion reached
    by the schedule; T parts ignore the angle, R parts ignore the distance.
    """

    name: str
    shape: str
    size: List[float]
    center: List[float]
    motion_type: str
    axis_direction: List[float] = field(default_factory=lambda: [0.0, 0.0, 1.0])
    axis_position: List[float] = field(default_factory=lambda: [0.0, 0.0, 0.0])
    total_angle: float = 0.0
    total_distance: float = 0.0
    schedule: str = "linear"
    yaw: float = 0.0
    points: int = 300

    @classmethod
    def from_dict(cls, data: Dict) -> "PartSpec":
        try:
            return cls(**data)
        except TypeError as exc:
            raise SpecError(f"invalid part spec: {exc}") from None


@dataclass
class StaticSpec:
    shape: str
    size: List[float]
    center: List[float]
    points: int = 300
    yaw: float = 0.0

    @classmethod
    def from_dict(cls, data: Dict) -> "StaticSpec":
        try:
            return cls(**data)
        except TypeError as exc:
            raise SpecError(f"invalid background spec: {exc}") from None


@dataclass
class SceneSpec:
    name: str
    parts: List[PartSpec]
    background: List[StaticSpec] = field(default_factory=list)
    category: str = ""
    frames: int = 20
    noise: float = 0.0                 # fraction of each part's enclosing radius
    seed: int = 0

    def with_overrides(self, **changes) -> "SceneSpec":
        data = self.to_dict()
        data.update(changes)
        return SceneSpec.from_dict(data)

    def to_dict(self) -> Dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict) -> "SceneSpec":
        if not isinstance(data, dict):
            raise SpecError("scene spec must be a JSON object")
        data = dict(data)
        try:
            parts = [PartSpec.from_dict(p) for p in data.pop("parts")]
            background = [StaticSpec.from_dict(b) for b in data.pop("background", [])]
            return cls(parts=parts, background=background, **data)
        except KeyError:
            raise SpecError("scene spec has no 'parts'") from None
        except TypeError as exc:
            raise SpecError(f"invalid scene spec: {exc}") from None

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "SceneSpec":
        path = Path(path)
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except FileNotFoundError:
            raise IoError("spec file not found", path) from None
        except json.JSONDecodeError as exc:
            raise SpecError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from None
        return cls.from_dict(data)

    def validate(self) -> "SceneSpec":
        if not self.name:
            raise SpecError("scene spec needs a name")
        if self.frames < 2:
            raise SpecError(f"{self.name}: at least 2 frames required, got {self.frames}")
        if not math.isfinite(self.noise) or self.noise < 0:
            raise SpecError(f"{self.name}: noise must be >= 0, got {self.noise}")
        if not any(p.motion_type != "STATIC_OUTLIER" for p in self.parts):
            raise SpecError(f"{self.name}: at least one moving part required")
        for shape_spec in list(self.parts) + list(self.background):
            where = f"{self.name}/{getattr(shape_spec, 'name', 'background')}"
            if shape_spec.shape not in SHAPES:
                raise SpecError(f"{where}: unknown shape {shape_spec.shape!r}")
            if shape_spec.points < 1:
                raise SpecError(f"{where}: point count must be positive, got {shape_spec.points}")
            if len(shape_spec.size) != 3 or min(shape_spec.size) <= 0:
                raise SpecError(f"{where}: size needs 3 positive extents")
            if len(shape_spec.center) != 3:
                raise SpecError(f"{where}: center needs 3 coordinates")
        for part in self.parts:
            where = f"{self.name}/{part.name}"
            if part.motion_type not in PART_TYPES:
                raise SpecError(f"{where}: unknown motion type {part.motion_type!r}")
            if part.schedule not in SCHEDULES:
                raise SpecError(f"{where}: unknown schedule {part.schedule!r}")
            if len(part.axis_direction) != 3 or np.linalg.norm(part.axis_direction) < 1e-12:
                raise SpecError(f"{where}: axis direction must be a non-zero 3-vector")
        return self


@dataclass
class LabeledScene:
    sequence: SceneSequence
    truth: GroundTruth
    spec: SceneSpec


def schedule_fractions(schedule: str, frames: int) -> np.ndarray:
    """Fraction of the peak motion reached at each frame; frame 0 is always 0."""
    t = np.linspace(0.0, 1.0, frames)
    if schedule == "linear":
        return t
    if schedule == "ease":
        return 0.5 * (1.0 - np.cos(np.pi * t))
    if schedule == "oscillate":
        out = np.sin(np.pi * t)
        out[-1] = 0.0
        return out
    raise SpecError(f"unknown schedule {schedule!r}")


def _posed_sample(rng: np.random.Generator, spec) -> PointCloud:
    points, normals = sample_shape(rng, spec.shape, spec.size, spec.points)
    rotation = axis_angle_matrix(np.array([0.0, 0.0, 1.0]), spec.yaw)
    return PointCloud(points @ rotation.T + np.asarray(spec.center, dtype=float), normals @ rotation.T)


def part_motions(part: PartSpec, frames: int) -> List[ScrewMotion]:
    fractions = schedule_fractions(part.schedule, frames)
    direction = np.asarray(part.axis_direction, dtype=float)
    axis = ScrewAxis(direction / np.linalg.norm(direction), part.axis_position)
    angle = part.total_angle if part.motion_type in ("R", "RT") else 0.0
    distance = part.total_distance if part.motion_type in ("T", "RT") else 0.0
    return [ScrewMotion(axis, angle * f, distance * f) for f in fractions]


def _straight_line_screw(points: np.ndarray, direction: np.ndarray, position: np.ndarray,
                         angle: float, distance: float) -> np.ndarray:
    """Independent screw application: Rodrigues on each row, then the axial shift."""
    v = points - position
    rotated = (v * math.cos(angle) + np.cross(direction, v) * math.sin(angle)
               + np.outer(v @ direction, direction) * (1.0 - math.cos(angle)))
    return rotated + position + distance * direction


def _add_noise(rng: np.random.Generator, cloud: PointCloud, sigma: float) -> PointCloud:
    if sigma <= 0.0:
        return cloud
    return PointCloud(cloud.points + rng.normal(0.0, sigma, size=cloud.points.shape), cloud.normals)


def generate(spec: SceneSpec) -> LabeledScene:
    """Deterministic labeled scene for ``spec``; noiseless frames are exact screw images of frame 0."""
    spec.validate()
    rng = np.random.default_rng(spec.seed)

    background_clouds = [_posed_sample(rng, static) for static in spec.background]
    if background_clouds:
        background = PointCloud(
            np.vstack([c.points for c in background_clouds]),
            np.vstack([c.normals for c in background_clouds]),
        )
    else:
        background = PointCloud(np.array([[0.0, 0.0, 0.0]]), np.array([[0.0, 0.0, 1.0]]))
    bases = {label: _posed_sample(rng, part) for label, part in enumerate(spec.parts, start=1)}
    motions = {label: part_motions(part, spec.frames) for label, part in enumerate(spec.parts, start=1)}

    truth_parts = {}
    for label, part in enumerate(spec.parts, start=1):
        if part.motion_type == "STATIC_OUTLIER":
            truth_parts[label] = PartTruth(label=label, motion_type=MotionType.STATIC)
            continue
        fractions = schedule_fractions(part.schedule, spec.frames)
        cum_angle = fractions * (part.total_angle if part.motion_type in ("R", "RT") else 0.0)
        cum_distance = fractions * (part.total_distance if part.motion_type in ("T", "RT") else 0.0)
        axis = motions[label][0].axis
        if part.motion_type == "T":
            axis = ScrewAxis(axis.direction, centroid(bases[label]))
        truth_parts[label] = PartTruth(
            label=label,
            motion_type=MotionType(part.motion_type),
            axis=axis,
            delta_alpha=np.diff(cum_distance),
            delta_phi=np.diff(cum_angle),
        )

    background_sigma = spec.noise * enclosing_radius(background)
    sigmas = {label: spec.noise * enclosing_radius(base) for label, base in bases.items()}
    frames = []
    for i in range(spec.frames):
        clouds = {0: _add_noise(rng, background, background_sigma)}
        for label, base in bases.items():
            clean = transform_cloud(screw_to_transform(motions[label][i]), base)
            if spec.noise == 0.0:
                _check_exact(spec, label, i, base, motions[label][i], clean)
            clouds[label] = _add_noise(rng, clean, sigmas[label])
        frames.append(FrameData(index=i, clouds=clouds, correspondent=True))

    sequence = SceneSequence(
        frames=frames,
        units="m",
        metadata={
            "name": spec.name,
            "category": spec.category or spec.name,
            "noise": repr(float(spec.noise)),
            "seed": str(spec.seed),
        },
    )
    return LabeledScene(sequence=sequence, truth=GroundTruth(parts=truth_parts), spec=spec)


def _check_exact(spec: SceneSpec, label: int, frame: int, base: PointCloud, motion: ScrewMotion,
                 clean: PointCloud) -> None:
    expected = _straight_line_screw(base.points, motion.axis.direction, motion.axis.position,
                                    motion.angle, motion.distance)
    scale = 1.0 + float(np.max(np.abs(base.points))) + float(np.max(np.abs(motion.axis.position)))
    error = float(np.max(np.abs(expected - clean.points)))
    if error > EXACTNESS_TOL * scale:
        raise SpecError(f"{spec.name}: part {label} frame {frame} deviates from its screw motion by {error:.3g}")


TRUTH_NAME = "truth.json"


def write_labeled_scene(scene: LabeledScene, path: Union[str, Path]) -> Path:
    """Scene directory plus ``truth.json`` inside it; returns the truth path."""
    root = Path(path)
    save_sequence(scene.sequence, root)
    truth_path = root / TRUTH_NAME
    save_ground_truth(scene.truth, truth_path)
    return truth_path
