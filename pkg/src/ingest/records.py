from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

import numpy as np

from src.errors import ConsistencyError
from src.geometry.point_cloud import PointCloud
from src.geometry.transforms import ScrewAxis

STATIC_LABEL = 0


class MotionType(str, Enum):
    T = "T"
    R = "R"
    RT = "RT"
    STATIC = "STATIC"
    PRUNED = "PRUNED"

    @property
    def rotates(self) -> bool:
        return self in (MotionType.R, MotionType.RT)

    @property
    def translates(self) -> bool:
        return self in (MotionType.T, MotionType.RT)

    @property
    def moves(self) -> bool:
        return self in (MotionType.T, MotionType.R, MotionType.RT)


@dataclass(frozen=True)
class FrameData:
    """One state of the scene: a point cloud per part label (0 is the static region)."""

    index: int
    clouds: Dict[int, PointCloud]
    correspondent: bool = True

    @property
    def labels(self) -> List[int]:
        return sorted(self.clouds)


@dataclass(frozen=True)
class SceneSequence:
    frames: List[FrameData]
    units: str = "m"
    metadata: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self.validate()

    @property
    def num_frames(self) -> int:
        return len(self.frames)

    @property
    def labels(self) -> List[int]:
        return self.frames[0].labels if self.frames else []

    @property
    def part_labels(self) -> List[int]:
        return [label for label in self.labels if label != STATIC_LABEL]

    @property
    def num_parts(self) -> int:
        return len(self.part_labels)

    @property
    def correspondent(self) -> bool:
        return all(frame.correspondent for frame in self.frames)

    def part_frames(self, label: int) -> List[PointCloud]:
        return [frame.clouds[label] for frame in self.frames]

    def label_index_sets(self, frame: int = 0) -> Dict[int, np.ndarray]:
        """Global point indices of every label, in file order (static first)."""
        out = {}
        start = 0
        for label in self.frames[frame].labels:
            count = len(self.frames[frame].clouds[label])
            out[label] = np.arange(start, start + count)
            start += count
        return out

    def all_points(self, frame: int = 0) -> np.ndarray:
        clouds = self.frames[frame].clouds
        return np.vstack([clouds[label].points for label in self.frames[frame].labels])

    def validate(self) -> None:
        if len(self.frames) < 2:
            raise ConsistencyError(f"a sequence needs at least 2 frames, got {len(self.frames)}")
        vocabulary = self.frames[0].labels
        if not vocabulary or vocabulary[0] != STATIC_LABEL:
            raise ConsistencyError("frame 0 has no static region (label 0)")
        if vocabulary != list(range(len(vocabulary))):
            raise ConsistencyError(f"frame 0 labels are not contiguous from 0: {vocabulary}")
        if len(vocabulary) < 2:
            raise ConsistencyError("a sequence needs at least one motion part (label >= 1)")

        for position, frame in enumerate(self.frames):
            if frame.index != position:
                raise ConsistencyError(f"frame {frame.index} found at position {position}")
            if frame.labels != vocabulary:
                missing = sorted(set(vocabulary) - set(frame.labels))
                extra = sorted(set(frame.labels) - set(vocabulary))
                raise ConsistencyError(
                    f"frame {frame.index} label vocabulary differs from frame 0 "
                    f"(missing {missing}, unexpected {extra})"
                )
            for label, cloud in frame.clouds.items():
                if len(cloud) == 0:
                    raise ConsistencyError(f"frame {frame.index} part {label} has no points")
                if frame.correspondent and len(cloud) != len(self.frames[0].clouds[label]):
                    raise ConsistencyError(
                        f"frame {frame.index} part {label} has {len(cloud)} points, "
                        f"frame 0 has {len(self.frames[0].clouds[label])} (correspondence requires equal counts)"
                    )


@dataclass(frozen=True)
class PartTruth:
    label: int
    motion_type: MotionType
    axis: Optional[ScrewAxis] = None
    delta_alpha: Optional[np.ndarray] = None
    delta_phi: Optional[np.ndarray] = None


@dataclass(frozen=True)
class GroundTruth:
    parts: Dict[int, PartTruth]

    @property
    def labels(self) -> List[int]:
        return sorted(self.parts)

    @property
    def moving_labels(self) -> List[int]:
        return [label for label in self.labels if self.parts[label].motion_type.moves]


@dataclass
class MetricBlock:
    iou: float
    ta: float
    ae_deg: Optional[float] = None
    pe: Optional[float] = None

    def to_dict(self) -> Dict:
        return {"ae_deg": self.ae_deg, "pe": self.pe, "ta": self.ta, "iou": self.iou}

    @classmethod
    def from_dict(cls, data: Dict) -> "MetricBlock":
        return cls(
            iou=float(data["iou"]),
            ta=float(data["ta"]),
            ae_deg=None if data.get("ae_deg") is None else float(data["ae_deg"]),
            pe=None if data.get("pe") is None else float(data["pe"]),
        )


@dataclass
class PartResult:
    """Final motion attributes of one retained part."""

    label: int
    motion_type: MotionType
    axis: ScrewAxis
    delta_alpha: np.ndarray
    delta_phi: np.ndarray

    @property
    def total_alpha(self) -> float:
        return float(np.sum(np.abs(self.delta_alpha)))

    @property
    def total_phi(self) -> float:
        return float(np.sum(np.abs(self.delta_phi)))


@dataclass
class LossSummary:
    initial: float
    final: float
    iterations: int

    def to_dict(self) -> Dict:
        return {"initial": self.initial, "final": self.final, "iterations": self.iterations}

    @classmethod
    def from_dict(cls, data: Dict) -> "LossSummary":
        return cls(float(data["initial"]), float(data["final"]), int(data["iterations"]))


@dataclass
class AnalysisReport:
    parts: List[PartResult]
    pruned: List[int]
    loss: Optional[LossSummary] = None
    metrics: Optional[MetricBlock] = None
    metadata: Dict[str, str] = field(default_factory=dict)

    @property
    def retained_labels(self) -> List[int]:
        return [part.label for part in self.parts]

    @property
    def labels(self) -> List[int]:
        return sorted(self.retained_labels + list(self.pruned))

    def part(self, label: int) -> Optional[PartResult]:
        for part in self.parts:
            if part.label == label:
                return part
        return None
