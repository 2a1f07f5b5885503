from src.ingest.annotations import load_ground_truth, load_report, save_ground_truth, save_report
from src.ingest.records import (
    AnalysisReport,
    FrameData,
    GroundTruth,
    LossSummary,
    MetricBlock,
    MotionType,
    PartResult,
    PartTruth,
    SceneSequence,
)
from src.ingest.scene_store import load_sequence, save_sequence

__all__ = [
    "AnalysisReport",
    "FrameData",
    "GroundTruth",
    "LossSummary",
    "MetricBlock",
    "MotionType",
    "PartResult",
    "PartTruth",
    "SceneSequence",
    "load_ground_truth",
    "load_report",
    "load_sequence",
    "save_ground_truth",
    "save_report",
    "save_sequence",
]
