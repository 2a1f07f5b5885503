from src.analysis.baseline import estimate_without_optimization
from src.analysis.initialization import MotionInit, init_motion_axis, initialize_parts, select_max_motion_pair
from src.analysis.losses import (
    PartParams,
    StatePair,
    alignment_loss,
    cumulative_motion,
    gradients,
    motion_loss,
)
from src.analysis.optimizer import OptimizationResult, SceneOptimizer, TypeVerdict, optimize_scene
from src.analysis.pipeline import analyze_sequence, build_report

__all__ = [
    "MotionInit",
    "OptimizationResult",
    "PartParams",
    "SceneOptimizer",
    "StatePair",
    "TypeVerdict",
    "alignment_loss",
    "analyze_sequence",
    "build_report",
    "cumulative_motion",
    "estimate_without_optimization",
    "gradients",
    "init_motion_axis",
    "initialize_parts",
    "motion_loss",
    "optimize_scene",
    "select_max_motion_pair",
]
