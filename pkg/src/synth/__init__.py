from src.synth.generator import (
    TRUTH_NAME,
    LabeledScene,
    PartSpec,
    SceneSpec,
    StaticSpec,
    generate,
    schedule_fractions,
    write_labeled_scene,
)
from src.synth.suite import builtin_suite

__all__ = [
    "TRUTH_NAME",
    "LabeledScene",
    "PartSpec",
    "SceneSpec",
    "StaticSpec",
    "builtin_suite",
    "generate",
    "schedule_fractions",
    "write_labeled_scene",
]
