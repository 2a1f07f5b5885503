from pathlib import Path
from typing import Optional, Union

from src.analysis.initialization import initialize_parts
from src.analysis.optimizer import OptimizationResult, moving_average, optimize_scene
from src.config.optim_config import OptimConfig
from src.ingest.records import AnalysisReport, LossSummary, PartResult, SceneSequence
from src.logging_utils.logger import get_logger

log = get_logger("pipeline")


def build_report(sequence: SceneSequence, result: OptimizationResult) -> AnalysisReport:
    parts = []
    for label in result.verdict.retained:
        params = result.params[label]
        parts.append(PartResult(
            label=label,
            motion_type=result.verdict.types[label],
            axis=params.axis,
            delta_alpha=params.delta_alpha.copy(),
            delta_phi=params.delta_phi.copy(),
        ))
    trace = result.trace
    loss = None
    if len(trace):
        loss = LossSummary(
            initial=float(trace.totals[0]),
            final=float(moving_average(trace.totals, width=100)[-1]),
            iterations=len(trace),
        )
    return AnalysisReport(
        parts=parts,
        pruned=result.verdict.pruned,
        loss=loss,
        metadata=dict(sequence.metadata),
    )


def analyze_sequence(
    sequence: SceneSequence,
    cfg: Optional[OptimConfig] = None,
    trace_path: Optional[Union[str, Path]] = None,
) -> AnalysisReport:
    """Initialization, joint optimization with type judgment, then the report."""
    cfg = (cfg or OptimConfig()).validate()
    inits = initialize_parts(sequence, cfg)
    result = optimize_scene(sequence, inits, cfg, trace_path=trace_path)
    report = build_report(sequence, result)
    log.info(
        "Retained parts %s, pruned %s",
        [f"{p.label}:{p.motion_type.value}" for p in report.parts], report.pruned,
    )
    return report
