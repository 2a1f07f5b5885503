import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from src.errors import FormatError
from src.ingest.annotations import load_report
from src.ingest.records import AnalysisReport

COLUMNS = ("AE", "PE", "TA", "IOU")


@dataclass
class SummaryRow:
    category: str
    scenes: int
    ae: Optional[float]
    pe: Optional[float]
    ta: Optional[float]
    iou: Optional[float]

    def values(self) -> List[Optional[float]]:
        return [self.ae, self.pe, self.ta, self.iou]


def _mean(values: Sequence[Optional[float]]) -> Optional[float]:
    present = [v for v in values if v is not None]
    return float(np.mean(present)) if present else None


def report_category(report: AnalysisReport, path: Path) -> str:
    return report.metadata.get("category") or report.metadata.get("name") or path.stem


def load_scored_reports(paths: Sequence[Path]) -> Dict[Path, AnalysisReport]:
    reports = {}
    for path in sorted(Path(p) for p in paths):
        report = load_report(path)
        if report.metrics is None:
            raise FormatError("report has no metrics block; run 'eval REPORT TRUTH' on it first", path)
        reports[path] = report
    return reports


def summarize(reports: Dict[Path, AnalysisReport]) -> List[SummaryRow]:
    """One row per category in name order, then an overall row averaging the category rows."""
    groups: Dict[str, List[AnalysisReport]] = {}
    for path, report in reports.items():
        groups.setdefault(report_category(report, path), []).append(report)

    rows = []
    for category in sorted(groups):
        metrics = [r.metrics for r in groups[category]]
        rows.append(SummaryRow(
            category=category,
            scenes=len(metrics),
            ae=_mean([m.ae_deg for m in metrics]),
            pe=_mean([m.pe for m in metrics]),
            ta=_mean([m.ta for m in metrics]),
            iou=_mean([m.iou for m in metrics]),
        ))
    rows.append(SummaryRow(
        category="mean",
        scenes=sum(row.scenes for row in rows),
        ae=_mean([row.ae for row in rows]),
        pe=_mean([row.pe for row in rows]),
        ta=_mean([row.ta for row in rows]),
        iou=_mean([row.iou for row in rows]),
    ))
    return rows


def _cell(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.3f}"


def format_table(rows: Sequence[SummaryRow]) -> str:
    width = max([len("category")] + [len(row.category) for row in rows])
    header = f"{'category':<{width}}  {'scenes':>6}" + "".join(f"  {name:>8}" for name in COLUMNS)
    lines = [header, "-" * len(header)]
    for row in rows:
        if row.category == "mean":
            lines.append("-" * len(header))
        lines.append(f"{row.category:<{width}}  {row.scenes:>6}" + "".join(f"  {_cell(v):>8}" for v in row.values()))
    return "\n".join(lines) + "\n"


def format_csv(rows: Sequence[SummaryRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["category", "scenes"] + list(COLUMNS))
    for row in rows:
        writer.writerow([row.category, row.scenes] + ["" if v is None else f"{v:.3f}" for v in row.values()])
    return buffer.getvalue()
