from src.evaluation.metrics import (
    angle_error,
    evaluate,
    index_iou,
    nearest_neighbour_iou,
    part_iou,
    position_error,
    type_accuracy,
)
from src.evaluation.summary import format_csv, format_table, load_scored_reports, summarize

__all__ = [
    "angle_error",
    "evaluate",
    "format_csv",
    "format_table",
    "index_iou",
    "load_scored_reports",
    "nearest_neighbour_iou",
    "part_iou",
    "position_error",
    "summarize",
    "type_accuracy",
]
