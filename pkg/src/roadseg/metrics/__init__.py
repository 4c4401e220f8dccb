# Confusion counts, scores and report tables
from roadseg.metrics.scores import (
    ClassCounts,
    average_f1,
    class_scores,
    confusion_counts,
    evaluate_rasters,
    jaccard_from_f1,
    majority_downsample,
    pool_counts,
    resample_predictions_nearest,
    scores,
)
from roadseg.metrics.table import ReportRow, format_report, format_table

__all__ = [
    "ClassCounts",
    "ReportRow",
    "average_f1",
    "class_scores",
    "confusion_counts",
    "evaluate_rasters",
    "format_report",
    "format_table",
    "jaccard_from_f1",
    "majority_downsample",
    "pool_counts",
    "resample_predictions_nearest",
    "scores",
]
