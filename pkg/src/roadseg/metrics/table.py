"""
Markdown tables of metric reports.
"""
from dataclasses import dataclass
from typing import List, Sequence

from roadseg.core.types import MetricsReport

SCORE_COLUMNS = ("jaccard", "precision", "recall", "f1")
SCORE_TITLES = {
    "jaccard": "Jaccard",
    "precision": "Precision",
    "recall": "Recall",
    "f1": "F1",
}
CLASS_TITLES = (("small", "small"), ("medium", "mid"), ("big", "big"))


@dataclass
class ReportRow:
    """One evaluated model in a comparison table."""
    model: str
    fine_labels: bool
    time_handling: str
    report: MetricsReport

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "fine_labels": self.fine_labels,
            "time_handling": self.time_handling,
            "average_f1": self.report.average_f1,
            "report": self.report.model_dump(),
        }


def _score_cells(report: MetricsReport) -> List[str]:
    per_class = report.per_class()
    return [
        f"{getattr(per_class[cls], column):.3f}"
        for column in SCORE_COLUMNS
        for cls, _ in CLASS_TITLES
    ]


def format_table(rows: Sequence[ReportRow]) -> str:
    """
    Render rows with one Jaccard, Precision, Recall and F1 column per
    road class (small, mid, big).
    """
    header = ["Model", "5x5 m labels", "Time"] + [
        f"{SCORE_TITLES[column]} {title}"
        for column in SCORE_COLUMNS
        for _, title in CLASS_TITLES
    ]
    lines = [
        "| " + " | ".join(header) + " |",
        "|" + "|".join(["---"] * len(header)) + "|",
    ]
    for row in rows:
        cells = [
            row.model,
            "yes" if row.fine_labels else "no",
            row.time_handling,
            *_score_cells(row.report),
        ]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines)


def format_report(report: MetricsReport, model: str = "model") -> str:
    """Single-row table followed by the average road F1."""
    table = format_table([ReportRow(model, True, "-", report)])
    return f"{table}\n\nAverage road F1: {report.average_f1:.3f}"
