"""
Per-class confusion counts and the scores derived from them.

Each road class is scored one-vs-rest; no_road only ever appears as
the "rest" and is excluded from averages.
"""
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping

import numpy as np

from roadseg.core.errors import InvalidArgumentError
from roadseg.core.types import (
    CLASS_LABELS,
    NUM_CLASSES,
    ROAD_CLASSES,
    ClassScores,
    MetricsReport,
    RoadClass,
)


@dataclass(frozen=True)
class ClassCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    def __add__(self, other: "ClassCounts") -> "ClassCounts":
        return ClassCounts(
            self.tp + other.tp, self.fp + other.fp, self.fn + other.fn
        )


Counts = Dict[RoadClass, ClassCounts]


def _check_rasters(pred: np.ndarray, truth: np.ndarray) -> None:
    if pred.shape != truth.shape:
        raise InvalidArgumentError(
            f"Prediction shape {pred.shape} does not match truth "
            f"{truth.shape}"
        )
    for name, raster in (("prediction", pred), ("truth", truth)):
        if raster.size and (raster.min() < 0 or raster.max() >= NUM_CLASSES):
            raise InvalidArgumentError(f"{name} values must be in 0..3")


def confusion_counts(pred: np.ndarray, truth: np.ndarray) -> Counts:
    """
    One-vs-rest (tp, fp, fn) for each road class.

    Raises:
        InvalidArgumentError: On shape mismatch or out-of-range values.
    """
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    _check_rasters(pred, truth)
    joint = np.bincount(
        (truth.astype(np.int64) * NUM_CLASSES + pred.astype(np.int64)).ravel(),
        minlength=NUM_CLASSES * NUM_CLASSES,
    ).reshape(NUM_CLASSES, NUM_CLASSES)
    counts = {}
    for k in ROAD_CLASSES:
        tp = int(joint[k, k])
        counts[k] = ClassCounts(
            tp=tp,
            fp=int(joint[:, k].sum()) - tp,
            fn=int(joint[k, :].sum()) - tp,
        )
    return counts


def pool_counts(batches: Iterable[Counts]) -> Counts:
    """Sum counts over many rasters (pooled-pixel aggregation)."""
    total = {k: ClassCounts() for k in ROAD_CLASSES}
    for counts in batches:
        for k in ROAD_CLASSES:
            total[k] = total[k] + counts[k]
    return total


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


def class_scores(counts: ClassCounts) -> ClassScores:
    """Precision, recall, F1 and Jaccard (IoU); any 0/0 is 0."""
    tp, fp, fn = counts.tp, counts.fp, counts.fn
    precision = _ratio(tp, tp + fp)
    recall = _ratio(tp, tp + fn)
    f1 = _ratio(2 * precision * recall, precision + recall)
    return ClassScores(
        tp=tp,
        fp=fp,
        fn=fn,
        precision=precision,
        recall=recall,
        f1=f1,
        jaccard=_ratio(tp, tp + fp + fn),
    )


def scores(counts: Mapping[RoadClass, ClassCounts]) -> MetricsReport:
    """Build the per-class report from confusion counts."""
    return MetricsReport(
        **{CLASS_LABELS[k]: class_scores(counts[k]) for k in ROAD_CLASSES}
    )


def evaluate_rasters(
    preds: Iterable[np.ndarray], truths: Iterable[np.ndarray]
) -> MetricsReport:
    """Pooled-pixel report over pairs of class rasters."""
    return scores(
        pool_counts(confusion_counts(p, t) for p, t in zip(preds, truths))
    )


def average_f1(report: MetricsReport) -> float:
    return report.average_f1


def jaccard_from_f1(f1: float) -> float:
    """IoU implied by an F1 score: J = F1 / (2 - F1)."""
    return f1 / (2.0 - f1)


def resample_predictions_nearest(
    pred: np.ndarray, factor: float = 2
) -> np.ndarray:
    """
    Nearest-neighbour upsampling: every pixel becomes a factor x factor
    block.

    Raises:
        InvalidArgumentError: If factor is not a positive integer.
    """
    if float(factor) != int(factor) or int(factor) < 1:
        raise InvalidArgumentError(
            f"Upsampling factor must be a positive integer, got {factor}"
        )
    factor = int(factor)
    pred = np.asarray(pred)
    return np.repeat(np.repeat(pred, factor, axis=0), factor, axis=1)


def majority_downsample(raster: np.ndarray, factor: int = 2) -> np.ndarray:
    """
    Mode of each factor x factor block; ties go to the higher class.

    Raises:
        InvalidArgumentError: If the raster does not tile into blocks.
    """
    raster = np.asarray(raster)
    height, width = raster.shape
    if factor < 1 or height % factor or width % factor:
        raise InvalidArgumentError(
            f"Raster {height}x{width} does not tile into {factor}x{factor}"
        )
    blocks = raster.reshape(
        height // factor, factor, width // factor, factor
    ).transpose(0, 2, 1, 3).reshape(height // factor, width // factor, -1)
    votes = np.stack(
        [(blocks == k).sum(axis=-1) for k in range(NUM_CLASSES)], axis=-1
    )
    # argmax returns the first maximum; scan classes from high to low
    winner = NUM_CLASSES - 1 - np.argmax(votes[..., ::-1], axis=-1)
    return winner.astype(raster.dtype)
