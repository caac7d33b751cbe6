"""Per-class and macro segmentation ratios from pooled confusion counts."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..validation import NUM_CLASSES, ZONE_NAMES, check_same_shape, check_zonemap


@dataclass(frozen=True)
class ClassScores:
    precision: float
    recall: float
    f1: float
    iou: float


def confusion_counts(pred, gt, num_classes=NUM_CLASSES):
    """Per-class (TP, FP, FN) counts, shape (num_classes, 3)."""
    pred = check_zonemap(pred, "pred")
    gt = check_zonemap(gt, "gt")
    check_same_shape(pred, gt, "pred", "gt")
    counts = np.zeros((num_classes, 3), dtype=np.int64)
    hist = np.bincount(
        (gt.astype(np.int64) * num_classes + pred.astype(np.int64)).ravel(),
        minlength=num_classes * num_classes,
    ).reshape(num_classes, num_classes)
    for c in range(num_classes):
        tp = hist[c, c]
        counts[c] = (tp, hist[:, c].sum() - tp, hist[c].sum() - tp)
    return counts


def _ratio(num, den, absent):
    if den == 0:
        # A class missing from both rasters counts as vacuous agreement.
        return 1.0 if absent else 0.0
    return float(num) / float(den)


def scores_from_counts(counts):
    """Turn pooled (TP, FP, FN) rows into per-class and macro scores."""
    per_class = {}
    for c, (tp, fp, fn) in enumerate(np.asarray(counts, dtype=np.int64)):
        absent = tp == 0 and fp == 0 and fn == 0
        precision = _ratio(tp, tp + fp, absent)
        recall = _ratio(tp, tp + fn, absent)
        f1 = _ratio(2 * tp, 2 * tp + fp + fn, absent)
        iou = _ratio(tp, tp + fp + fn, absent)
        per_class[ZONE_NAMES.get(c, str(c))] = ClassScores(precision, recall, f1, iou)
    macro = ClassScores(
        precision=float(np.mean([s.precision for s in per_class.values()])),
        recall=float(np.mean([s.recall for s in per_class.values()])),
        f1=float(np.mean([s.f1 for s in per_class.values()])),
        iou=float(np.mean([s.iou for s in per_class.values()])),
    )
    return per_class, macro


def segmentation_scores(pred, gt, num_classes=NUM_CLASSES):
    """Per-class + macro precision/recall/F1/IoU for one raster pair."""
    return scores_from_counts(confusion_counts(pred, gt, num_classes))


def macro_iou(pred, gt, num_classes=NUM_CLASSES):
    _, macro = segmentation_scores(pred, gt, num_classes)
    return macro.iou
