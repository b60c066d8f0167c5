"""
overlap.py

Overlap and boundary metrics between a predicted and a reference labeling.

Label arrays may have any shape (e.g. an image); they are compared
element-wise after flattening. A ratio whose denominator is zero is 1 when
both sets it compares are empty and 0 otherwise.
"""
from __future__ import absolute_import, annotations, division, print_function
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import cdist

from evidential.errors import ShapeMismatch, ValidationError


class Confusion(NamedTuple):
    tp: int
    fp: int
    fn: int
    tn: int


class Overlap(NamedTuple):
    dice: float
    sensitivity: float
    precision: float


def _labels(
        pred,
        truth,
        nclasses: Optional[int] = None,
) -> tuple[np.ndarray, np.ndarray]:
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.shape != truth.shape:
        raise ShapeMismatch(
            f'Label arrays differ in shape: {pred.shape} vs {truth.shape}'
        )
    pred = pred.reshape(-1)
    truth = truth.reshape(-1)
    if nclasses is not None:
        for arr in (pred, truth):
            if arr.size and (arr.min() < 0 or arr.max() >= nclasses):
                raise ValidationError(f'Labels must lie in [0, {nclasses})')
    return pred, truth


def confusion_counts(
        pred,
        truth,
        positive_class: int = 1,
        nclasses: Optional[int] = None,
) -> Confusion:
    pred, truth = _labels(pred, truth, nclasses)
    p = pred == positive_class
    t = truth == positive_class
    return Confusion(
        tp=int(np.sum(p & t)),
        fp=int(np.sum(p & ~t)),
        fn=int(np.sum(~p & t)),
        tn=int(np.sum(~p & ~t)),
    )


def _ratio(num: int, denom: int, both_empty: bool) -> float:
    if denom == 0:
        return 1.0 if both_empty else 0.0
    return num / denom


def overlap_metrics(
        pred,
        truth,
        positive_class: int = 1,
        nclasses: Optional[int] = None,
) -> Overlap:
    """Dice 2TP / (2TP + FP + FN), sensitivity TP / (TP + FN) and
    precision TP / (TP + FP) of the positive class."""
    c = confusion_counts(pred, truth, positive_class, nclasses)
    pred_empty = c.tp + c.fp == 0
    truth_empty = c.tp + c.fn == 0
    both_empty = pred_empty and truth_empty
    return Overlap(
        dice=_ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn, both_empty),
        sensitivity=_ratio(c.tp, c.tp + c.fn, both_empty),
        precision=_ratio(c.tp, c.tp + c.fp, both_empty),
    )


def specificity(
        pred,
        truth,
        positive_class: int = 1,
        nclasses: Optional[int] = None,
) -> float:
    """TN / (TN + FP)."""
    c = confusion_counts(pred, truth, positive_class, nclasses)
    both_empty = c.tn + c.fp == 0 and c.tn + c.fn == 0
    return _ratio(c.tn, c.tn + c.fp, both_empty)


def _points(x, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    if x.ndim != 2 or x.shape[0] == 0:
        raise ValidationError(f'{name} must be a nonempty point set')
    return x


def hausdorff(S, G, metric: str = 'euclidean') -> float:
    """max(max_s min_g d(s, g), max_g min_s d(s, g))."""
    S = _points(S, 'S')
    G = _points(G, 'G')
    if S.shape[1] != G.shape[1]:
        raise ShapeMismatch(
            f'Point sets differ in dimension: {S.shape[1]} vs {G.shape[1]}'
        )
    d = cdist(S, G, metric=metric)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def mask_points(mask) -> np.ndarray:
    """Coordinates of the nonzero entries of a label mask, one row each."""
    return np.argwhere(np.asarray(mask) != 0).astype(np.float64)


def permutation_accuracy(pred, truth) -> float:
    """Accuracy of cluster labels after the best one-to-one relabeling."""
    pred, truth = _labels(pred, truth)
    if pred.size == 0:
        raise ValidationError('No labels to compare')
    pred = pred.astype(np.int64)
    truth = truth.astype(np.int64)
    size = int(max(pred.max(), truth.max())) + 1
    counts = np.zeros((size, size), dtype=np.int64)
    np.add.at(counts, (pred, truth), 1)
    rows, cols = linear_sum_assignment(counts, maximize=True)
    return float(counts[rows, cols].sum() / pred.size)
