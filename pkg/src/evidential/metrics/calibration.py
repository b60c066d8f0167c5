"""
calibration.py

Expected calibration error over R equal-width confidence bins.

Bins are [r/R, (r+1)/R) except the last, which is closed; a confidence of
exactly 1.0 lands in the last bin.
"""
from __future__ import absolute_import, annotations, division, print_function
from typing import Optional

import numpy as np
import pandas as pd

from evidential.errors import ShapeMismatch, ValidationError


def _inputs(
        confidences,
        correct,
        mask=None,
) -> tuple[np.ndarray, np.ndarray]:
    conf = np.asarray(confidences, dtype=np.float64)
    corr = np.asarray(correct).astype(bool)
    if conf.shape != corr.shape:
        raise ShapeMismatch(f'{conf.shape} confidences vs {corr.shape} flags')
    if mask is not None:
        mask = np.asarray(mask).astype(bool)
        if mask.shape != conf.shape:
            raise ShapeMismatch(f'Mask shape {mask.shape} vs {conf.shape}')
        conf = conf[mask]
        corr = corr[mask]
    conf = conf.reshape(-1)
    corr = corr.reshape(-1)
    if conf.size == 0:
        raise ValidationError('No predictions to calibrate')
    if np.any((conf < 0) | (conf > 1)) or not np.all(np.isfinite(conf)):
        raise ValidationError('Confidences must lie in [0, 1]')
    return conf, corr


def bin_indices(confidences: np.ndarray, nbins: int = 10) -> np.ndarray:
    if nbins < 1:
        raise ValidationError(f'nbins must be >= 1, got {nbins}')
    idx = np.floor(np.asarray(confidences) * nbins).astype(np.int64)
    return np.clip(idx, 0, nbins - 1)


def reliability_table(
        confidences,
        correct,
        nbins: int = 10,
        mask=None,
) -> pd.DataFrame:
    """Per-bin count, accuracy and mean confidence (empty bins give NaN)."""
    conf, corr = _inputs(confidences, correct, mask)
    idx = bin_indices(conf, nbins)
    counts = np.bincount(idx, minlength=nbins)
    hits = np.bincount(idx, weights=corr.astype(np.float64), minlength=nbins)
    sums = np.bincount(idx, weights=conf, minlength=nbins)
    with np.errstate(invalid='ignore', divide='ignore'):
        acc = np.where(counts > 0, hits / counts, np.nan)
        mean_conf = np.where(counts > 0, sums / counts, np.nan)
    edges = np.arange(nbins + 1) / nbins
    return pd.DataFrame({
        'bin': np.arange(nbins),
        'lower': edges[:-1],
        'upper': edges[1:],
        'count': counts,
        'accuracy': acc,
        'confidence': mean_conf,
    })


def ece(
        confidences,
        correct,
        nbins: int = 10,
        mask: Optional[np.ndarray] = None,
) -> float:
    """Σ_r (|B_r| / N) |acc(B_r) - conf(B_r)|; empty bins contribute 0.

    `mask` restricts the computation to a region (e.g. a bounding box).
    """
    table = reliability_table(confidences, correct, nbins, mask)
    full = table[table['count'] > 0]
    total = table['count'].sum()
    gaps = np.abs(full['accuracy'] - full['confidence']).to_numpy()
    weights = full['count'].to_numpy() / total
    return float(np.sum(weights * gaps))
