"""
data.py

Synthetic datasets and delimiter-separated dataset loading.

The banana problem is two interleaved half circles of radius 1: class 0
along (cos t, sin t), class 1 along (1 - cos t, 0.5 - sin t) for
t ∈ [0, π], with isotropic Gaussian noise.
"""
from __future__ import absolute_import, annotations, division, print_function
import logging
import os
from typing import Optional

import numpy as np
import pandas as pd

from evidential.errors import ValidationError

log = logging.getLogger(__name__)

BANANA_NOISE = 0.15
BLOB_CENTER = (2.5, 1.5)
BLOB_STD = 0.2


def banana_data(
        n: int,
        seed: Optional[int] = None,
        noise: float = BANANA_NOISE,
) -> tuple[np.ndarray, np.ndarray]:
    """Returns (X: n x 2, y: n) with ceil(n / 2) points of class 0."""
    if n < 2:
        raise ValidationError(f'Need at least 2 points, got {n}')
    rng = np.random.default_rng(seed)
    n0 = (n + 1) // 2
    n1 = n - n0
    t0 = rng.uniform(0.0, np.pi, size=n0)
    t1 = rng.uniform(0.0, np.pi, size=n1)
    upper = np.stack([np.cos(t0), np.sin(t0)], axis=1)
    lower = np.stack([1.0 - np.cos(t1), 0.5 - np.sin(t1)], axis=1)
    X = np.concatenate([upper, lower]) + noise * rng.standard_normal((n, 2))
    y = np.concatenate([np.zeros(n0, dtype=np.int64), np.ones(n1, dtype=np.int64)])
    perm = rng.permutation(n)
    return X[perm], y[perm]


def off_manifold_blob(
        n: int,
        seed: Optional[int] = None,
        center: tuple[float, float] = BLOB_CENTER,
        std: float = BLOB_STD,
) -> np.ndarray:
    """n points of a Gaussian blob far from both half circles."""
    rng = np.random.default_rng(seed)
    return np.asarray(center)[None, :] + std * rng.standard_normal((n, 2))


def two_blobs(
        n: int,
        seed: Optional[int] = None,
        separation: float = 6.0,
        std: float = 0.5,
) -> tuple[np.ndarray, np.ndarray]:
    """Two isotropic blobs at (0, 0) and (separation, 0)."""
    rng = np.random.default_rng(seed)
    n0 = (n + 1) // 2
    y = np.concatenate([np.zeros(n0, dtype=np.int64),
                        np.ones(n - n0, dtype=np.int64)])
    means = np.array([[0.0, 0.0], [separation, 0.0]])
    X = means[y] + std * rng.standard_normal((n, 2))
    return X, y


def load_features(
        fpath: os.PathLike,
        delimiter: str = ',',
        has_labels: bool = True,
) -> tuple[np.ndarray, Optional[np.ndarray]]:
    """Reads numeric rows; with `has_labels` the last column is the label."""
    try:
        df = pd.read_csv(fpath, sep=delimiter, header=None, comment='#')
        values = df.to_numpy(dtype=np.float64)
    except (ValueError, pd.errors.ParserError) as exc:
        raise ValidationError(f'Malformed data file {fpath}: {exc}') from exc
    if values.ndim != 2 or values.shape[0] == 0:
        raise ValidationError(f'No rows in {fpath}')
    if not np.all(np.isfinite(values)):
        raise ValidationError(f'Non-finite values in {fpath}')
    if not has_labels:
        return values, None
    if values.shape[1] < 2:
        raise ValidationError(f'{fpath}: need features plus a label column')
    labels = values[:, -1]
    if np.any(labels < 0) or np.any(labels != np.round(labels)):
        raise ValidationError(f'{fpath}: labels must be nonnegative integers')
    return values[:, :-1], labels.astype(np.int64)


def save_features(
        fpath: os.PathLike,
        X: np.ndarray,
        y: Optional[np.ndarray] = None,
        delimiter: str = ',',
) -> None:
    df = pd.DataFrame(np.asarray(X, dtype=np.float64))
    if y is not None:
        df[df.shape[1]] = np.asarray(y, dtype=np.int64)
    df.to_csv(fpath, sep=delimiter, header=False, index=False,
              float_format='%.17g')
