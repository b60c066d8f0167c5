"""
eknn.py

Evidential k-nearest-neighbor rule.

Each of the K nearest training neighbors x_i (class y_i = c) is a simple
mass function on {ω_c} with support φ_c(d_i) = α exp(-γ_c d_i²); the K
pieces of evidence are pooled with Dempster's rule.
"""
from __future__ import absolute_import, annotations, division, print_function
import logging
from typing import Optional, Sequence, Union

import numpy as np
from scipy.spatial.distance import cdist, pdist

from evidential.configs import EknnConfig
from evidential.core.frame import Frame
from evidential.core.mass import (
    MassFunction,
    combine_all,
    mass_from_assignments,
)
from evidential.errors import DimensionMismatch, ValidationError

log = logging.getLogger(__name__)


def fit_gamma(X: np.ndarray) -> float:
    """Shared scale γ = 1 / mean squared distance over training pairs."""
    X = np.asarray(X, dtype=np.float64)
    if X.shape[0] < 2:
        raise ValidationError('fit_gamma needs at least two training points')
    msd = float(np.mean(pdist(X, metric='sqeuclidean')))
    if msd <= 0.0:
        raise ValidationError('All training points coincide; cannot fit gamma')
    return 1.0 / msd


def class_gammas(
        gamma: Optional[Union[float, Sequence[float]]],
        X: np.ndarray,
        nclasses: int,
) -> np.ndarray:
    if gamma is None:
        return np.full(nclasses, fit_gamma(X))
    if isinstance(gamma, (list, tuple, np.ndarray)):
        gammas = np.asarray(gamma, dtype=np.float64)
        if gammas.shape != (nclasses,):
            raise DimensionMismatch(
                f'Expected {nclasses} per-class gammas, got {gammas.shape}'
            )
        return gammas
    return np.full(nclasses, float(gamma))


def _check_training_set(
        X: np.ndarray,
        y: np.ndarray,
        K: int,
) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValidationError('Training set is empty')
    if y.shape != (X.shape[0],):
        raise DimensionMismatch(f'{X.shape[0]} points but {y.shape} labels')
    if K > X.shape[0]:
        raise ValidationError(f'K = {K} exceeds training set size {X.shape[0]}')
    return X, y


def neighbor_masses(
        dists: np.ndarray,
        labels: np.ndarray,
        frame: Frame,
        alpha: float,
        gammas: np.ndarray,
) -> list[MassFunction]:
    out = []
    for d, c in zip(dists, labels):
        s = float(alpha * np.exp(-gammas[c] * d ** 2))
        out.append(mass_from_assignments(frame, [
            (frame.singleton(int(c)), s),
            (frame.omega, 1.0 - s),
        ]))
    return out


def eknn_predict_batch(
        X: np.ndarray,
        X_train: np.ndarray,
        y_train: np.ndarray,
        config: Optional[EknnConfig] = None,
        frame: Optional[Frame] = None,
) -> list[MassFunction]:
    config = EknnConfig() if config is None else config
    X_train, y_train = _check_training_set(X_train, y_train, config.K)
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != X_train.shape[1]:
        raise DimensionMismatch(
            f'Inputs have {X.shape[1]} features, training set {X_train.shape[1]}'
        )
    nclasses = int(y_train.max()) + 1 if frame is None else frame.size
    frame = Frame.indexed(nclasses) if frame is None else frame
    if int(y_train.max()) >= frame.size:
        raise ValidationError(f'Label {int(y_train.max())} outside {frame}')
    gammas = class_gammas(config.gamma, X_train, frame.size)
    dists = cdist(X, X_train)
    # stable sort: equidistant neighbors are taken in training order
    nearest = np.argsort(dists, axis=1, kind='stable')[:, :config.K]
    masses = []
    for n in range(X.shape[0]):
        idxs = nearest[n]
        pieces = neighbor_masses(dists[n, idxs], y_train[idxs], frame,
                                 config.alpha, gammas)
        m, _ = combine_all(pieces)
        masses.append(m)
    return masses


def eknn_predict(
        x: np.ndarray,
        X_train: np.ndarray,
        y_train: np.ndarray,
        config: Optional[EknnConfig] = None,
        frame: Optional[Frame] = None,
) -> MassFunction:
    x = np.asarray(x, dtype=np.float64).reshape(1, -1)
    return eknn_predict_batch(x, X_train, y_train, config, frame)[0]
