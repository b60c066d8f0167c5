"""
fcm.py

Fuzzy c-means by alternating center / membership updates.
"""
from __future__ import absolute_import, annotations, division, print_function
from dataclasses import dataclass, field
import logging
from typing import Optional
import warnings

import numpy as np
from scipy.spatial.distance import cdist

from evidential.configs import FcmConfig
from evidential.errors import ConvergenceWarning, EvidentialError, ValidationError


log = logging.getLogger(__name__)


@dataclass
class FuzzyPartition:
    centers: np.ndarray       # C x D
    memberships: np.ndarray   # N x C, rows sum to 1
    objective: list[float] = field(default_factory=list)
    niter: int = 0
    converged: bool = False

    def labels(self) -> np.ndarray:
        return np.argmax(self.memberships, axis=1)


def check_data(data: np.ndarray, nclusters: int) -> np.ndarray:
    data = np.asarray(data, dtype=np.float64)
    if data.ndim == 1:
        data = data[:, None]
    if data.ndim != 2 or not np.all(np.isfinite(data)):
        raise ValidationError('Data must be a finite N x D array')
    if not 1 <= nclusters <= data.shape[0]:
        raise ValidationError(
            f'Need 1 <= C <= N, got C = {nclusters}, N = {data.shape[0]}'
        )
    return data


def fcm_memberships(
        data: np.ndarray,
        centers: np.ndarray,
        m: float = 2.0,
) -> np.ndarray:
    """u_ij = 1 / Σ_k (d_ij / d_ik)^(2/(m-1)).

    A point sitting on a center belongs to it (split evenly between
    coinciding centers).
    """
    d2 = cdist(data, centers, 'sqeuclidean')
    zero = d2 == 0.0
    with np.errstate(divide='ignore', invalid='ignore'):
        inv = d2 ** (-1.0 / (m - 1.0))
        u = inv / inv.sum(axis=1, keepdims=True)
    hit = zero.any(axis=1)
    if np.any(hit):
        u[hit] = zero[hit] / zero[hit].sum(axis=1, keepdims=True)
    return u


def fcm_centers(data: np.ndarray, u: np.ndarray, m: float = 2.0) -> np.ndarray:
    w = u ** m
    return (w.T @ data) / w.sum(axis=0)[:, None]


def fcm_objective(
        data: np.ndarray,
        centers: np.ndarray,
        u: np.ndarray,
        m: float = 2.0,
) -> float:
    """J = Σ_i Σ_j u_ij^m ||x_i - c_j||²."""
    return float(np.sum(u ** m * cdist(data, centers, 'sqeuclidean')))


def fcm_fit(
        data: np.ndarray,
        nclusters: int,
        m: float = 2.0,
        max_iter: int = 300,
        tol: float = 1e-6,
        seed: Optional[int] = None,
        config: Optional[FcmConfig] = None,
) -> FuzzyPartition:
    if config is None:
        config = FcmConfig(nclusters=nclusters, m=m, max_iter=max_iter,
                           tol=tol, seed=seed)
    data = check_data(data, config.nclusters)
    m = config.m
    rng = np.random.default_rng(config.seed)
    u = rng.random((data.shape[0], config.nclusters))
    u /= u.sum(axis=1, keepdims=True)
    centers = fcm_centers(data, u, m)
    u = fcm_memberships(data, centers, m)
    objective = [fcm_objective(data, centers, u, m)]
    converged = False
    niter = 0
    for niter in range(1, config.max_iter + 1):
        new_centers = fcm_centers(data, u, m)
        shift = float(np.max(np.linalg.norm(new_centers - centers, axis=1)))
        centers = new_centers
        u = fcm_memberships(data, centers, m)
        objective.append(fcm_objective(data, centers, u, m))
        if config.check_monotone:
            prev, curr = objective[-2], objective[-1]
            if curr > prev + 1e-9 * max(1.0, abs(prev)):
                raise EvidentialError(
                    f'FCM objective increased at iteration {niter}: '
                    f'{prev!r} -> {curr!r}'
                )
        if shift < config.tol:
            converged = True
            break

    if not converged:
        msg = (f'FCM did not converge in {config.max_iter} iterations, '
               f'objective = {objective[-1]:.6g}')
        log.warning(msg)
        warnings.warn(msg, ConvergenceWarning)
    else:
        log.debug(f'FCM converged after {niter} iterations')

    return FuzzyPartition(
        centers=centers,
        memberships=u,
        objective=objective,
        niter=niter,
        converged=converged,
    )
