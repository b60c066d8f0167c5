"""
ecm.py

Evidential c-means: alternating optimization of

    J = Σ_i Σ_j |A_j|^α m_ij^β d_ij² + Σ_i δ² m_i∅^β

over masses (closed form) and cluster prototypes (one C x C linear
system), where d_ij is the distance from x_i to the barycenter of the
prototypes of the clusters in A_j.
"""
from __future__ import absolute_import, annotations, division, print_function
import logging
from typing import Optional, Sequence
import warnings

import numpy as np
from scipy.spatial.distance import cdist
from sklearn.cluster import kmeans_plusplus

from evidential.cluster.credal import CredalPartition, focal_structure
from evidential.cluster.fcm import check_data
from evidential.configs import EcmConfig
from evidential.core.frame import FocalSet, Frame
from evidential.errors import ConvergenceWarning, ValidationError


log = logging.getLogger(__name__)

SINGULAR_TOL = 1e-12


def membership_matrix(focal: Sequence[FocalSet], nclusters: int) -> np.ndarray:
    """f x C indicator, row j marks the clusters in A_j."""
    out = np.zeros((len(focal), nclusters))
    for j, f in enumerate(focal):
        out[j, list(f.members)] = 1.0
    return out


def focal_prototypes(
        prototypes: np.ndarray,
        focal: Sequence[FocalSet],
) -> np.ndarray:
    """Barycenter of the member prototypes for every focal set."""
    member = membership_matrix(focal, prototypes.shape[0])
    return (member @ prototypes) / member.sum(axis=1, keepdims=True)


def ecm_masses(
        data: np.ndarray,
        prototypes: np.ndarray,
        focal: Sequence[FocalSet],
        alpha: float = 1.0,
        beta: float = 2.0,
        delta: float = 10.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form mass update; returns (N x f masses, N empty-set masses).

    An object at distance zero from some focal barycenters splits its mass
    evenly among them.
    """
    sizes = np.array([f.size for f in focal], dtype=np.float64)
    d2 = cdist(data, focal_prototypes(prototypes, focal), 'sqeuclidean')
    power = -1.0 / (beta - 1.0)
    zero = d2 == 0.0
    with np.errstate(divide='ignore', invalid='ignore'):
        weights = sizes[None, :] ** (alpha * power) * d2 ** power
        denom = weights.sum(axis=1) + (delta ** 2) ** power
        masses = weights / denom[:, None]
    hit = zero.any(axis=1)
    if np.any(hit):
        masses[hit] = zero[hit] / zero[hit].sum(axis=1, keepdims=True)
    empty = np.clip(1.0 - masses.sum(axis=1), 0.0, None)
    return masses, empty


def ecm_objective(
        data: np.ndarray,
        prototypes: np.ndarray,
        focal: Sequence[FocalSet],
        masses: np.ndarray,
        empty: np.ndarray,
        alpha: float = 1.0,
        beta: float = 2.0,
        delta: float = 10.0,
) -> float:
    sizes = np.array([f.size for f in focal], dtype=np.float64)
    d2 = cdist(data, focal_prototypes(prototypes, focal), 'sqeuclidean')
    fit = np.sum(sizes[None, :] ** alpha * masses ** beta * d2)
    return float(fit + delta ** 2 * np.sum(empty ** beta))


def ecm_system(
        data: np.ndarray,
        masses: np.ndarray,
        focal: Sequence[FocalSet],
        nclusters: int,
        alpha: float = 1.0,
        beta: float = 2.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Build H (C x C) and B (C x D) of the prototype equations H V = B."""
    sizes = np.array([f.size for f in focal], dtype=np.float64)
    member = membership_matrix(focal, nclusters)
    mb = masses ** beta
    # B_lq = Σ_i x_iq Σ_{A_j ∋ ω_l} |A_j|^(α-1) m_ij^β
    B = (mb * sizes ** (alpha - 1.0)) @ member
    B = B.T @ data
    # H_lk = Σ_i Σ_{A_j ⊇ {ω_k, ω_l}} |A_j|^(α-2) m_ij^β
    w = (mb * sizes ** (alpha - 2.0)).sum(axis=0)
    H = (member * w[:, None]).T @ member
    return H, B


def _reseed(
        data: np.ndarray,
        prototypes: np.ndarray,
        dead: np.ndarray,
        rng: np.random.Generator,
) -> np.ndarray:
    prototypes = prototypes.copy()
    for c in np.flatnonzero(dead):
        idx = int(rng.integers(data.shape[0]))
        log.warning(f'Cluster {c} lost all of its mass; reseeding at x[{idx}]')
        prototypes[c] = data[idx]
    return prototypes


def ecm_fit(
        data: np.ndarray,
        config: Optional[EcmConfig] = None,
        focal: Optional[Sequence[FocalSet]] = None,
        frame: Optional[Frame] = None,
        init: Optional[np.ndarray] = None,
) -> tuple[CredalPartition, np.ndarray]:
    """Fit ECM and return the credal partition and the C x D prototypes."""
    config = EcmConfig() if config is None else config
    nclusters = config.nclusters
    data = check_data(data, nclusters)
    frame = Frame.indexed(nclusters) if frame is None else frame
    if frame.size != nclusters:
        raise ValidationError('Frame size differs from the number of clusters')
    focal = (focal_structure(nclusters, pairs=config.pairs)
             if focal is None else sorted(frame.validate(f) for f in focal))
    if len(focal) == 0 or any(f.is_empty() for f in focal):
        raise ValidationError('Focal structure must hold nonempty sets')

    params = dict(alpha=config.alpha, beta=config.beta)
    rng = np.random.default_rng(config.seed)
    if init is None:
        seed = None if config.seed is None else int(config.seed)
        prototypes, _ = kmeans_plusplus(data, nclusters, random_state=seed)
    else:
        prototypes = np.asarray(init, dtype=np.float64).copy()

    masses, empty = ecm_masses(data, prototypes, focal,
                               delta=config.delta, **params)
    objective = ecm_objective(data, prototypes, focal, masses, empty,
                              delta=config.delta, **params)
    converged = False
    for niter in range(1, config.max_iter + 1):
        H, B = ecm_system(data, masses, focal, nclusters, **params)
        dead = np.diag(H) <= SINGULAR_TOL
        if np.any(dead):
            prototypes = _reseed(data, prototypes, dead, rng)
        else:
            try:
                prototypes = np.linalg.solve(H, B)
            except np.linalg.LinAlgError:
                log.warning('Singular prototype system; keeping prototypes')
        masses, empty = ecm_masses(data, prototypes, focal,
                                   delta=config.delta, **params)
        previous = objective
        objective = ecm_objective(data, prototypes, focal, masses, empty,
                                  delta=config.delta, **params)
        log.debug(f'ECM iteration {niter}: J = {objective:.8g}')
        if abs(previous - objective) < config.tol * max(1.0, abs(objective)):
            converged = True
            break

    if not converged:
        msg = (f'ECM did not converge in {config.max_iter} iterations, '
               f'objective = {objective:.6g}')
        log.warning(msg)
        warnings.warn(msg, ConvergenceWarning)

    partition = CredalPartition(frame, tuple(focal), masses, empty)
    return partition, prototypes
