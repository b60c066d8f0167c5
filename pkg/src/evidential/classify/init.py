"""
init.py

Prototype initialization for the ENN and RBF classifiers.
"""
from __future__ import absolute_import, annotations, division, print_function
import logging
from typing import Optional

import numpy as np
from sklearn.cluster import KMeans

from evidential.errors import DimensionMismatch, ValidationError

log = logging.getLogger(__name__)


def _check_features(features: np.ndarray, nprototypes: int) -> np.ndarray:
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2:
        raise DimensionMismatch(
            f'Expected an N x D feature matrix, got shape {features.shape}'
        )
    if nprototypes < 1:
        raise ValidationError(f'nprototypes must be >= 1, got {nprototypes}')
    if nprototypes > features.shape[0]:
        raise ValidationError(
            f'Cannot place {nprototypes} prototypes on {features.shape[0]} points'
        )
    return features


def kmeans_prototype_init(
        features: np.ndarray,
        nprototypes: int,
        seed: Optional[int] = None,
) -> np.ndarray:
    """I x D k-means centers, started from a seeded k-means++ draw."""
    features = _check_features(features, nprototypes)
    km = KMeans(
        n_clusters=nprototypes,
        init='k-means++',
        n_init=1,
        random_state=seed,
    ).fit(features)
    log.debug(f'k-means init: I={nprototypes}, inertia={km.inertia_:.4g}')
    return np.asarray(km.cluster_centers_, dtype=np.float64)


def random_prototype_init(
        features: np.ndarray,
        nprototypes: int,
        seed: Optional[int] = None,
) -> np.ndarray:
    """I distinct training points drawn uniformly without replacement."""
    features = _check_features(features, nprototypes)
    rng = np.random.default_rng(seed)
    idxs = rng.choice(features.shape[0], size=nprototypes, replace=False)
    return features[np.sort(idxs)].copy()


def init_prototypes(
        features: np.ndarray,
        nprototypes: int,
        method: str = 'kmeans',
        seed: Optional[int] = None,
) -> np.ndarray:
    if method == 'kmeans':
        return kmeans_prototype_init(features, nprototypes, seed)
    if method == 'random':
        return random_prototype_init(features, nprototypes, seed)
    raise ValidationError(f'Unknown prototype init: {method}')
