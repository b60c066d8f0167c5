"""
gaussian.py

Gaussian-distribution (GD) mass model: per-cluster normal densities for
singletons, pooled densities for multi-hypothesis focal sets.
"""
from __future__ import absolute_import, annotations, division, print_function
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from evidential.core.frame import FocalSet, Frame
from evidential.core.mass import MassFunction, normalized_from
from evidential.errors import NonNormalizable, ShapeMismatch, ValidationError


@dataclass(frozen=True, eq=False)
class ClusterStats:
    """Per-cluster mean, variance (ddof=0) and member count."""
    means: np.ndarray
    variances: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        means = np.asarray(self.means, dtype=np.float64).reshape(-1)
        variances = np.asarray(self.variances, dtype=np.float64).reshape(-1)
        counts = np.asarray(self.counts, dtype=np.int64).reshape(-1)
        if not means.shape == variances.shape == counts.shape:
            raise ShapeMismatch('means, variances and counts differ in length')
        if np.any(variances <= 0):
            raise ValidationError(f'Cluster variances must be > 0: {variances}')
        if np.any(counts <= 0):
            raise ValidationError(f'Cluster counts must be > 0: {counts}')
        object.__setattr__(self, 'means', means)
        object.__setattr__(self, 'variances', variances)
        object.__setattr__(self, 'counts', counts)

    @property
    def nclusters(self) -> int:
        return self.means.shape[0]

    @property
    def stds(self) -> np.ndarray:
        return np.sqrt(self.variances)


def cluster_stats(
        values: Sequence[float],
        labels: Sequence[int],
        nclusters: Optional[int] = None,
) -> ClusterStats:
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    if values.shape != labels.shape:
        raise ShapeMismatch('values and labels differ in length')
    nclusters = int(labels.max()) + 1 if nclusters is None else nclusters
    means, variances, counts = [], [], []
    for c in range(nclusters):
        members = values[labels == c]
        if members.size == 0:
            raise ValidationError(f'Cluster {c} has no members')
        means.append(members.mean())
        variances.append(members.var())
        counts.append(members.size)
    return ClusterStats(np.array(means), np.array(variances), np.array(counts))


def gd_values(
        x: float,
        cluster: ClusterStats,
        focal_structure: Sequence[FocalSet],
) -> np.ndarray:
    """Unnormalized GD values, one per focal set.

    A focal set T uses the mean of its member means and the largest member
    standard deviation.
    """
    out = np.empty(len(focal_structure))
    for j, focal in enumerate(focal_structure):
        members = list(focal.members)
        if not members or max(members) >= cluster.nclusters:
            raise ValidationError(f'{focal} does not match the cluster stats')
        loc = cluster.means[members].mean()
        scale = cluster.stds[members].max()
        out[j] = stats.norm.pdf(x, loc=loc, scale=scale)
    return out


def gd_mass(
        x: float,
        cluster: ClusterStats,
        focal_structure: Optional[Sequence[FocalSet]] = None,
        frame: Optional[Frame] = None,
) -> MassFunction:
    frame = Frame.indexed(cluster.nclusters) if frame is None else frame
    if frame.size != cluster.nclusters:
        raise ShapeMismatch('Frame size differs from the number of clusters')
    if focal_structure is None:
        focal_structure = frame.singletons()
    values = gd_values(x, cluster, focal_structure)
    if not np.any(values > 0):
        raise NonNormalizable(f'All Gaussian densities vanish at x = {x}')
    return normalized_from(frame, list(zip(focal_structure, values)))
