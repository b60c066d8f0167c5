"""
contour.py

Fusion rules on contour functions.

  - `fuse_prob_mass`: a probability vector combined with a mass function
    whose focal sets are singletons and Ω; the result is Bayesian.
  - `contextual_discount_contour`: contour of a mass function discounted
    with one reliability β_c per class.
  - `fuse_discounted_sources`: normalized product of contextually
    discounted contours from T sources.
"""
from __future__ import absolute_import, annotations, division, print_function
from dataclasses import dataclass
import logging
import os
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd

from evidential.core.frame import Frame
from evidential.core.mass import ContourFunction, MassFunction, contour
from evidential.errors import (
    FrameMismatch,
    ShapeMismatch,
    ValidationError,
    ZeroDenominator,
)

log = logging.getLogger(__name__)

PROB_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ReliabilityVector:
    """β = (β_1, ..., β_C), the reliability of a source in each context."""
    beta: np.ndarray

    def __post_init__(self):
        beta = np.array(self.beta, dtype=np.float64)
        if beta.ndim != 1 or beta.size == 0:
            raise ShapeMismatch(f'Reliability must be a vector, got {beta.shape}')
        if not np.all((beta >= 0.0) & (beta <= 1.0)):
            raise ValidationError(f'Reliabilities must lie in [0, 1]: {beta}')
        beta.setflags(write=False)
        object.__setattr__(self, 'beta', beta)

    @classmethod
    def full(cls, size: int, value: float) -> ReliabilityVector:
        return cls(np.full(size, value))

    def __len__(self) -> int:
        return self.beta.size


BetaLike = Union[ReliabilityVector, Sequence[float], np.ndarray]


def _beta(beta: BetaLike, size: int) -> np.ndarray:
    if not isinstance(beta, ReliabilityVector):
        beta = ReliabilityVector(np.asarray(beta, dtype=np.float64))
    if len(beta) != size:
        raise ShapeMismatch(f'Expected {size} reliabilities, got {len(beta)}')
    return beta.beta


def _probability(p, size: int) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    if p.shape != (size,):
        raise ShapeMismatch(f'Expected {size} probabilities, got {p.shape}')
    if np.any(p < 0) or abs(p.sum() - 1.0) > PROB_TOL:
        raise ValidationError(f'Not a probability vector: {p}')
    return p


def fuse_prob_mass(p, m: MassFunction) -> np.ndarray:
    """p(ω_c) pl(ω_c) / Σ_l p(ω_l) pl(ω_l) with pl(ω_c) = m({ω_c}) + m(Ω).

    A mass function with pl ≡ 1 returns `p` itself (a copy, bit for bit).
    """
    frame = m.frame
    p = _probability(p, frame.size)
    for focal in m.focal_sets:
        if not (focal.is_singleton() or focal == frame.omega):
            raise ValidationError(
                f'Focal set {frame.key(focal)} is neither a singleton nor Ω'
            )
    pl = contour(m).values
    if np.all(pl == 1.0):
        return p.copy()
    num = p * pl
    denom = num.sum()
    if denom <= 0.0:
        raise ZeroDenominator('p and the contour of m have disjoint supports')
    return num / denom


def contextual_discount_contour(
        pl: ContourFunction,
        beta: BetaLike,
) -> ContourFunction:
    """1 - β_c + β_c pl(ω_c)."""
    beta = _beta(beta, pl.frame.size)
    return ContourFunction(pl.frame, 1.0 - beta + beta * pl.values)


def fuse_discounted_sources(
        pls: Sequence[ContourFunction],
        betas: Sequence[BetaLike],
) -> np.ndarray:
    if len(pls) == 0:
        raise ValidationError('No sources to fuse')
    if len(pls) != len(betas):
        raise ShapeMismatch(f'{len(pls)} contours but {len(betas)} reliabilities')
    frame = pls[0].frame
    for pl in pls[1:]:
        frame.check_same(pl.frame)
    prod = np.ones(frame.size)
    for pl, beta in zip(pls, betas):
        prod = prod * contextual_discount_contour(pl, beta).values
    denom = prod.sum()
    if denom <= 0.0:
        raise ZeroDenominator('Discounted contours have no common support')
    return prod / denom


def fuse_discounted_batch(pls: np.ndarray, betas: np.ndarray) -> np.ndarray:
    """Vectorized fusion of T x N x C contour values with T x C reliabilities.

    Returns the N x C fused probabilities.
    """
    pls = np.asarray(pls, dtype=np.float64)
    betas = np.asarray(betas, dtype=np.float64)
    if pls.ndim != 3 or betas.shape != (pls.shape[0], pls.shape[2]):
        raise ShapeMismatch(
            f'Contours {pls.shape} and reliabilities {betas.shape} disagree'
        )
    if np.any((pls < 0) | (pls > 1)):
        raise ValidationError('Contour values must lie in [0, 1]')
    if np.any((betas < 0) | (betas > 1)):
        raise ValidationError('Reliabilities must lie in [0, 1]')
    disc = 1.0 - betas[:, None, :] + betas[:, None, :] * pls
    prod = np.prod(disc, axis=0)
    denom = prod.sum(axis=1, keepdims=True)
    if np.any(denom <= 0.0):
        bad = np.flatnonzero(denom[:, 0] <= 0.0)
        raise ZeroDenominator(f'No common support for objects {bad.tolist()}')
    return prod / denom


def reliability_table(
        betas: Sequence[BetaLike],
        labels: Union[Frame, Sequence[str]],
        source_names: Optional[Sequence[str]] = None,
) -> pd.DataFrame:
    """Source x class table of reliabilities."""
    labels = list(labels.labels if isinstance(labels, Frame) else labels)
    rows = [_beta(b, len(labels)) for b in betas]
    if source_names is None:
        source_names = [f'source{t + 1}' for t in range(len(rows))]
    if len(source_names) != len(rows):
        raise ShapeMismatch(
            f'{len(rows)} reliability vectors but {len(source_names)} names'
        )
    df = pd.DataFrame(np.stack(rows), columns=labels,
                      index=pd.Index(list(source_names), name='source'))
    return df


def write_reliability_table(df: pd.DataFrame, fpath: os.PathLike) -> None:
    df.to_csv(fpath, float_format='%.17g')


def read_reliability_table(
        fpath: os.PathLike,
        labels: Optional[Sequence[str]] = None,
) -> pd.DataFrame:
    """Reads a table written by `write_reliability_table`.

    With `labels`, columns are checked against (and ordered by) the frame.
    """
    df = pd.read_csv(fpath, index_col=0)
    df.columns = [str(c) for c in df.columns]
    if labels is not None:
        labels = [str(x) for x in labels]
        if sorted(df.columns) != sorted(labels):
            raise FrameMismatch(
                f'Reliability table columns {list(df.columns)} vs {labels}'
            )
        df = df[labels]
    for row in df.to_numpy(dtype=np.float64):
        ReliabilityVector(row)
    return df
