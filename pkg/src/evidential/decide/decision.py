"""
decision.py

Decisions from mass functions: lower / upper expected utilities and the
pignistic and maximum-plausibility rules.

Ties between classes go to the lowest frame index. Two scores count as
tied when they differ by at most `TIE_TOL`.
"""
from __future__ import absolute_import, annotations, division, print_function
import math

import numpy as np

from evidential.core.mass import MassFunction, contour, pignistic
from evidential.errors import ShapeMismatch, ValidationError

TIE_TOL = 1e-12


def _utilities(m: MassFunction, u) -> np.ndarray:
    u = np.asarray(u, dtype=np.float64)
    if u.ndim not in (1, 2) or u.shape[-1] != m.frame.size:
        raise ShapeMismatch(
            f'Utilities must have {m.frame.size} columns, got shape {u.shape}'
        )
    if not np.all(np.isfinite(u)):
        raise ValidationError('Utilities must be finite')
    return u


def expected_utility_bounds(m: MassFunction, u):
    """Lower and upper expected utility of one act, or of each act.

    E_low = Σ_A m(A) min_{ω ∈ A} u(ω),  E_up = Σ_A m(A) max_{ω ∈ A} u(ω)

    `u` is a C-vector (returns a float pair) or an acts x C matrix (returns
    two vectors, one entry per act).
    """
    u = _utilities(m, u)
    rows = np.atleast_2d(u)
    lower = np.empty(rows.shape[0])
    upper = np.empty(rows.shape[0])
    for a, row in enumerate(rows):
        lower[a] = math.fsum(
            v * row[list(A.members)].min() for A, v in m.items()
        )
        upper[a] = math.fsum(
            v * row[list(A.members)].max() for A, v in m.items()
        )
    if u.ndim == 1:
        return float(lower[0]), float(upper[0])
    return lower, upper


def argmax_lowest(scores: np.ndarray) -> int:
    """Index of the maximum; near-ties resolved to the lowest index."""
    scores = np.asarray(scores, dtype=np.float64)
    best = scores.max()
    return int(np.flatnonzero(scores >= best - TIE_TOL)[0])


def decide_pignistic(m: MassFunction) -> int:
    return argmax_lowest(pignistic(m))


def decide_max_plausibility(m: MassFunction) -> int:
    return argmax_lowest(contour(m).values)
