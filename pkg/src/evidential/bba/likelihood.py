"""
likelihood.py

Likelihood-based mass functions: Shafer's consonant model and the two
Appriou models.
"""
from __future__ import absolute_import, annotations, division, print_function
from typing import Optional, Sequence

import numpy as np

from evidential.core.frame import Frame
from evidential.core.mass import (
    ContourFunction,
    MassFunction,
    consonant_from_contour,
)
from evidential.errors import AllZeroLikelihood, ValidationError

TOL = 1e-12


def binary_frame(label: str = 'omega') -> Frame:
    """Frame {ω, ¬ω} used by the single-hypothesis models."""
    return Frame((label, f'not_{label}'))


def likelihood_vector(likelihoods: Sequence[float]) -> np.ndarray:
    lik = np.asarray(likelihoods, dtype=np.float64).reshape(-1)
    if lik.size == 0 or not np.all(np.isfinite(lik)) or np.any(lik < 0):
        raise ValidationError(f'Likelihoods must be finite and >= 0: {lik}')
    if not np.any(lik > 0):
        raise AllZeroLikelihood('At least one likelihood must be positive')
    return lik


def shafer_bba(
        likelihoods: Sequence[float],
        frame: Optional[Frame] = None,
) -> tuple[ContourFunction, MassFunction]:
    """pl(ω_c) = ℏ ℓ(ω_c | x) with ℏ = 1 / max ℓ, plus its consonant mass."""
    lik = likelihood_vector(likelihoods)
    frame = Frame.indexed(lik.size) if frame is None else frame
    pl = ContourFunction(frame, lik / lik.max())
    return pl, consonant_from_contour(pl)


def _check_appriou(lik: float, alpha: float, hbar: float) -> float:
    if not 0.0 <= alpha <= 1.0:
        raise ValidationError(f'Reliability must be in [0, 1], got {alpha}')
    scaled = hbar * lik
    if not -TOL <= scaled <= 1.0 + TOL:
        raise ValidationError(f'ℏ·ℓ must be in [0, 1], got {scaled}')
    return min(max(scaled, 0.0), 1.0)


def appriou1(
        lik: float,
        alpha: float,
        hbar: float,
        frame: Optional[Frame] = None,
) -> MassFunction:
    """m({¬ω}) = α (1 - ℏℓ), m(Ω) = 1 - α (1 - ℏℓ)."""
    scaled = _check_appriou(lik, alpha, hbar)
    frame = binary_frame() if frame is None else frame
    against = alpha * (1.0 - scaled)
    return MassFunction(frame, {
        frame.singleton(1): against,
        frame.omega: 1.0 - against,
    })


def appriou2(
        lik: float,
        alpha: float,
        hbar: float,
        frame: Optional[Frame] = None,
) -> MassFunction:
    """m({ω}) = α ℏℓ/(1 + ℏℓ), m({¬ω}) = α/(1 + ℏℓ), m(Ω) = 1 - α."""
    scaled = _check_appriou(lik, alpha, hbar)
    frame = binary_frame() if frame is None else frame
    return MassFunction(frame, {
        frame.singleton(0): alpha * scaled / (1.0 + scaled),
        frame.singleton(1): alpha / (1.0 + scaled),
        frame.omega: 1.0 - alpha,
    })
