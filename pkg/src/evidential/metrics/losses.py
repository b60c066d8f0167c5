"""
losses.py

Array versions of the training losses, for evaluating predictions outside
of a training loop.
"""
from __future__ import absolute_import, annotations, division, print_function
from typing import Any

import numpy as np
import torch

from evidential.errors import ShapeMismatch, ValidationError
from evidential.learning_rate.pytorch.learning_rate import (  # noqa:F401
    lr_schedule,
)
from evidential.loss.pytorch import loss as tloss

DICE_VARIANTS = ('class_sum', 'pooled')


def _tensor(x) -> torch.Tensor:
    return torch.as_tensor(np.asarray(x, dtype=np.float64))


def model_regularizer(model) -> float:
    """Σ α_i for an ENN model, Σ v_i² for an RBF model."""
    kind = getattr(model, 'kind', None)
    if kind == 'enn':
        return float(np.sum(model.alpha))
    if kind == 'rbf':
        return float(np.sum(model.v ** 2))
    raise ValidationError(f'No regularizer for model kind {kind!r}')


def dice_loss_binary(S, G, lam: float = 0.0, reg: Any = 0.0) -> float:
    """1 - 2ΣSG / (ΣS + ΣG) [+ λ R].

    Defined as 0 when S and G are both identically zero. `reg` is a number
    or a trained ENN / RBF model.
    """
    S = _tensor(S).reshape(-1)
    G = _tensor(G).reshape(-1)
    if lam < 0:
        raise ValidationError(f'lambda must be >= 0, got {lam}')
    value = float(tloss.dice_binary(S, G))
    if lam > 0:
        reg = reg if isinstance(reg, (int, float)) else model_regularizer(reg)
        value += lam * float(reg)
    return value


def dice_loss_multiclass(S, G, variant: str = 'class_sum') -> float:
    """Soft Dice on N x C arrays.

    'class_sum' adds the per-class losses (a class absent from both S and G
    contributes 0); 'pooled' uses one ratio over all classes.
    """
    S = _tensor(S)
    G = _tensor(G)
    if S.ndim != 2:
        raise ShapeMismatch(f'Expected N x C arrays, got {tuple(S.shape)}')
    if variant == 'class_sum':
        return float(tloss.dice_class_sum(S, G))
    if variant == 'pooled':
        return float(tloss.dice_pooled(S, G))
    raise ValidationError(f'Unknown Dice variant {variant}; one of {DICE_VARIANTS}')


def consistency_loss(S, S_t) -> float:
    """Σ ||S - S_t||² / (2 N C)."""
    S = _tensor(S)
    S_t = _tensor(S_t)
    if S.ndim != 2:
        raise ShapeMismatch(f'Expected N x C arrays, got {tuple(S.shape)}')
    return float(tloss.consistency(S, S_t))
