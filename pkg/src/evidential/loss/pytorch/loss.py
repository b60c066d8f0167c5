"""
loss.py

Contains pytorch implementations of the loss functions used to train the
evidential classifiers and to fit source reliabilities.
"""
from __future__ import absolute_import, annotations, division, print_function
from typing import Optional

import torch
import torch.nn.functional as F

from evidential.configs import TrainConfig
from evidential.errors import ShapeMismatch

Tensor = torch.Tensor


def _same_shape(a: Tensor, b: Tensor) -> None:
    if a.shape != b.shape:
        raise ShapeMismatch(f'Shapes differ: {tuple(a.shape)} vs {tuple(b.shape)}')


def sum_of_squares(betp: Tensor, target: Tensor) -> Tensor:
    """Mean over instances of Σ_c (p_nc - y_nc)²."""
    _same_shape(betp, target)
    return ((betp - target) ** 2).sum(dim=1).mean()


def cross_entropy(logits: Tensor, target: Tensor) -> Tensor:
    """Mean binary cross-entropy of p = sigmoid(logits) against 0/1 targets."""
    _same_shape(logits, target)
    return F.binary_cross_entropy_with_logits(logits, target)


def dice_binary(S: Tensor, G: Tensor) -> Tensor:
    """1 - 2 Σ S G / (Σ S + Σ G); zero when S and G are both all zero."""
    _same_shape(S, G)
    denom = S.sum() + G.sum()
    if denom.item() == 0.0:
        return torch.zeros((), dtype=S.dtype)
    return 1.0 - 2.0 * (S * G).sum() / denom


def dice_class_sum(S: Tensor, G: Tensor) -> Tensor:
    """Σ_c (1 - 2 Σ_n S_cn G_cn / (Σ_n S_cn + Σ_n G_cn)).

    A class absent from both S and G contributes 0.
    """
    _same_shape(S, G)
    denom = S.sum(dim=0) + G.sum(dim=0)
    present = denom > 0
    ratio = 2.0 * (S * G).sum(dim=0)[present] / denom[present]
    return (1.0 - ratio).sum()


def dice_pooled(S: Tensor, G: Tensor) -> Tensor:
    """1 - 2 Σ_c Σ_n S_cn G_cn / Σ_c Σ_n (S_cn + G_cn)."""
    return dice_binary(S, G)


def consistency(S: Tensor, S_t: Tensor) -> Tensor:
    """Σ ||S - S_t||² / (2 N C)."""
    _same_shape(S, S_t)
    nobj, ncls = S.shape
    return ((S - S_t) ** 2).sum() / (2.0 * nobj * ncls)


class EvidentialLoss:
    """Training objective for `EnnNetwork` / `RbfNetwork`.

    loss = data term + λ penalty [+ w_cons consistency], where the data term
    is the sum of squares (ENN), the cross-entropy (RBF) or the binary Dice
    loss on the pignistic probability of class index 1 (`loss='dice'`).
    """
    def __init__(
            self,
            config: TrainConfig,
            kind: str,
    ):
        self.config = config
        self.kind = kind

    def __call__(
            self,
            net: torch.nn.Module,
            x: Tensor,
            y: Tensor,
            x_unlabeled: Optional[Tensor] = None,
            noise: Optional[Tensor] = None,
    ) -> tuple[Tensor, dict[str, Tensor]]:
        return self.calc_loss(net, x, y, x_unlabeled, noise)

    def data_term(self, net, x: Tensor, y: Tensor) -> Tensor:
        if self.config.loss == 'dice':
            return dice_binary(net.betp(x)[:, 1], (y == 1).to(x.dtype))
        if self.kind == 'rbf':
            return cross_entropy(net.logits(x), (y == 0).to(x.dtype))
        target = F.one_hot(y, num_classes=net.nclasses).to(x.dtype)
        return sum_of_squares(net.betp(x), target)

    def penalty(self, net, x: Tensor) -> Tensor:
        if self.kind == 'rbf' and self.config.loss != 'dice':
            return net.penalty(x)
        return net.penalty()

    def calc_loss(
            self,
            net: torch.nn.Module,
            x: Tensor,
            y: Tensor,
            x_unlabeled: Optional[Tensor] = None,
            noise: Optional[Tensor] = None,
    ) -> tuple[Tensor, dict[str, Tensor]]:
        data = self.data_term(net, x, y)
        reg = self.penalty(net, x)
        loss = data + self.config.lam * reg
        metrics = {'data': data.detach(), 'penalty': reg.detach()}
        if (
                self.config.consistency_weight > 0
                and x_unlabeled is not None
                and noise is not None
        ):
            target = net.betp(x_unlabeled).detach()
            cons = consistency(net.betp(x_unlabeled + noise), target)
            loss = loss + self.config.consistency_weight * cons
            metrics['consistency'] = cons.detach()
        metrics['loss'] = loss.detach()
        return loss, metrics
