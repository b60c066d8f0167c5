"""
reliability.py

Learns per-source, per-class reliabilities β by minimizing the pooled Dice
loss between the fused (contextually discounted) contours and the labels.

β = sigmoid(θ) keeps every reliability inside [0, 1].
"""
from __future__ import absolute_import, annotations, division, print_function
import copy
import logging
import math
from typing import Optional, Sequence, Union

import numpy as np
import torch
import torch.nn.functional as F
from torch import nn, optim

from evidential.configs import FusionConfig
from evidential.errors import NonFiniteLoss, ShapeMismatch, ValidationError
from evidential.loss.pytorch.loss import dice_pooled
from evidential.utils.history import BaseHistory, summarize_dict

log = logging.getLogger(__name__)

Tensor = torch.Tensor
DTYPE = torch.float64
INIT_CLIP = 1e-6


def fuse_contours(pl: Tensor, beta: Tensor) -> Tensor:
    """T x N x C contours, T x C reliabilities -> N x C fused probabilities."""
    disc = 1.0 - beta[:, None, :] + beta[:, None, :] * pl
    prod = disc.prod(dim=0)
    return prod / prod.sum(dim=1, keepdim=True)


class SourceReliability(nn.Module):
    def __init__(self, init: np.ndarray):
        super().__init__()
        init = np.clip(np.asarray(init, dtype=np.float64),
                       INIT_CLIP, 1.0 - INIT_CLIP)
        self.theta = nn.Parameter(torch.logit(torch.as_tensor(init, dtype=DTYPE)))

    @property
    def beta(self) -> Tensor:
        return torch.sigmoid(self.theta)

    def forward(self, pl: Tensor) -> Tensor:
        return fuse_contours(pl, self.beta)


def _stack_sources(
        sources: Union[np.ndarray, Sequence[np.ndarray]],
) -> np.ndarray:
    pls = np.stack([np.asarray(s, dtype=np.float64) for s in sources])
    if pls.ndim != 3:
        raise ShapeMismatch(
            f'Expected T sources of N x C contours, got shape {pls.shape}'
        )
    if np.any((pls < 0) | (pls > 1)):
        raise ValidationError('Contour values must lie in [0, 1]')
    return pls


def fit_reliability(
        sources: Union[np.ndarray, Sequence[np.ndarray]],
        labels: np.ndarray,
        config: Optional[FusionConfig] = None,
        init: Optional[np.ndarray] = None,
) -> tuple[np.ndarray, dict]:
    """Fit a T x C reliability matrix with Adam on the Dice loss.

    Returns the reliabilities with the lowest loss seen (so the final loss
    never exceeds the initial one) and a summary with the loss history.
    """
    config = FusionConfig() if config is None else config
    pls = _stack_sources(sources)
    nsources, nobj, ncls = pls.shape
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape != (nobj,):
        raise ShapeMismatch(f'{nobj} objects but labels of shape {labels.shape}')
    if nobj == 0:
        raise ValidationError('Need at least one labeled object')
    if labels.min() < 0 or labels.max() >= ncls:
        raise ValidationError(f'Labels must lie in [0, {ncls})')
    init = (
        np.full((nsources, ncls), config.init) if init is None
        else np.asarray(init, dtype=np.float64)
    )
    if init.shape != (nsources, ncls):
        raise ShapeMismatch(f'init must be {nsources} x {ncls}, got {init.shape}')

    model = SourceReliability(init)
    optimizer = optim.Adam(model.parameters(), lr=config.lr)
    x = torch.as_tensor(pls, dtype=DTYPE)
    target = F.one_hot(torch.as_tensor(labels), num_classes=ncls).to(DTYPE)

    def closure() -> Tensor:
        return dice_pooled(model(x), target)

    with torch.no_grad():
        loss_init = float(closure())
    if not math.isfinite(loss_init):
        raise NonFiniteLoss(f'Initial fusion loss is {loss_init}')
    best_loss = loss_init
    best_state = copy.deepcopy(model.state_dict())
    history = BaseHistory()
    nprint = max(1, config.epochs // 10)
    for epoch in range(config.epochs):
        optimizer.zero_grad()
        loss = closure()
        value = loss.detach().item()
        if not math.isfinite(value):
            raise NonFiniteLoss(f'Fusion loss became {value} at epoch {epoch}')
        if value < best_loss:
            best_loss = value
            best_state = copy.deepcopy(model.state_dict())
        loss.backward()
        optimizer.step()
        avgs = history.update({'epoch': epoch, 'loss': value})
        if epoch % nprint == 0:
            log.debug(summarize_dict(avgs))

    with torch.no_grad():
        final = float(closure())
    if final < best_loss:
        best_loss = final
        best_state = copy.deepcopy(model.state_dict())
    model.load_state_dict(best_state)
    betas = model.beta.detach().cpu().numpy()
    log.info(f'Fusion loss {loss_init:.6g} -> {best_loss:.6g}')
    return betas, {
        'history': history,
        'loss_init': loss_init,
        'loss_final': best_loss,
    }
