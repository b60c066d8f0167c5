"""
trainer.py

Implements full-batch training of the prototype-based evidential networks.
"""
from __future__ import absolute_import, annotations, division, print_function
from contextlib import nullcontext
import copy
import logging
import math
from typing import Optional

import numpy as np
import torch
from torch import optim

from evidential.configs import LearningRateConfig, TrainConfig
from evidential.errors import NonFiniteLoss
from evidential.learning_rate.pytorch.learning_rate import (
    LearningRateScheduler,
    get_lr,
    set_lr,
)
from evidential.loss.pytorch.loss import EvidentialLoss
from evidential.utils.history import BaseHistory, summarize_dict
from evidential.utils.rich import build_progress


log = logging.getLogger(__name__)

Tensor = torch.Tensor
Module = torch.nn.modules.Module


def grab(x: Tensor) -> np.ndarray:
    return x.detach().cpu().numpy()


def build_optimizer(
        net: Module,
        name: str,
        lr: float,
) -> optim.Optimizer:
    if name == 'adam':
        return optim.Adam(net.parameters(), lr=lr)
    return optim.SGD(net.parameters(), lr=lr)


class Trainer:
    """Full-batch optimizer loop with best-state tracking.

    With `optimizer='gd'` a step that increases the loss is undone and
    retried with half the learning rate (at most `max_halvings` times).
    The network is left holding the parameters with the lowest loss seen,
    so the returned loss never exceeds the initial one.
    """
    def __init__(
            self,
            net: Module,
            loss_fn: EvidentialLoss,
            config: TrainConfig,
            lr_config: Optional[LearningRateConfig] = None,
            generator: Optional[torch.Generator] = None,
    ) -> None:
        self.net = net
        self.loss_fn = loss_fn
        self.config = config
        self.lr_config = LearningRateConfig() if lr_config is None else lr_config
        self.clip_norm = self.lr_config.clip_norm
        self.generator = generator
        self.optimizer = build_optimizer(net, config.optimizer,
                                         self.lr_config.lr_init)
        self.scheduler = LearningRateScheduler(self.lr_config, config.epochs)
        self.history = BaseHistory()

    def draw_noise(self, x_unlabeled: Optional[Tensor]) -> Optional[Tensor]:
        if x_unlabeled is None or self.config.consistency_weight <= 0:
            return None
        return self.config.noise_std * torch.randn(
            x_unlabeled.shape, generator=self.generator, dtype=x_unlabeled.dtype
        )

    def evaluate(
            self,
            x: Tensor,
            y: Tensor,
            x_unlabeled: Optional[Tensor] = None,
            noise: Optional[Tensor] = None,
    ) -> float:
        with torch.no_grad():
            loss, _ = self.loss_fn(self.net, x, y, x_unlabeled, noise)
        return float(loss)

    def check_finite(self, loss: float, epoch: int) -> None:
        if not math.isfinite(loss):
            raise NonFiniteLoss(
                f'Loss became {loss} at epoch {epoch} '
                f'(lr = {get_lr(self.optimizer):.3g})'
            )

    def _halve_until_decrease(
            self,
            state: dict,
            loss_before: float,
            inputs: tuple,
    ) -> float:
        loss_after = self.evaluate(*inputs)
        halvings = 0
        while (
                not loss_after <= loss_before
                and halvings < self.config.max_halvings
        ):
            halvings += 1
            self.net.load_state_dict(state)
            lr = get_lr(self.optimizer) / 2.0
            set_lr(self.optimizer, lr)
            self._step(*inputs)
            loss_after = self.evaluate(*inputs)
        if halvings:
            log.debug(f'Step halved {halvings} time(s), lr = '
                      f'{get_lr(self.optimizer):.3g}')
        if not loss_after <= loss_before:
            self.net.load_state_dict(state)
            loss_after = loss_before
        return loss_after

    def _step(self, x, y, x_unlabeled=None, noise=None) -> Tensor:
        self.optimizer.zero_grad()
        loss, _ = self.loss_fn(self.net, x, y, x_unlabeled, noise)
        loss.backward()
        if self.clip_norm > 0:
            torch.nn.utils.clip_grad_norm_(self.net.parameters(),
                                           max_norm=self.clip_norm)
        self.optimizer.step()
        return loss

    def train_step(
            self,
            x: Tensor,
            y: Tensor,
            x_unlabeled: Optional[Tensor] = None,
    ) -> dict:
        noise = self.draw_noise(x_unlabeled)
        inputs = (x, y, x_unlabeled, noise)
        self.optimizer.zero_grad()
        loss, metrics = self.loss_fn(self.net, *inputs)
        loss_before = loss.detach().item()
        state = copy.deepcopy(self.net.state_dict())
        loss.backward()
        if self.clip_norm > 0:
            torch.nn.utils.clip_grad_norm_(self.net.parameters(),
                                           max_norm=self.clip_norm)
        self.optimizer.step()
        if self.config.optimizer == 'gd':
            self._halve_until_decrease(state, loss_before, inputs)
        metrics = {k: float(v) for k, v in metrics.items()}
        metrics['lr'] = get_lr(self.optimizer)
        return metrics

    def train(
            self,
            x: Tensor,
            y: Tensor,
            x_unlabeled: Optional[Tensor] = None,
    ) -> dict:
        loss_init = self.evaluate(x, y)
        self.check_finite(loss_init, 0)
        best_loss = loss_init
        best_state = copy.deepcopy(self.net.state_dict())
        progress = build_progress() if self.config.progress else None
        nprint = max(1, self.config.epochs // 10)
        with (progress if progress is not None else nullcontext()):
            task = (
                progress.add_task('[cyan]Train', total=self.config.epochs)
                if progress is not None else None
            )
            for epoch in range(self.config.epochs):
                metrics = self.train_step(x, y, x_unlabeled)
                loss = self.evaluate(x, y)
                self.check_finite(loss, epoch)
                if loss < best_loss:
                    best_loss = loss
                    best_state = copy.deepcopy(self.net.state_dict())
                avgs = self.history.update({'epoch': epoch, **metrics})
                self.scheduler.step(epoch, loss, self.optimizer)
                if progress is not None and task is not None:
                    progress.advance(task)
                if epoch % nprint == 0:
                    log.debug(summarize_dict(avgs))

        self.net.load_state_dict(best_state)
        loss_final = self.evaluate(x, y)
        log.info(
            f'[{self.config.to_str()}, {self.lr_config.to_str()}] '
            f'training loss {loss_init:.6g} -> {loss_final:.6g}'
        )
        return {
            'history': self.history,
            'loss_init': loss_init,
            'loss_final': loss_final,
        }
