"""
learning_rate.py

Learning rate control for the gradient-trained evidential models:

  - `lr_schedule`: polynomial decay `lr0 * (1 - e / Ne) ** 0.9`
  - `ReduceLROnPlateau`: shrink the rate when the loss stops improving
  - `LearningRateScheduler`: picks one of the above from a
    `LearningRateConfig` and applies it to a torch optimizer
"""
from __future__ import absolute_import, annotations, division, print_function
import logging

import numpy as np
from torch import optim

from evidential.configs import LearningRateConfig
from evidential.errors import ValidationError

log = logging.getLogger(__name__)

POLY_POWER = 0.9


def lr_schedule(lr0: float, epoch: int, nepochs: int) -> float:
    if nepochs <= 0:
        raise ValidationError(f'Number of epochs must be > 0, got {nepochs}')
    if not 0 <= epoch <= nepochs:
        raise ValidationError(f'Epoch {epoch} outside [0, {nepochs}]')
    return lr0 * (1.0 - epoch / nepochs) ** POLY_POWER


def get_lr(optimizer: optim.Optimizer) -> float:
    return float(optimizer.param_groups[0]['lr'])


def set_lr(optimizer: optim.Optimizer, lr: float) -> None:
    for group in optimizer.param_groups:
        group['lr'] = lr


class ReduceLROnPlateau:
    """Reduce learning rate when the loss has stopped improving.

    If no improvement larger than `min_delta` is seen for `patience`
    epochs, the learning rate is multiplied by `factor` (never below
    `min_lr`), then nothing happens for `cooldown` epochs.
    """
    def __init__(self, lr_config: LearningRateConfig):
        self.cfg = lr_config
        self.factor = self.cfg.factor
        self.patience = self.cfg.patience
        self.min_delta = self.cfg.min_delta
        self.cooldown = self.cfg.cooldown
        self.min_lr = self.cfg.min_lr
        self._reset()

    def _reset(self):
        self.best = np.inf
        self.wait = 0
        self.cooldown_counter = 0

    def in_cooldown(self) -> bool:
        return self.cooldown_counter > 0

    def step(self, epoch: int, loss: float, optimizer: optim.Optimizer):
        if self.in_cooldown():
            self.cooldown_counter -= 1
            self.wait = 0
        if loss < self.best - self.min_delta:
            self.best = loss
            self.wait = 0
        elif not self.in_cooldown():
            self.wait += 1
            if self.wait >= self.patience:
                old_lr = get_lr(optimizer)
                if old_lr > self.min_lr:
                    new_lr = max(old_lr * self.factor, self.min_lr)
                    set_lr(optimizer, new_lr)
                    log.debug(
                        f'ReduceLROnPlateau (epoch {epoch}): '
                        f'lr {old_lr:.3g} -> {new_lr:.3g}'
                    )
                self.cooldown_counter = self.cooldown
                self.wait = 0


class LearningRateScheduler:
    def __init__(self, lr_config: LearningRateConfig, nepochs: int):
        self.cfg = lr_config
        self.nepochs = nepochs
        self.plateau = (
            ReduceLROnPlateau(lr_config)
            if lr_config.schedule == 'plateau' else None
        )

    def step(self, epoch: int, loss: float, optimizer: optim.Optimizer):
        """Called after epoch `epoch` (0-based) with that epoch's loss."""
        if self.cfg.schedule == 'poly':
            set_lr(optimizer, lr_schedule(self.cfg.lr_init, epoch + 1,
                                          self.nepochs))
        elif self.plateau is not None:
            self.plateau.step(epoch, loss, optimizer)
