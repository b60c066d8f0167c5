"""
models.py

Trained evidential classifiers as plain parameter containers, their
forward passes to mass functions, training entry points and JSON
persistence.
"""
from __future__ import absolute_import, annotations, division, print_function
from dataclasses import dataclass, field
import json
import logging
import os
from typing import Any, Optional, Union

import numpy as np
import torch

from evidential.classify.eknn import eknn_predict_batch
from evidential.classify.init import init_prototypes
from evidential.classify.pytorch.network import (
    EnnNetwork,
    RbfNetwork,
    as_tensor,
    enn_masses,
    rbf_masses,
    rbf_weights,
)
from evidential.classify.pytorch.trainer import Trainer, grab
from evidential.configs import EknnConfig, LearningRateConfig, TrainConfig
from evidential.core.frame import Frame
from evidential.core.mass import MassFunction, mass_from_assignments
from evidential.errors import (
    DimensionMismatch,
    ShapeMismatch,
    TotalConflict,
    ValidationError,
)
from evidential.loss.pytorch.loss import EvidentialLoss

log = logging.getLogger(__name__)

ROW_TOL = 1e-9


def _array(x, ndim: int, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != ndim:
        raise ShapeMismatch(f'{name} must be {ndim}-D, got shape {arr.shape}')
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f'{name} has non-finite entries')
    return arr


@dataclass
class EnnModel:
    prototypes: np.ndarray
    alpha: np.ndarray
    gamma: np.ndarray
    u: np.ndarray
    frame: Frame
    kind: str = field(default='enn', init=False)

    def __post_init__(self):
        self.prototypes = _array(self.prototypes, 2, 'prototypes')
        self.alpha = _array(self.alpha, 1, 'alpha')
        self.gamma = _array(self.gamma, 1, 'gamma')
        self.u = _array(self.u, 2, 'u')
        nproto = self.prototypes.shape[0]
        if (
                self.alpha.shape != (nproto,)
                or self.gamma.shape != (nproto,)
                or self.u.shape != (nproto, self.frame.size)
        ):
            raise ShapeMismatch(
                f'ENN with I={nproto}, C={self.frame.size}: got alpha '
                f'{self.alpha.shape}, gamma {self.gamma.shape}, u {self.u.shape}'
            )
        if np.any((self.alpha < 0) | (self.alpha > 1)):
            raise ValidationError('alpha must lie in [0, 1]')
        if np.any(self.gamma <= 0):
            raise ValidationError('gamma must be > 0')
        if np.any(self.u < 0) or np.any(np.abs(self.u.sum(1) - 1) > ROW_TOL):
            raise ValidationError('Rows of u must be nonnegative and sum to 1')

    @property
    def nprototypes(self) -> int:
        return self.prototypes.shape[0]

    @property
    def nfeatures(self) -> int:
        return self.prototypes.shape[1]

    @classmethod
    def from_network(cls, net: EnnNetwork, frame: Frame) -> EnnModel:
        return cls(
            prototypes=grab(net.prototypes),
            alpha=grab(net.alpha),
            gamma=grab(net.gamma),
            u=grab(net.u),
            frame=frame,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            'kind': self.kind,
            'frame': list(self.frame.labels),
            'prototypes': self.prototypes.tolist(),
            'alpha': self.alpha.tolist(),
            'gamma': self.gamma.tolist(),
            'u': self.u.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> EnnModel:
        return cls(
            prototypes=d['prototypes'],
            alpha=d['alpha'],
            gamma=d['gamma'],
            u=d['u'],
            frame=Frame(tuple(d['frame'])),
        )


@dataclass
class RbfModel:
    """Binary weights-of-evidence RBF classifier (frame of size 2)."""
    prototypes: np.ndarray
    gamma: np.ndarray
    v: np.ndarray
    frame: Frame = field(default_factory=lambda: Frame.indexed(2))
    kind: str = field(default='rbf', init=False)

    def __post_init__(self):
        self.prototypes = _array(self.prototypes, 2, 'prototypes')
        self.gamma = _array(self.gamma, 1, 'gamma')
        self.v = _array(self.v, 1, 'v')
        nproto = self.prototypes.shape[0]
        if self.gamma.shape != (nproto,) or self.v.shape != (nproto,):
            raise ShapeMismatch(
                f'RBF with I={nproto}: got gamma {self.gamma.shape}, '
                f'v {self.v.shape}'
            )
        if self.frame.size != 2:
            raise ValidationError('The RBF evidential model is binary (C = 2)')
        if np.any(self.gamma <= 0):
            raise ValidationError('gamma must be > 0')

    @property
    def nprototypes(self) -> int:
        return self.prototypes.shape[0]

    @property
    def nfeatures(self) -> int:
        return self.prototypes.shape[1]

    @classmethod
    def from_network(cls, net: RbfNetwork, frame: Optional[Frame] = None):
        return cls(
            prototypes=grab(net.prototypes),
            gamma=grab(net.gamma),
            v=grab(net.v),
            frame=Frame.indexed(2) if frame is None else frame,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            'kind': self.kind,
            'frame': list(self.frame.labels),
            'prototypes': self.prototypes.tolist(),
            'gamma': self.gamma.tolist(),
            'v': self.v.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> RbfModel:
        return cls(
            prototypes=d['prototypes'],
            gamma=d['gamma'],
            v=d['v'],
            frame=Frame(tuple(d['frame'])),
        )


@dataclass
class EknnModel:
    """EKNN keeps its training set; prediction is a neighbor search."""
    X: np.ndarray
    y: np.ndarray
    config: EknnConfig
    frame: Frame
    kind: str = field(default='eknn', init=False)

    def __post_init__(self):
        self.X = _array(self.X, 2, 'X')
        self.y = np.asarray(self.y, dtype=np.int64)
        if self.y.shape != (self.X.shape[0],):
            raise ShapeMismatch(f'{self.X.shape[0]} points, {self.y.shape} labels')
        if self.config.K > self.X.shape[0]:
            raise ValidationError(
                f'K = {self.config.K} exceeds training set size {self.X.shape[0]}'
            )

    @property
    def nfeatures(self) -> int:
        return self.X.shape[1]

    def to_dict(self) -> dict[str, Any]:
        return {
            'kind': self.kind,
            'frame': list(self.frame.labels),
            'X': self.X.tolist(),
            'y': self.y.tolist(),
            'config': self.config.asdict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> EknnModel:
        return cls(
            X=d['X'],
            y=d['y'],
            config=EknnConfig(**d['config']),
            frame=Frame(tuple(d['frame'])),
        )


Model = Union[EnnModel, RbfModel, EknnModel]
MODELS = {'enn': EnnModel, 'rbf': RbfModel, 'eknn': EknnModel}


def save_model(model: Model, fpath: os.PathLike) -> None:
    with open(fpath, 'w') as f:
        json.dump(model.to_dict(), f, indent=1)
        f.write('\n')


def load_model(fpath: os.PathLike) -> Model:
    with open(fpath, 'r') as f:
        doc = json.load(f)
    try:
        cls = MODELS[doc['kind']]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f'{fpath} is not a model document') from exc
    try:
        return cls.from_dict(doc)
    except KeyError as exc:
        raise ValidationError(f'{fpath}: missing field {exc}') from exc


def _inputs(model: Model, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2 or X.shape[1] != model.nfeatures:
        raise DimensionMismatch(
            f'Model expects {model.nfeatures} features, got shape {X.shape}'
        )
    return X


def rows_to_masses(frame: Frame, rows: np.ndarray) -> list[MassFunction]:
    """Singletons + Ω matrices (N x (C + 1)) to mass functions."""
    focal = frame.singletons() + [frame.omega]
    return [
        mass_from_assignments(frame, list(zip(focal, row.tolist())))
        for row in rows
    ]


def enn_forward_batch(model: EnnModel, X: np.ndarray) -> np.ndarray:
    """N x (C + 1) matrix of m({ω_1}), ..., m({ω_C}), m(Ω)."""
    X = _inputs(model, X)
    with torch.no_grad():
        out = enn_masses(
            as_tensor(X),
            as_tensor(model.prototypes),
            as_tensor(model.alpha),
            as_tensor(model.gamma),
            as_tensor(model.u),
        )
    out = grab(out)
    if not np.all(np.isfinite(out)):
        raise TotalConflict('Prototype evidence is in total conflict')
    return out


def enn_forward(model: EnnModel, x: np.ndarray) -> MassFunction:
    return rows_to_masses(model.frame, enn_forward_batch(model, x))[0]


def rbf_forward_batch(
        model: RbfModel,
        X: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """(N x 3 masses on {ω_1}, {ω_2}, Ω, N-vector p = sigmoid(Σ w_i))."""
    X = _inputs(model, X)
    with torch.no_grad():
        w = rbf_weights(
            as_tensor(X),
            as_tensor(model.prototypes),
            as_tensor(model.gamma),
            as_tensor(model.v),
        )
        masses = rbf_masses(w)
        p = torch.sigmoid(w.sum(dim=1))
    return grab(masses), grab(p)


def rbf_forward(model: RbfModel, x: np.ndarray) -> tuple[MassFunction, float]:
    masses, p = rbf_forward_batch(model, x)
    return rows_to_masses(model.frame, masses)[0], float(p[0])


def predict_masses(model: Model, X: np.ndarray) -> list[MassFunction]:
    if isinstance(model, EnnModel):
        return rows_to_masses(model.frame, enn_forward_batch(model, X))
    if isinstance(model, RbfModel):
        return rows_to_masses(model.frame, rbf_forward_batch(model, X)[0])
    return eknn_predict_batch(_inputs(model, X), model.X, model.y,
                              model.config, model.frame)


def _check_labeled(
        X: np.ndarray,
        y: np.ndarray,
        frame: Optional[Frame],
) -> tuple[np.ndarray, np.ndarray, Frame]:
    X = _array(X, 2, 'X')
    y = np.asarray(y)
    if y.shape != (X.shape[0],):
        raise ShapeMismatch(f'{X.shape[0]} points but labels of shape {y.shape}')
    if np.any(y < 0) or np.any(y != np.round(y)):
        raise ValidationError('Labels must be nonnegative integers')
    y = y.astype(np.int64)
    frame = Frame.indexed(int(y.max()) + 1) if frame is None else frame
    if int(y.max()) >= frame.size:
        raise ValidationError(f'Label {int(y.max())} outside frame {frame.labels}')
    return X, y, frame


def default_gamma(X: np.ndarray, prototypes: np.ndarray) -> float:
    """1 / mean squared distance from each point to its nearest prototype."""
    d2 = ((X[:, None, :] - prototypes[None, :, :]) ** 2).sum(-1).min(axis=1)
    msd = float(d2.mean())
    return 1.0 / msd if msd > 0 else 1.0


def _setup(
        X: np.ndarray,
        config: TrainConfig,
) -> tuple[np.ndarray, np.ndarray, torch.Generator]:
    prototypes = init_prototypes(X, config.nprototypes, config.init,
                                 config.seed)
    gamma = (
        default_gamma(X, prototypes) if config.gamma_init is None
        else config.gamma_init
    )
    gammas = np.full(config.nprototypes, gamma)
    generator = torch.Generator()
    if config.seed is None:
        generator.seed()
    else:
        generator.manual_seed(config.seed)
    return prototypes, gammas, generator


def _fit(
        net: torch.nn.Module,
        kind: str,
        X: np.ndarray,
        y: np.ndarray,
        config: TrainConfig,
        lr_config: Optional[LearningRateConfig],
        generator: torch.Generator,
        X_unlabeled: Optional[np.ndarray],
) -> dict:
    trainer = Trainer(net, EvidentialLoss(config, kind), config,
                      lr_config=lr_config, generator=generator)
    x_u = None if X_unlabeled is None else as_tensor(X_unlabeled)
    return trainer.train(as_tensor(X), torch.as_tensor(y), x_u)


def fit_enn(
        X: np.ndarray,
        y: np.ndarray,
        config: Optional[TrainConfig] = None,
        lr_config: Optional[LearningRateConfig] = None,
        frame: Optional[Frame] = None,
        X_unlabeled: Optional[np.ndarray] = None,
) -> tuple[EnnModel, dict]:
    """Train an ENN; returns the model and the trainer's summary."""
    config = TrainConfig() if config is None else config
    X, y, frame = _check_labeled(X, y, frame)
    if config.loss == 'dice' and frame.size != 2:
        raise ValidationError('The Dice objective needs a binary frame')
    if config.nprototypes < frame.size:
        log.warning(
            f'Only {config.nprototypes} prototypes for {frame.size} classes'
        )
    prototypes, gammas, generator = _setup(X, config)
    alphas = np.full(config.nprototypes, config.alpha_init)
    net = EnnNetwork(prototypes, frame.size, alpha=alphas, gamma=gammas,
                     generator=generator)
    info = _fit(net, 'enn', X, y, config, lr_config, generator, X_unlabeled)
    return EnnModel.from_network(net, frame), info


def enn_train(
        X: np.ndarray,
        y: np.ndarray,
        config: Optional[TrainConfig] = None,
        lr_config: Optional[LearningRateConfig] = None,
        frame: Optional[Frame] = None,
        X_unlabeled: Optional[np.ndarray] = None,
) -> EnnModel:
    return fit_enn(X, y, config, lr_config, frame, X_unlabeled)[0]


def fit_rbf(
        X: np.ndarray,
        y: np.ndarray,
        config: Optional[TrainConfig] = None,
        lr_config: Optional[LearningRateConfig] = None,
        frame: Optional[Frame] = None,
        X_unlabeled: Optional[np.ndarray] = None,
) -> tuple[RbfModel, dict]:
    """Train a binary RBF model; returns the model and trainer summary."""
    config = TrainConfig() if config is None else config
    frame = Frame.indexed(2) if frame is None else frame
    X, y, frame = _check_labeled(X, y, frame)
    if frame.size != 2:
        raise ValidationError('The RBF evidential model is binary (C = 2)')
    prototypes, gammas, generator = _setup(X, config)
    net = RbfNetwork(prototypes, gamma=gammas, generator=generator)
    info = _fit(net, 'rbf', X, y, config, lr_config, generator, X_unlabeled)
    return RbfModel.from_network(net, frame), info


def rbf_train(
        X: np.ndarray,
        y: np.ndarray,
        config: Optional[TrainConfig] = None,
        lr_config: Optional[LearningRateConfig] = None,
        frame: Optional[Frame] = None,
        X_unlabeled: Optional[np.ndarray] = None,
) -> RbfModel:
    return fit_rbf(X, y, config, lr_config, frame, X_unlabeled)[0]


def eknn_fit(
        X: np.ndarray,
        y: np.ndarray,
        config: Optional[EknnConfig] = None,
        frame: Optional[Frame] = None,
) -> EknnModel:
    config = EknnConfig() if config is None else config
    X, y, frame = _check_labeled(X, y, frame)
    return EknnModel(X=X, y=y, config=config, frame=frame)
