"""
configs.py

Implements the configuration objects built from the hydra YAML groups.
"""
from __future__ import absolute_import, annotations, division, print_function
from copy import deepcopy
from dataclasses import asdict, dataclass, field, fields
import json
import logging
import os
from pathlib import Path
from typing import Any, Optional

from evidential.errors import ValidationError


log = logging.getLogger(__name__)


HERE = Path(os.path.abspath(__file__)).parent
CONF_DIR = HERE.joinpath('conf')

CLASSIFIERS = ('enn', 'rbf', 'eknn')
OPTIMIZERS = ('gd', 'adam')
SCHEDULES = ('constant', 'poly', 'plateau')
BBA_METHODS = (
    'shafer', 'appriou1', 'appriou2', 'bfod', 'zhu', 'ratio_mv', 'gd'
)


def list_to_str(x: list) -> str:
    if isinstance(x[0], int):
        return '-'.join([str(int(i)) for i in x])
    elif isinstance(x[0], float):
        return '-'.join([f'{i:2.1g}' for i in x])
    else:
        return '-'.join([str(i) for i in x])


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise ValidationError(msg)


@dataclass
class BaseConfig:
    def asdict(self) -> dict:
        return asdict(self)

    def to_dict(self):
        return deepcopy(self.__dict__)

    def to_file(self, fpath: os.PathLike) -> None:
        with open(fpath, 'w') as f:
            json.dump(self.asdict(), f, indent=4)

    @classmethod
    def from_file(cls, fpath: os.PathLike):
        with open(fpath, 'r') as f:
            config = json.load(f)

        return cls(**config)

    @classmethod
    def from_dict(cls, d: dict):
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names})


@dataclass
class LearningRateConfig(BaseConfig):
    """Learning rate configuration object.

    `schedule` is one of:
      - 'constant': `lr_init` for every epoch
      - 'poly': `lr_init * (1 - epoch / epochs) ** 0.9`
      - 'plateau': multiply by `factor` when the loss has not improved by
        `min_delta` for `patience` epochs (then wait `cooldown` epochs)
    """
    lr_init: float = 1e-2
    schedule: str = 'constant'
    patience: int = 10
    cooldown: int = 0
    min_lr: float = 1e-6
    factor: float = 0.5
    min_delta: float = 1e-4
    clip_norm: float = 0.0

    def __post_init__(self):
        _check(self.lr_init > 0, f'lr_init must be > 0, got {self.lr_init}')
        _check(self.schedule in SCHEDULES,
               f'schedule must be one of {SCHEDULES}, got {self.schedule}')
        _check(0 < self.factor < 1, f'factor must be in (0, 1): {self.factor}')
        _check(self.patience >= 0, 'patience must be >= 0')
        _check(self.clip_norm >= 0, 'clip_norm must be >= 0')

    def to_str(self):
        return f'lr-{self.lr_init:3.2g}'


@dataclass
class TrainConfig(BaseConfig):
    """Training options for the ENN and RBF evidential classifiers.

    `loss='default'` trains ENN on the regularized sum of squares and RBF on
    the regularized cross-entropy; `loss='dice'` swaps the data term for the
    soft Dice loss on the pignistic probability of class index 1 (C = 2).
    """
    nprototypes: int = 6
    lam: float = 1e-3
    epochs: int = 500
    optimizer: str = 'adam'
    init: str = 'kmeans'
    loss: str = 'default'
    seed: Optional[int] = None
    alpha_init: float = 0.5
    gamma_init: Optional[float] = None
    consistency_weight: float = 0.0
    noise_std: float = 0.05
    max_halvings: int = 30
    progress: bool = False

    def __post_init__(self):
        _check(self.lam >= 0, f'lambda must be >= 0, got {self.lam}')
        _check(self.epochs >= 1, f'epochs must be >= 1, got {self.epochs}')
        _check(self.nprototypes >= 1, 'nprototypes must be >= 1')
        _check(self.optimizer in OPTIMIZERS,
               f'optimizer must be one of {OPTIMIZERS}')
        _check(self.init in ('random', 'kmeans'),
               f'init must be random or kmeans, got {self.init}')
        _check(self.loss in ('default', 'dice'),
               f'loss must be default or dice, got {self.loss}')
        _check(0.0 < self.alpha_init < 1.0, 'alpha_init must be in (0, 1)')
        _check(self.gamma_init is None or self.gamma_init > 0,
               'gamma_init must be > 0')
        _check(self.consistency_weight >= 0, 'consistency_weight must be >= 0')
        _check(self.noise_std >= 0, 'noise_std must be >= 0')

    def to_str(self) -> str:
        return f'I-{self.nprototypes}_lam-{self.lam:3.2g}_{self.optimizer}'


@dataclass
class EknnConfig(BaseConfig):
    """Evidential k-NN options.

    `gamma` is either one shared scale, one scale per class, or None to fit
    a shared scale from the training set.
    """
    K: int = 5
    alpha: float = 0.95
    gamma: Optional[Any] = None

    def __post_init__(self):
        _check(self.K >= 1, f'K must be >= 1, got {self.K}')
        _check(0.0 < self.alpha < 1.0, f'alpha must be in (0, 1): {self.alpha}')
        if self.gamma is not None:
            if isinstance(self.gamma, (list, tuple)):
                self.gamma = [float(g) for g in self.gamma]
                _check(all(g > 0 for g in self.gamma), 'gamma must be > 0')
            else:
                self.gamma = float(self.gamma)
                _check(self.gamma > 0, 'gamma must be > 0')


@dataclass
class EcmConfig(BaseConfig):
    nclusters: int = 3
    alpha: float = 1.0
    beta: float = 2.0
    delta: float = 10.0
    max_iter: int = 300
    tol: float = 1e-6
    pairs: bool = True
    seed: Optional[int] = None

    def __post_init__(self):
        _check(self.nclusters >= 1, 'nclusters must be >= 1')
        _check(self.beta > 1, f'beta must be > 1, got {self.beta}')
        _check(self.delta > 0, f'delta must be > 0, got {self.delta}')
        _check(self.max_iter >= 1, 'max_iter must be >= 1')
        _check(self.tol > 0, 'tol must be > 0')


@dataclass
class FcmConfig(BaseConfig):
    nclusters: int = 2
    m: float = 2.0
    max_iter: int = 300
    tol: float = 1e-6
    seed: Optional[int] = None
    check_monotone: bool = False

    def __post_init__(self):
        _check(self.nclusters >= 1, 'nclusters must be >= 1')
        _check(self.m > 1, f'fuzzifier m must be > 1, got {self.m}')
        _check(self.max_iter >= 1, 'max_iter must be >= 1')
        _check(self.tol > 0, 'tol must be > 0')


@dataclass
class BananaConfig(BaseConfig):
    lambdas: list[float] = field(
        default_factory=lambda: [1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0]
    )
    nseeds: int = 5
    ntrain: int = 300
    ntest: int = 1000
    noise: float = 0.15
    nprototypes: int = 6
    noff: int = 200
    grid_size: int = 100
    grid_lambda: float = 1e-3
    grid_box: list[float] = field(
        default_factory=lambda: [-1.5, 3.5, -1.5, 2.5]
    )
    njobs: int = 1

    def __post_init__(self):
        self.lambdas = [float(x) for x in self.lambdas]
        self.grid_box = [float(x) for x in self.grid_box]
        _check(len(self.lambdas) >= 1, 'lambda grid is empty')
        _check(all(x >= 0 for x in self.lambdas), 'lambdas must be >= 0')
        _check(self.nseeds >= 1, 'nseeds must be >= 1')
        _check(self.ntrain >= 2 and self.ntest >= 1, 'invalid set sizes')
        _check(self.grid_size >= 2, 'grid_size must be >= 2')
        _check(len(self.grid_box) == 4, 'grid_box is [xmin, xmax, ymin, ymax]')
        xmin, xmax, ymin, ymax = self.grid_box
        _check(xmin < xmax and ymin < ymax, f'empty grid box {self.grid_box}')
        _check(self.noise >= 0, 'noise must be >= 0')


@dataclass
class FusionConfig(BaseConfig):
    """Contextual-discount fusion of contour predictions.

    `sources` are CSV files of per-object contour values (one column per
    class); `beta` is a source x class reliability table, or `fit=True`
    learns it from `labels`.
    """
    sources: list[str] = field(default_factory=list)
    names: Optional[list[str]] = None
    beta: Optional[str] = None
    labels: Optional[str] = None
    fit: bool = False
    epochs: int = 300
    lr: float = 0.1
    init: float = 0.5

    def __post_init__(self):
        self.sources = [str(s) for s in self.sources]
        if self.names is not None:
            self.names = [str(s) for s in self.names]
        _check(self.epochs >= 1, 'epochs must be >= 1')
        _check(self.lr > 0, 'lr must be > 0')
        _check(0.0 <= self.init <= 1.0, f'init must be in [0, 1]: {self.init}')


@dataclass
class BbaConfig(BaseConfig):
    """Options for turning rows of numbers into mass functions.

    Row layout per method:
      - shafer: one likelihood per class
      - appriou1 / appriou2: one likelihood per class; `hypothesis` picks c
      - bfod: a single raw value passed through the `cf` generator
      - zhu / ratio_mv: two membership values
      - gd: a single feature value scored against `means` / `variances`
    """
    method: str = 'shafer'
    hypothesis: int = 0
    reliability: float = 1.0
    cf: str = 'identity'
    A: float = 0.3
    B: float = 0.9
    midpoint: float = 0.5
    slope: float = 10.0
    center: float = 1.0
    width: float = 0.25
    eps: float = 0.1
    rmv_alpha: float = 1.5
    rmv_beta: float = 3.0
    means: list[float] = field(default_factory=list)
    variances: list[float] = field(default_factory=list)
    pairs: bool = False
    labels: Optional[list[str]] = None

    def __post_init__(self):
        self.method = self.method.replace('-', '_')
        _check(self.method in BBA_METHODS,
               f'unknown method {self.method}; one of {BBA_METHODS}')
        _check(self.cf in ('identity', 'sigmoid', 'gaussian'),
               f'unknown cf generator {self.cf}')
        self.means = [float(x) for x in self.means]
        self.variances = [float(x) for x in self.variances]
        if self.labels is not None:
            self.labels = [str(x) for x in self.labels]


@dataclass
class MetricsConfig(BaseConfig):
    positive_class: int = 1
    nbins: int = 10

    def __post_init__(self):
        _check(self.nbins >= 1, 'nbins must be >= 1')
        _check(self.positive_class >= 0, 'positive_class must be >= 0')


@dataclass
class ExperimentConfig(BaseConfig):
    command: str
    seed: Optional[int] = None
    outdir: str = 'outputs'
    data: Optional[str] = None
    model: Optional[str] = None
    classifier: str = 'enn'
    delimiter: str = ','
    has_labels: bool = True
    print_config: bool = False

    def __post_init__(self):
        _check(self.classifier in CLASSIFIERS,
               f'classifier must be one of {CLASSIFIERS}')
        if self.seed is not None:
            self.seed = int(self.seed)
            _check(self.seed >= 0, f'seed must be >= 0, got {self.seed}')

    def require_seed(self) -> int:
        if self.seed is None:
            raise ValidationError(
                f'`{self.command}` is stochastic: pass seed=<N>'
            )
        return self.seed
