"""
conftest.py

Shared fixtures: synthetic datasets and a hydra config composer.
"""
from __future__ import absolute_import, annotations, division, print_function
from typing import Callable, Sequence

from hydra import compose, initialize_config_module
import numpy as np
from omegaconf import DictConfig
import pytest

from evidential.classify.data import two_blobs


THREE_CENTERS = np.array([[0.0, 0.0], [6.0, 0.0], [3.0, 5.0]])


def make_three_blobs(
        n_per: int = 50,
        std: float = 0.5,
        seed: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    y = np.repeat(np.arange(3), n_per)
    X = THREE_CENTERS[y] + std * rng.standard_normal((y.size, 2))
    return X, y


@pytest.fixture
def three_blobs() -> tuple[np.ndarray, np.ndarray]:
    return make_three_blobs()


@pytest.fixture
def blobs() -> tuple[np.ndarray, np.ndarray]:
    """Two linearly separable blobs, 40 points."""
    return two_blobs(40, seed=0)


@pytest.fixture
def make_cfg(tmp_path) -> Callable[..., DictConfig]:
    """Compose the packaged config with `outdir` pointing at tmp_path."""
    def _compose(overrides: Sequence[str] = ()) -> DictConfig:
        with initialize_config_module(
                config_module='evidential.conf',
                version_base=None,
        ):
            return compose(
                config_name='config',
                overrides=[f'outdir={tmp_path.as_posix()}', *overrides],
            )
    return _compose
