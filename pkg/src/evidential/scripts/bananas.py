"""
bananas.py

λ sweep of the ENN and RBF classifiers on the two-banana problem.

Every (model, λ, seed) cell is trained independently. Cells sharing a seed
index see the same training / test / off-manifold samples and the same
initialization, so differences along λ come from λ alone.
"""
from __future__ import absolute_import, annotations, division, print_function
from dataclasses import replace
import logging
from typing import Optional

import joblib
import numpy as np
import pandas as pd
from scipy.stats import spearmanr
import torch
import xarray as xr

from evidential.classify.data import banana_data, off_manifold_blob
from evidential.classify.models import (
    EnnModel,
    enn_forward_batch,
    fit_enn,
    fit_rbf,
    rbf_forward_batch,
)
from evidential.classify.pytorch.network import as_tensor, masses_to_betp
from evidential.common import seed_sequence
from evidential.configs import (
    BananaConfig,
    LearningRateConfig,
    TrainConfig,
    list_to_str,
)

log = logging.getLogger(__name__)

MODELS = ('enn', 'rbf')
MASS_COLUMNS = ('w1', 'w2', 'omega')


def model_masses(model, X: np.ndarray) -> np.ndarray:
    """N x 3 masses on {ω_1}, {ω_2}, Ω."""
    if isinstance(model, EnnModel):
        return enn_forward_batch(model, X)
    return rbf_forward_batch(model, X)[0]


def _error(masses: np.ndarray, y: np.ndarray) -> float:
    betp = masses_to_betp(as_tensor(masses)).numpy()
    # ties go to class index 0
    pred = np.argmax(betp, axis=1)
    return float(np.mean(pred != y))


def banana_samples(
        bcfg: BananaConfig,
        train_seed: int,
        test_seed: int,
        off_seed: int,
) -> dict[str, np.ndarray]:
    X, y = banana_data(bcfg.ntrain, train_seed, bcfg.noise)
    Xt, yt = banana_data(bcfg.ntest, test_seed, bcfg.noise)
    Xo = off_manifold_blob(bcfg.noff, off_seed)
    return {'X': X, 'y': y, 'X_test': Xt, 'y_test': yt, 'X_off': Xo}


def train_banana_model(
        kind: str,
        lam: float,
        seed: int,
        bcfg: BananaConfig,
        tcfg: TrainConfig,
        lr_config: Optional[LearningRateConfig] = None,
):
    train_seed, test_seed, off_seed, init_seed = seed_sequence(seed, 4)
    samples = banana_samples(bcfg, train_seed, test_seed, off_seed)
    cfg = replace(tcfg, lam=float(lam), nprototypes=bcfg.nprototypes,
                  seed=init_seed, progress=False)
    fit = fit_enn if kind == 'enn' else fit_rbf
    model, info = fit(samples['X'], samples['y'], cfg, lr_config)
    return model, info, samples


def banana_cell(
        kind: str,
        lam: float,
        seed_idx: int,
        seed: int,
        bcfg: BananaConfig,
        tcfg: TrainConfig,
        lr_config: Optional[LearningRateConfig] = None,
) -> dict:
    torch.set_num_threads(1)
    model, info, samples = train_banana_model(kind, lam, seed, bcfg, tcfg,
                                              lr_config)
    m_train = model_masses(model, samples['X'])
    m_test = model_masses(model, samples['X_test'])
    m_off = model_masses(model, samples['X_off'])
    omega_train = float(m_train[:, -1].mean())
    omega_off = float(m_off[:, -1].mean())
    return {
        'model': kind,
        'lam': float(lam),
        'seed': seed_idx,
        'train_error': _error(m_train, samples['y']),
        'test_error': _error(m_test, samples['y_test']),
        'omega_train': omega_train,
        'omega_test': float(m_test[:, -1].mean()),
        'omega_off': omega_off,
        'off_ratio': omega_off / omega_train if omega_train > 0 else np.inf,
        'loss_init': info['loss_init'],
        'loss_final': info['loss_final'],
    }


def run_sweep(
        bcfg: BananaConfig,
        tcfg: TrainConfig,
        seed: int,
        lr_config: Optional[LearningRateConfig] = None,
) -> pd.DataFrame:
    seeds = seed_sequence(seed, bcfg.nseeds)
    cells = [
        (kind, lam, idx, s)
        for kind in MODELS
        for lam in bcfg.lambdas
        for idx, s in enumerate(seeds)
    ]
    log.info(
        f'Training {len(cells)} cells, λ = {list_to_str(bcfg.lambdas)}, '
        f'njobs={bcfg.njobs}'
    )
    rows = joblib.Parallel(n_jobs=bcfg.njobs)(
        joblib.delayed(banana_cell)(kind, lam, idx, s, bcfg, tcfg, lr_config)
        for kind, lam, idx, s in cells
    )
    return pd.DataFrame(rows)


def summarize_sweep(cells: pd.DataFrame) -> pd.DataFrame:
    cols = ['train_error', 'test_error', 'omega_train', 'omega_test',
            'omega_off', 'off_ratio']
    summary = (
        cells.groupby(['model', 'lam'], sort=True)[cols]
        .mean()
        .reset_index()
    )
    return summary


def rank_correlations(summary: pd.DataFrame) -> dict[str, float]:
    """Spearman correlation of mean test m(Ω) with λ, per model."""
    out = {}
    for kind, group in summary.groupby('model', sort=True):
        rho = spearmanr(group['lam'], group['omega_test'])[0]
        out[str(kind)] = float(rho)
    return out


def contour_grids(
        bcfg: BananaConfig,
        tcfg: TrainConfig,
        seed: int,
        lr_config: Optional[LearningRateConfig] = None,
) -> xr.DataArray:
    """Masses of both models over a grid_size x grid_size box at grid_lambda."""
    xmin, xmax, ymin, ymax = bcfg.grid_box
    xs = np.linspace(xmin, xmax, bcfg.grid_size)
    ys = np.linspace(ymin, ymax, bcfg.grid_size)
    xx, yy = np.meshgrid(xs, ys)
    points = np.stack([xx.ravel(), yy.ravel()], axis=1)
    first = seed_sequence(seed, bcfg.nseeds)[0]
    grids = []
    for kind in MODELS:
        torch.set_num_threads(1)
        model, _, _ = train_banana_model(kind, bcfg.grid_lambda, first,
                                         bcfg, tcfg, lr_config)
        masses = model_masses(model, points)
        grids.append(masses.reshape(bcfg.grid_size, bcfg.grid_size, 3))
    return xr.DataArray(
        np.stack(grids),
        dims=('model', 'y', 'x', 'mass'),
        coords={'model': list(MODELS), 'y': ys, 'x': xs,
                'mass': list(MASS_COLUMNS)},
        name='value',
    )


def grid_to_frame(grid: xr.DataArray) -> pd.DataFrame:
    df = grid.to_dataframe().reset_index()
    return df[['model', 'x', 'y', 'mass', 'value']]
