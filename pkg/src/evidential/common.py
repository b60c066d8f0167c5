"""
common.py

Contains helpers shared by the CLI commands: job directories, config
instantiation, CSV / document writers and rich table export.
"""
from __future__ import absolute_import, annotations, division, print_function
import logging
import os
from pathlib import Path
from typing import Any, Optional, Sequence

from hydra.utils import instantiate, to_absolute_path
import numpy as np
from omegaconf import DictConfig, OmegaConf
import pandas as pd
from rich.table import Table

from evidential.configs import ExperimentConfig
from evidential.core.io import save_masses
from evidential.core.mass import MassFunction
from evidential.errors import ValidationError
from evidential.utils.rich import console, export_table


log = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'


def experiment_config(cfg: DictConfig) -> ExperimentConfig:
    """Top-level keys of the composed config as an `ExperimentConfig`."""
    top = {
        k: v for k, v in OmegaConf.to_container(
            cfg, resolve=True, throw_on_missing=True
        ).items()
        if not isinstance(v, dict)
    }
    return ExperimentConfig.from_dict(top)


def group_config(cfg: DictConfig, group: str) -> Any:
    """Instantiate the dataclass named by `cfg.<group>._target_`."""
    if group not in cfg:
        raise ValidationError(f'Missing config group `{group}`')
    return instantiate(cfg[group], _convert_='all')


def input_path(fpath: Optional[str], what: str = 'data') -> Path:
    if fpath is None:
        raise ValidationError(f'`{what}` must point to an input file')
    path = Path(to_absolute_path(fpath))
    if not path.is_file():
        raise ValidationError(f'No such file for `{what}`: {path}')
    return path


def get_jobdir(outdir: os.PathLike, command: str) -> Path:
    jobdir = Path(outdir).joinpath(command)
    jobdir.mkdir(exist_ok=True, parents=True)
    return jobdir


def make_subdirs(basedir: os.PathLike) -> dict[str, Path]:
    dirs = {}
    for key in ['logs', 'data']:
        d = Path(basedir).joinpath(key)
        d.mkdir(exist_ok=True, parents=True)
        dirs[key] = d

    return dirs


def write_csv(df: pd.DataFrame, fpath: os.PathLike, **kwargs) -> Path:
    fpath = Path(fpath)
    fpath.parent.mkdir(exist_ok=True, parents=True)
    kwargs.setdefault('index', False)
    df.to_csv(fpath, float_format=FLOAT_FORMAT, **kwargs)
    log.info(f'Saved {fpath.as_posix()}')
    return fpath


def write_masses(
        fpath: os.PathLike,
        masses: Sequence[MassFunction],
        metas: Optional[Sequence[Optional[dict]]] = None,
) -> Path:
    fpath = Path(fpath)
    fpath.parent.mkdir(exist_ok=True, parents=True)
    save_masses(fpath, masses, metas)
    log.info(f'Saved {len(masses)} mass functions to {fpath.as_posix()}')
    return fpath


def save_tables(
        tables: dict[str, Table],
        logdir: os.PathLike,
        show: bool = True,
) -> list[Path]:
    """Print each table and export it to `logdir/tables/<name>.txt`."""
    tdir = Path(logdir).joinpath('tables')
    outfiles = []
    for name, table in tables.items():
        if show:
            console.print(table)
        fpath = tdir.joinpath(f'{name}.txt')
        export_table(table, fpath)
        outfiles.append(fpath)
    return outfiles


def seed_sequence(seed: int, n: int) -> list[int]:
    """`n` independent child seeds of `seed` (numpy SeedSequence spawning)."""
    children = np.random.SeedSequence(seed).spawn(n)
    return [int(c.generate_state(1)[0]) for c in children]
