"""
history.py

Contains implementation of History object for tracking per-epoch metrics.
"""
from __future__ import absolute_import, annotations, division, print_function
import logging
import os
from typing import Any

import numpy as np
import pandas as pd
import xarray as xr


log = logging.getLogger(__name__)


def summarize_dict(d: dict) -> str:
    return ', '.join([f'{k}={v:<3.4g}' for k, v in d.items()])


class BaseHistory:
    def __init__(self):
        self.history: dict[str, list] = {}

    def _update(self, key: str, val: Any) -> float:
        if val is None:
            raise ValueError(f'None encountered: {key}: {val}')

        if hasattr(val, 'detach'):
            val = val.detach().cpu().numpy()

        val = np.asarray(val, dtype=np.float64)
        try:
            self.history[key].append(val)
        except KeyError:
            self.history[key] = [val]

        return float(val.mean())

    def update(self, metrics: dict) -> dict:
        return {key: self._update(key, val) for key, val in metrics.items()}

    def __len__(self) -> int:
        return max((len(v) for v in self.history.values()), default=0)

    def last(self, key: str) -> float:
        return float(np.mean(self.history[key][-1]))

    def to_DataArray(self, key: str) -> xr.DataArray:
        arr = np.stack(self.history[key])
        dims = ['epoch'] + [f'{key}_dim{i}' for i in range(1, arr.ndim)]
        return xr.DataArray(arr, dims=dims, coords={'epoch': np.arange(len(arr))})

    def get_dataset(self) -> xr.Dataset:
        data_vars = {}
        for key in self.history:
            try:
                data_vars[key.replace('/', '_')] = self.to_DataArray(key)
            except ValueError:
                log.error(f'Unable to create DataArray for {key}! Skipping!')
        return xr.Dataset(data_vars)

    def to_dataframe(self) -> pd.DataFrame:
        scalars = {
            k: [float(np.mean(v)) for v in vals]
            for k, vals in self.history.items()
        }
        return pd.DataFrame(scalars)

    def save(self, fpath: os.PathLike) -> None:
        self.to_dataframe().to_csv(fpath, index=False, float_format='%.17g')
