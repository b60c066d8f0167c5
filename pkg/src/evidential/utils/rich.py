"""
rich.py

Contains utils for console tables and progress bars using Rich
"""
from __future__ import absolute_import, annotations, division, print_function
import io
import os
from pathlib import Path
from typing import Optional

from omegaconf import DictConfig, OmegaConf
import pandas as pd
import rich
from rich import box
from rich.console import Console
from rich.progress import (
    BarColumn,
    Progress,
    SpinnerColumn,
    TextColumn,
    TimeElapsedColumn,
    TimeRemainingColumn,
)
import rich.syntax
from rich.table import Table
import rich.tree

WIDTH = max(120, int(os.environ.get('COLUMNS', 120)))

STYLES = {
    'loss': 'green',
    'lr': 'red',
    'mass': 'cyan',
    'fraction': 'magenta',
    'value': 'green',
}

console = Console(record=False,
                  log_path=False,
                  width=WIDTH)


def build_progress() -> Progress:
    return Progress(
        "{task.description}",
        SpinnerColumn('dots'),
        BarColumn(),
        TimeElapsedColumn(),
        TextColumn("[progress.percentage]{task.percentage:>3.0f}%"),
        TimeRemainingColumn(),
        console=console,
    )


def add_columns(columns: list[str], table: Table) -> Table:
    for key in columns:
        table.add_column(str(key), justify='center', style=STYLES.get(key))

    return table


def df_to_table(df: pd.DataFrame, title: Optional[str] = None) -> Table:
    table = Table(title=title, row_styles=['dim', 'none'], box=box.HORIZONTALS)
    add_columns([str(c) for c in df.columns], table)
    for row in df.itertuples(index=False):
        table.add_row(*[
            f'{v:.6g}' if isinstance(v, float) else str(v) for v in row
        ])

    return table


def export_table(table: Table, fpath: os.PathLike) -> None:
    """Render `table` to plain text at `fpath`."""
    recorder = Console(record=True, width=WIDTH, file=io.StringIO())
    recorder.print(table)
    Path(fpath).parent.mkdir(exist_ok=True, parents=True)
    with open(fpath, 'w') as f:
        f.write(recorder.export_text())


def print_config(
    config: DictConfig,
    resolve: bool = True,
    outfile: Optional[os.PathLike] = None,
) -> None:
    """Prints content of DictConfig using Rich library and its tree structure.

    Args:
        config (DictConfig): Configuration composed by Hydra.
        resolve (bool, optional): Whether to resolve reference fields of
            DictConfig.
        outfile (os.PathLike, optional): Where to also write the tree.
    """
    tree = rich.tree.Tree("CONFIG")

    for field in config:
        branch = tree.add(str(field))
        config_group = config[field]
        if isinstance(config_group, DictConfig):
            branch_content = OmegaConf.to_yaml(config_group, resolve=resolve)
        else:
            branch_content = str(config_group)

        branch.add(rich.syntax.Syntax(branch_content, "yaml"))

    console.print(tree)

    if outfile is not None:
        with Path(outfile).open('w') as f:
            rich.print(tree, file=f)
