"""
commands.py

One function per CLI command. Each takes the composed hydra config and
returns a dict summarizing what it computed and wrote.
"""
from __future__ import absolute_import, annotations, division, print_function
from dataclasses import replace
from fractions import Fraction
import logging
from pathlib import Path
from typing import Any, Callable, Optional

import numpy as np
from omegaconf import DictConfig
import pandas as pd
from rich.table import Table

from evidential.bba.gaussian import ClusterStats, gd_mass
from evidential.bba.likelihood import (
    appriou1,
    appriou2,
    binary_frame,
    likelihood_vector,
    shafer_bba,
)
from evidential.bba.membership import (
    bfod,
    one_sided_gaussian_cf,
    ratio_mv,
    ratio_mv_raw,
    sigmoid_cf,
    zhu_mass,
    zhu_raw_masses,
)
from evidential.classify.data import load_features
from evidential.classify.models import (
    eknn_fit,
    fit_enn,
    fit_rbf,
    load_model,
    predict_masses,
    save_model,
)
from evidential.cluster.credal import credal_to_mass, focal_structure
from evidential.cluster.ecm import ecm_fit
from evidential.cluster.fcm import fcm_fit
from evidential.common import (
    experiment_config,
    get_jobdir,
    group_config,
    input_path,
    make_subdirs,
    save_tables,
    write_csv,
    write_masses,
)
from evidential.configs import BbaConfig
from evidential.core.frame import Frame
from evidential.core.mass import (
    MassFunction,
    combine_dempster,
    mass_from_assignments,
    pignistic,
)
from evidential.decide.decision import decide_pignistic
from evidential.errors import (
    AllMassEmpty,
    FrameMismatch,
    ShapeMismatch,
    ValidationError,
)
from evidential.fusion.contour import (
    fuse_discounted_batch,
    read_reliability_table,
    reliability_table,
    write_reliability_table,
)
from evidential.fusion.pytorch.reliability import fit_reliability
from evidential.metrics.calibration import ece, reliability_table as calib_table
from evidential.metrics.overlap import (
    overlap_metrics,
    permutation_accuracy,
    specificity,
)
from evidential.scripts import bananas
from evidential.utils.rich import add_columns, df_to_table


log = logging.getLogger(__name__)

DEMPSTER_FRAME = Frame(('a', 'b', 'c'))
DEMPSTER_M1 = {
    'a': 0.3, 'b': 0.3, 'a|b': 0.1, 'a|c': 0.1, 'b|c': 0.1, 'a|b|c': 0.1,
}
DEMPSTER_M2 = {
    'a': 0.2, 'b': 0.3, 'a|b': 0.1, 'c': 0.1, 'b|c': 0.2, 'a|b|c': 0.1,
}
DEMPSTER_ORDER = ('a', 'b', 'a|b', 'c', 'a|c', 'b|c', 'a|b|c')
MAX_DENOMINATOR = 10000


def as_fraction(x: float) -> Fraction:
    return Fraction(x).limit_denominator(MAX_DENOMINATOR)


def dempster_example() -> tuple[MassFunction, float]:
    m1 = mass_from_assignments(DEMPSTER_FRAME, DEMPSTER_M1)
    m2 = mass_from_assignments(DEMPSTER_FRAME, DEMPSTER_M2)
    return combine_dempster(m1, m2)


def cmd_demo_dempster(cfg: DictConfig) -> dict:
    exp = experiment_config(cfg)
    jobdir = get_jobdir(exp.outdir, exp.command)
    combined, conflict = dempster_example()
    rows = []
    for key in DEMPSTER_ORDER:
        value = combined[key]
        rows.append({
            'focal': key,
            'mass': value,
            'fraction': str(as_fraction(value)),
        })
    df = pd.DataFrame(rows)
    table = Table(title=f'm1 ⊕ m2 (κ = {as_fraction(conflict)})')
    add_columns(['focal', 'fraction', 'mass'], table)
    for row in rows:
        table.add_row(row['focal'], row['fraction'], repr(row['mass']))
    write_csv(df, jobdir.joinpath('dempster.csv'))
    save_tables({'dempster': table}, jobdir.joinpath('logs'))
    return {
        'conflict': conflict,
        'conflict_fraction': str(as_fraction(conflict)),
        'masses': {r['focal']: r['fraction'] for r in rows},
        'combined': combined,
    }


def cmd_bananas(cfg: DictConfig) -> dict:
    exp = experiment_config(cfg)
    seed = exp.require_seed()
    bcfg = group_config(cfg, 'bananas')
    tcfg = group_config(cfg, 'train')
    lr_config = group_config(cfg, 'learning_rate')
    jobdir = get_jobdir(exp.outdir, exp.command)
    cells = bananas.run_sweep(bcfg, tcfg, seed, lr_config)
    summary = bananas.summarize_sweep(cells)
    rho = bananas.rank_correlations(summary)
    grid = bananas.contour_grids(bcfg, tcfg, seed, lr_config)
    write_csv(cells, jobdir.joinpath('cells.csv'))
    write_csv(summary, jobdir.joinpath('summary.csv'))
    write_csv(bananas.grid_to_frame(grid), jobdir.joinpath('grid.csv'))
    rho_df = pd.DataFrame({'model': list(rho), 'spearman': list(rho.values())})
    write_csv(rho_df, jobdir.joinpath('spearman.csv'))
    save_tables({
        'summary': df_to_table(summary, title='λ sweep (mean over seeds)'),
        'spearman': df_to_table(rho_df, title='rank correlation of m(Ω) and λ'),
    }, jobdir.joinpath('logs'))
    return {'cells': cells, 'summary': summary, 'spearman': rho, 'grid': grid}


def _labeled_frame(bcfg: BbaConfig, size: int) -> Optional[Frame]:
    if bcfg.labels is None:
        return None
    if len(bcfg.labels) != size:
        raise FrameMismatch(
            f'{len(bcfg.labels)} labels given for a frame of size {size}'
        )
    return Frame(tuple(bcfg.labels))


def _confidence_factor(bcfg: BbaConfig, value: float) -> float:
    if bcfg.cf == 'sigmoid':
        return sigmoid_cf(value, bcfg.midpoint, bcfg.slope)
    if bcfg.cf == 'gaussian':
        return one_sided_gaussian_cf(value, bcfg.center, bcfg.width)
    return value


def _row_width(row: np.ndarray, width: int, method: str) -> None:
    if row.shape[0] != width:
        raise ShapeMismatch(
            f'{method} expects {width} value(s) per row, got {row.shape[0]}'
        )


def bba_from_row(
        row: np.ndarray,
        bcfg: BbaConfig,
) -> tuple[MassFunction, dict[str, Any]]:
    """Mass function and metadata for one input row."""
    method = bcfg.method
    if method == 'shafer':
        pl, m = shafer_bba(row, _labeled_frame(bcfg, row.shape[0]))
        return m, {'pl': pl.values.tolist()}
    if method in ('appriou1', 'appriou2'):
        lik = likelihood_vector(row)
        c = bcfg.hypothesis
        if not 0 <= c < lik.size:
            raise ValidationError(f'hypothesis {c} outside 0..{lik.size - 1}')
        hbar = 1.0 / lik.max()
        label = bcfg.labels[c] if bcfg.labels is not None else f'w{c + 1}'
        fn = appriou1 if method == 'appriou1' else appriou2
        m = fn(float(lik[c]), bcfg.reliability, hbar, binary_frame(label))
        return m, {'hypothesis': c, 'hbar': hbar}
    if method == 'bfod':
        _row_width(row, 1, method)
        cf = _confidence_factor(bcfg, float(row[0]))
        return bfod(cf, bcfg.A, bcfg.B), {'cf': cf}
    if method == 'zhu':
        _row_width(row, 2, method)
        raw = zhu_raw_masses(float(row[0]), float(row[1]), bcfg.eps)
        m = zhu_mass(float(row[0]), float(row[1]), bcfg.eps,
                     _labeled_frame(bcfg, 2))
        return m, {'raw': raw}
    if method == 'ratio_mv':
        _row_width(row, 2, method)
        f1, f2 = float(row[0]), float(row[1])
        _, raw = ratio_mv_raw(f1, f2, bcfg.rmv_alpha, bcfg.rmv_beta)
        category, m = ratio_mv(f1, f2, bcfg.rmv_alpha, bcfg.rmv_beta,
                               _labeled_frame(bcfg, 2))
        return m, {'category': category.value, 'raw': raw}
    # gd
    _row_width(row, 1, method)
    stats = ClusterStats(np.asarray(bcfg.means), np.asarray(bcfg.variances),
                         np.ones(len(bcfg.means), dtype=np.int64))
    focal = focal_structure(stats.nclusters, pairs=bcfg.pairs)
    m = gd_mass(float(row[0]), stats, focal,
                _labeled_frame(bcfg, stats.nclusters))
    return m, {}


def cmd_bba(cfg: DictConfig) -> dict:
    exp = experiment_config(cfg)
    bcfg = group_config(cfg, 'bba')
    rows, _ = load_features(input_path(exp.data), exp.delimiter,
                            has_labels=False)
    jobdir = get_jobdir(exp.outdir, exp.command)
    masses, metas = [], []
    for idx, row in enumerate(rows):
        m, meta = bba_from_row(row, bcfg)
        masses.append(m)
        metas.append({'row': idx, 'method': bcfg.method, **meta})
    outfile = write_masses(jobdir.joinpath('masses.json'), masses, metas)
    log.info(f'{bcfg.method}: {len(masses)} mass functions')
    return {'masses': masses, 'metas': metas, 'outfile': outfile}


def _accuracy_table(name: str, accuracy: float, n: int) -> Table:
    table = Table(title=name)
    add_columns(['objects', 'accuracy'], table)
    table.add_row(str(n), f'{accuracy:.6g}')
    return table


def cmd_train(cfg: DictConfig) -> dict:
    exp = experiment_config(cfg)
    X, y = load_features(input_path(exp.data), exp.delimiter, has_labels=True)
    jobdir = get_jobdir(exp.outdir, exp.command)
    dirs = make_subdirs(jobdir)
    info: dict[str, Any] = {}
    if exp.classifier == 'eknn':
        model = eknn_fit(X, y, group_config(cfg, 'eknn'))
    else:
        seed = exp.require_seed()
        tcfg = group_config(cfg, 'train')
        tcfg = replace(tcfg, seed=seed if tcfg.seed is None else tcfg.seed)
        lr_config = group_config(cfg, 'learning_rate')
        fit = fit_enn if exp.classifier == 'enn' else fit_rbf
        model, info = fit(X, y, tcfg, lr_config)
        info['history'].save(dirs['data'].joinpath('history.csv'))
        tcfg.to_file(dirs['data'].joinpath('train_config.json'))
    outfile = jobdir.joinpath('model.json')
    save_model(model, outfile)
    pred = np.array([decide_pignistic(m) for m in predict_masses(model, X)])
    accuracy = float(np.mean(pred == y))
    save_tables({
        'train': _accuracy_table(f'{exp.classifier} (training set)',
                                 accuracy, len(y)),
    }, dirs['logs'])
    return {'model': model, 'accuracy': accuracy, 'outfile': outfile, **info}


def cmd_predict(cfg: DictConfig) -> dict:
    exp = experiment_config(cfg)
    model = load_model(input_path(exp.model, 'model'))
    X, y = load_features(input_path(exp.data), exp.delimiter,
                         has_labels=exp.has_labels)
    jobdir = get_jobdir(exp.outdir, exp.command)
    masses = predict_masses(model, X)
    frame = model.frame
    focal = frame.singletons() + [frame.omega]
    betp = np.stack([pignistic(m) for m in masses])
    pred = np.array([decide_pignistic(m) for m in masses], dtype=np.int64)
    df = pd.DataFrame({'pred': pred, 'confidence': betp.max(axis=1)})
    for c, label in enumerate(frame.labels):
        df[f'betp_{label}'] = betp[:, c]
    for f in focal:
        name = 'omega' if f == frame.omega else frame.key(f)
        df[f'm_{name}'] = [m[f] for m in masses]
    metas = [
        {'object': i, 'pred': int(p), 'betp': b.tolist()}
        for i, (p, b) in enumerate(zip(pred, betp))
    ]
    out: dict[str, Any] = {'masses': masses, 'pred': pred}
    if y is not None:
        df.insert(0, 'label', y)
        out['accuracy'] = float(np.mean(pred == y))
        save_tables({
            'predict': _accuracy_table(f'{model.kind} predictions',
                                       out['accuracy'], len(y)),
        }, jobdir.joinpath('logs'))
    write_csv(df, jobdir.joinpath('predictions.csv'))
    write_masses(jobdir.joinpath('masses.json'), masses, metas)
    out['predictions'] = df
    return out


def _load_sources(paths: list[str], delimiter: str) -> np.ndarray:
    if len(paths) == 0:
        raise ValidationError('fusion.sources lists no contour files')
    pls = []
    for p in paths:
        values, _ = load_features(input_path(p, 'fusion.sources'), delimiter,
                                  has_labels=False)
        pls.append(values)
    ncls = {p.shape[1] for p in pls}
    if len(ncls) != 1:
        raise FrameMismatch(f'Sources disagree on the number of classes: {ncls}')
    nobj = {p.shape[0] for p in pls}
    if len(nobj) != 1:
        raise ShapeMismatch(f'Sources disagree on the number of objects: {nobj}')
    return np.stack(pls)


def cmd_fuse(cfg: DictConfig) -> dict:
    exp = experiment_config(cfg)
    fcfg = group_config(cfg, 'fusion')
    pls = _load_sources(fcfg.sources, exp.delimiter)
    nsources, _, ncls = pls.shape
    names = (
        fcfg.names if fcfg.names is not None
        else [Path(p).stem for p in fcfg.sources]
    )
    if len(names) != nsources or len(set(names)) != nsources:
        raise ValidationError(f'Need {nsources} distinct source names: {names}')
    jobdir = get_jobdir(exp.outdir, exp.command)
    dirs = make_subdirs(jobdir)
    labels = [f'w{c + 1}' for c in range(ncls)]
    info: dict[str, Any] = {}
    if fcfg.fit:
        truth, _ = load_features(input_path(fcfg.labels, 'fusion.labels'),
                                 exp.delimiter, has_labels=False)
        betas, info = fit_reliability(pls, truth[:, 0].astype(np.int64), fcfg)
        info['history'].save(dirs['data'].joinpath('history.csv'))
    elif fcfg.beta is not None:
        table = read_reliability_table(input_path(fcfg.beta, 'fusion.beta'))
        if table.shape[1] != ncls:
            raise FrameMismatch(
                f'Reliability table has {table.shape[1]} classes, '
                f'sources have {ncls}'
            )
        missing = [n for n in names if n not in table.index]
        if missing:
            raise ValidationError(f'No reliabilities for sources {missing}')
        labels = list(table.columns)
        betas = table.loc[names].to_numpy(dtype=np.float64)
    else:
        betas = np.ones((nsources, ncls))
    fused = fuse_discounted_batch(pls, betas)
    df = pd.DataFrame(fused, columns=[f'p_{x}' for x in labels])
    # ties go to the lowest class index
    df['pred'] = np.argmax(fused, axis=1)
    beta_df = reliability_table(list(betas), labels, names)
    write_csv(df, jobdir.joinpath('fused.csv'))
    write_reliability_table(beta_df, jobdir.joinpath('reliability.csv'))
    save_tables({
        'reliability': df_to_table(beta_df.reset_index(),
                                   title='reliability (source x class)'),
    }, dirs['logs'])
    return {'fused': fused, 'betas': betas, 'reliability': beta_df, **info}


def cmd_ecm(cfg: DictConfig) -> dict:
    exp = experiment_config(cfg)
    ecfg = group_config(cfg, 'ecm')
    if ecfg.seed is None:
        ecfg = replace(ecfg, seed=exp.require_seed())
    X, y = load_features(input_path(exp.data), exp.delimiter,
                         has_labels=exp.has_labels)
    jobdir = get_jobdir(exp.outdir, exp.command)
    partition, prototypes = ecm_fit(X, ecfg)
    df = partition.to_frame()
    df['pignistic'] = partition.pignistic_labels()
    masses, metas = [], []
    for i in range(partition.nobjects):
        try:
            masses.append(credal_to_mass(partition, i))
        except AllMassEmpty:
            log.warning(f'Object {i} is an outlier (all mass on ∅)')
            continue
        metas.append({'object': i, 'empty': float(partition.empty_mass[i])})
    write_csv(df, jobdir.joinpath('partition.csv'))
    write_csv(pd.DataFrame(prototypes), jobdir.joinpath('prototypes.csv'))
    write_masses(jobdir.joinpath('masses.json'), masses, metas)
    out: dict[str, Any] = {'partition': partition, 'prototypes': prototypes}
    if y is not None:
        out['accuracy'] = permutation_accuracy(df['pignistic'].to_numpy(), y)
        save_tables({
            'ecm': _accuracy_table('ECM pignistic labels',
                                   out['accuracy'], len(y)),
        }, jobdir.joinpath('logs'))
    return out


def cmd_fcm(cfg: DictConfig) -> dict:
    exp = experiment_config(cfg)
    fcfg = group_config(cfg, 'fcm')
    if fcfg.seed is None:
        fcfg = replace(fcfg, seed=exp.require_seed())
    X, y = load_features(input_path(exp.data), exp.delimiter,
                         has_labels=exp.has_labels)
    jobdir = get_jobdir(exp.outdir, exp.command)
    partition = fcm_fit(X, fcfg.nclusters, config=fcfg)
    df = pd.DataFrame(
        partition.memberships,
        columns=[f'w{c + 1}' for c in range(fcfg.nclusters)],
    )
    df['label'] = partition.labels()
    write_csv(df, jobdir.joinpath('memberships.csv'))
    write_csv(pd.DataFrame(partition.centers), jobdir.joinpath('centers.csv'))
    write_csv(pd.DataFrame({'objective': partition.objective}),
              jobdir.joinpath('objective.csv'))
    out: dict[str, Any] = {'partition': partition}
    if y is not None:
        out['accuracy'] = permutation_accuracy(partition.labels(), y)
        save_tables({
            'fcm': _accuracy_table('FCM labels', out['accuracy'], len(y)),
        }, jobdir.joinpath('logs'))
    return out


def cmd_metrics(cfg: DictConfig) -> dict:
    """Metrics of a prediction CSV with `label`, `pred` and optionally
    `confidence` columns (the layout written by `predict`)."""
    exp = experiment_config(cfg)
    mcfg = group_config(cfg, 'metrics')
    df = pd.read_csv(input_path(exp.data), sep=exp.delimiter)
    missing = {'label', 'pred'} - set(df.columns)
    if missing:
        raise ValidationError(f'Prediction file lacks columns {sorted(missing)}')
    pred = df['pred'].to_numpy()
    truth = df['label'].to_numpy()
    overlap = overlap_metrics(pred, truth, mcfg.positive_class)
    rows = [
        ('dice', overlap.dice),
        ('sensitivity', overlap.sensitivity),
        ('precision', overlap.precision),
        ('specificity', specificity(pred, truth, mcfg.positive_class)),
        ('accuracy', float(np.mean(pred == truth))),
    ]
    jobdir = get_jobdir(exp.outdir, exp.command)
    tables = {}
    if 'confidence' in df.columns:
        correct = pred == truth
        conf = df['confidence'].to_numpy()
        rows.append(('ece', ece(conf, correct, mcfg.nbins)))
        calib = calib_table(conf, correct, mcfg.nbins)
        write_csv(calib, jobdir.joinpath('calibration.csv'))
        tables['calibration'] = df_to_table(calib, title='reliability diagram')
    report = pd.DataFrame(rows, columns=['metric', 'value'])
    write_csv(report, jobdir.joinpath('metrics.csv'))
    tables['metrics'] = df_to_table(report, title='metrics')
    save_tables(tables, jobdir.joinpath('logs'))
    return {'metrics': dict(rows), 'report': report}


COMMANDS: dict[str, Callable[[DictConfig], dict]] = {
    'demo_dempster': cmd_demo_dempster,
    'bananas': cmd_bananas,
    'bba': cmd_bba,
    'train': cmd_train,
    'predict': cmd_predict,
    'fuse': cmd_fuse,
    'ecm': cmd_ecm,
    'fcm': cmd_fcm,
    'metrics': cmd_metrics,
}
