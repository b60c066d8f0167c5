"""
test_cli.py

End-to-end runs of the `evid` commands through the composed hydra config.
"""
from __future__ import absolute_import, annotations, division, print_function
import json

import numpy as np
import pandas as pd
import pytest

from evidential.classify.data import save_features
from evidential.configs import TrainConfig
from evidential.core.io import load_masses
from evidential.main import (
    EXIT_INVALID,
    EXIT_OK,
    EXIT_RUNTIME,
    dispatch,
    run,
)


def write_rows(fpath, rows) -> str:
    pd.DataFrame(rows).to_csv(fpath, header=False, index=False)
    return fpath.as_posix()


class TestDispatch:
    def test_unknown_command(self, make_cfg):
        assert run(make_cfg(['command=frobnicate'])) == EXIT_INVALID

    def test_no_command(self, make_cfg):
        assert run(make_cfg()) == EXIT_INVALID

    def test_missing_input(self, make_cfg, tmp_path):
        cfg = make_cfg(['command=bba', f'data={tmp_path}/nope.csv'])
        assert run(cfg) == EXIT_INVALID

    @pytest.mark.parametrize('command', ['ecm', 'fcm', 'bananas'])
    def test_stochastic_commands_need_a_seed(self, make_cfg, tmp_path,
                                             three_blobs, command):
        fpath = tmp_path / 'blobs.csv'
        save_features(fpath, *three_blobs)
        cfg = make_cfg([f'command={command}', f'data={fpath.as_posix()}'])
        assert run(cfg) == EXIT_INVALID


class TestDemoDempster:
    def test_fractions(self, make_cfg):
        cfg = make_cfg(['command=demo_dempster', 'print_config=true'])
        assert run(cfg) == EXIT_OK
        out = dispatch(cfg)
        assert out['conflict_fraction'] == '33/100'
        assert out['masses'] == {
            'a': '19/67', 'b': '33/67', 'a|b': '3/67', 'c': '5/67',
            'a|c': '1/67', 'b|c': '5/67', 'a|b|c': '1/67',
        }

    def test_reruns_are_identical(self, make_cfg, tmp_path):
        cfg = make_cfg(['command=demo_dempster'])
        fpath = tmp_path / 'demo_dempster' / 'dempster.csv'
        assert run(cfg) == EXIT_OK
        first = fpath.read_bytes()
        assert run(cfg) == EXIT_OK
        assert fpath.read_bytes() == first


class TestBba:
    def test_shafer(self, make_cfg, tmp_path):
        data = write_rows(tmp_path / 'lik.csv', [[0.2, 0.1], [0.3, 0.3]])
        cfg = make_cfg(['command=bba', f'data={data}', 'bba.labels=[x,y]'])
        assert run(cfg) == EXIT_OK
        masses = load_masses(tmp_path / 'bba' / 'masses.json')
        assert masses[0]['x'] == pytest.approx(0.5)
        assert masses[0]['x|y'] == pytest.approx(0.5)
        assert masses[1].is_vacuous()

    def test_zhu_metadata(self, make_cfg, tmp_path):
        data = write_rows(tmp_path / 'mv.csv', [[0.5, 0.5], [0.9, 0.1]])
        cfg = make_cfg(['command=bba', f'data={data}', 'bba.method=zhu'])
        assert run(cfg) == EXIT_OK
        with open(tmp_path / 'bba' / 'masses.json') as f:
            docs = json.load(f)
        assert docs[0]['meta']['raw']['pair'] == pytest.approx(0.5)
        assert docs[1]['meta']['raw']['pair'] == 0.0

    def test_ratio_mv_category(self, make_cfg, tmp_path):
        data = write_rows(tmp_path / 'mv.csv', [[0.18, 0.81], [0.5, 0.75]])
        cfg = make_cfg(['command=bba', f'data={data}', 'bba.method=ratio_mv'])
        out = dispatch(cfg)
        assert [m['category'] for m in out['metas']] == ['NU', 'PU']

    def test_row_width(self, make_cfg, tmp_path):
        data = write_rows(tmp_path / 'cf.csv', [[0.2, 0.1]])
        cfg = make_cfg(['command=bba', f'data={data}', 'bba.method=bfod'])
        assert run(cfg) == EXIT_INVALID

    def test_all_zero_likelihood(self, make_cfg, tmp_path):
        data = write_rows(tmp_path / 'lik.csv', [[0.0, 0.0]])
        assert run(make_cfg(['command=bba', f'data={data}'])) == EXIT_INVALID


class TestTrainPredict:
    def train(self, make_cfg, data: str, *extra: str):
        return make_cfg([
            'command=train', f'data={data}', 'seed=0', 'train.epochs=200',
            'train.nprototypes=4', 'learning_rate.lr_init=0.05', *extra,
        ])

    @pytest.mark.parametrize('classifier', ['enn', 'rbf', 'eknn'])
    def test_train_then_predict(self, make_cfg, tmp_path, blobs, classifier):
        fpath = tmp_path / 'blobs.csv'
        save_features(fpath, *blobs)
        cfg = self.train(make_cfg, fpath.as_posix(), f'classifier={classifier}')
        out = dispatch(cfg)
        assert out['accuracy'] == 1.0
        model = tmp_path / 'train' / 'model.json'
        assert model.is_file()
        cfg = make_cfg(['command=predict', f'data={fpath.as_posix()}',
                        f'model={model.as_posix()}'])
        out = dispatch(cfg)
        assert out['accuracy'] == 1.0
        df = pd.read_csv(tmp_path / 'predict' / 'predictions.csv')
        assert {'label', 'pred', 'confidence', 'm_omega'} <= set(df.columns)
        assert len(load_masses(tmp_path / 'predict' / 'masses.json')) == 40

    def test_train_config_is_saved(self, make_cfg, tmp_path, blobs):
        fpath = tmp_path / 'blobs.csv'
        save_features(fpath, *blobs)
        assert run(self.train(make_cfg, fpath.as_posix())) == EXIT_OK
        saved = TrainConfig.from_file(
            tmp_path / 'train' / 'data' / 'train_config.json'
        )
        assert saved.seed == 0
        assert saved.nprototypes == 4
        assert saved.epochs == 200
        assert (tmp_path / 'train' / 'data' / 'history.csv').is_file()

    def test_dimension_mismatch(self, make_cfg, tmp_path, blobs):
        X, y = blobs
        fpath = tmp_path / 'blobs.csv'
        save_features(fpath, X, y)
        assert run(self.train(make_cfg, fpath.as_posix())) == EXIT_OK
        wide = tmp_path / 'wide.csv'
        save_features(wide, np.hstack([X, X[:, :1]]), y)
        cfg = make_cfg(['command=predict', f'data={wide.as_posix()}',
                        f'model={(tmp_path / "train" / "model.json").as_posix()}'])
        assert run(cfg) == EXIT_INVALID

    def test_eknn_k_too_large(self, make_cfg, tmp_path, blobs):
        fpath = tmp_path / 'blobs.csv'
        save_features(fpath, *blobs)
        cfg = self.train(make_cfg, fpath.as_posix(), 'classifier=eknn',
                         'eknn.K=100')
        assert run(cfg) == EXIT_INVALID

    def test_eknn_needs_no_seed(self, make_cfg, tmp_path, blobs):
        fpath = tmp_path / 'blobs.csv'
        save_features(fpath, *blobs)
        cfg = make_cfg(['command=train', f'data={fpath.as_posix()}',
                        'classifier=eknn'])
        assert run(cfg) == EXIT_OK


class TestFuse:
    def sources(self, tmp_path):
        good = write_rows(tmp_path / 'good.csv', [[1.0, 0.2], [0.3, 1.0]])
        bad = write_rows(tmp_path / 'bad.csv', [[0.0, 1.0], [1.0, 0.0]])
        return good, bad

    def test_unreliable_source_is_ignored(self, make_cfg, tmp_path):
        good, bad = self.sources(tmp_path)
        beta = tmp_path / 'beta.csv'
        beta.write_text('source,w1,w2\ngood,1.0,1.0\nbad,0.0,0.0\n')
        cfg = make_cfg(['command=fuse', f"fusion.sources=['{good}','{bad}']",
                        f'fusion.beta={beta.as_posix()}'])
        out = dispatch(cfg)
        assert out['fused'] == pytest.approx(
            np.array([[1.0, 0.2], [0.3, 1.0]]) / np.array([[1.2], [1.3]])
        )
        df = pd.read_csv(tmp_path / 'fuse' / 'fused.csv')
        assert df['pred'].tolist() == [0, 1]

    def test_total_conflict(self, make_cfg, tmp_path):
        good, bad = self.sources(tmp_path)
        good = write_rows(tmp_path / 'good.csv', [[1.0, 0.0], [0.0, 1.0]])
        cfg = make_cfg(['command=fuse', f"fusion.sources=['{good}','{bad}']"])
        assert run(cfg) == EXIT_RUNTIME

    def test_fit(self, make_cfg, tmp_path):
        rng = np.random.default_rng(0)
        y = rng.integers(0, 2, size=40)
        good = write_rows(tmp_path / 'good.csv', 0.1 + 0.9 * np.eye(2)[y])
        bad = write_rows(tmp_path / 'bad.csv', 0.1 + 0.9 * np.eye(2)[1 - y])
        labels = write_rows(tmp_path / 'labels.csv', y[:, None])
        cfg = make_cfg(['command=fuse', f"fusion.sources=['{good}','{bad}']",
                        'fusion.fit=true', f'fusion.labels={labels}'])
        out = dispatch(cfg)
        assert np.all(out['betas'][0] > 0.9)
        assert np.all(out['betas'][1] < 0.1)
        table = pd.read_csv(tmp_path / 'fuse' / 'reliability.csv', index_col=0)
        assert list(table.index) == ['good', 'bad']

    def test_mismatched_sources(self, make_cfg, tmp_path):
        good, _ = self.sources(tmp_path)
        wide = write_rows(tmp_path / 'wide.csv', [[1.0, 0.2, 0.1]] * 2)
        cfg = make_cfg(['command=fuse', f"fusion.sources=['{good}','{wide}']"])
        assert run(cfg) == EXIT_INVALID


class TestClustering:
    def test_ecm(self, make_cfg, tmp_path, three_blobs):
        fpath = tmp_path / 'blobs.csv'
        save_features(fpath, *three_blobs)
        cfg = make_cfg(['command=ecm', 'seed=0', f'data={fpath.as_posix()}',
                        'ecm.nclusters=3'])
        out = dispatch(cfg)
        assert out['accuracy'] >= 0.95
        df = pd.read_csv(tmp_path / 'ecm' / 'partition.csv')
        assert list(df.columns[:4]) == ['empty', 'w1', 'w2', 'w3']
        assert 'w1|w2' in df.columns
        assert np.allclose(df.iloc[:, :-1].sum(axis=1), 1.0)

    def test_fcm_single_cluster(self, make_cfg, tmp_path, three_blobs):
        fpath = tmp_path / 'blobs.csv'
        save_features(fpath, *three_blobs)
        cfg = make_cfg(['command=fcm', 'seed=0', f'data={fpath.as_posix()}',
                        'fcm.nclusters=1'])
        assert run(cfg) == EXIT_OK
        df = pd.read_csv(tmp_path / 'fcm' / 'memberships.csv')
        assert np.allclose(df['w1'], 1.0)

    def test_fcm_is_deterministic(self, make_cfg, tmp_path, three_blobs):
        fpath = tmp_path / 'blobs.csv'
        save_features(fpath, *three_blobs)
        cfg = make_cfg(['command=fcm', 'seed=3', f'data={fpath.as_posix()}',
                        'fcm.nclusters=3'])
        out = tmp_path / 'fcm' / 'memberships.csv'
        assert run(cfg) == EXIT_OK
        first = out.read_bytes()
        assert run(cfg) == EXIT_OK
        assert out.read_bytes() == first

    def test_too_many_clusters(self, make_cfg, tmp_path):
        data = write_rows(tmp_path / 'two.csv', [[0.0, 0.0, 0], [1.0, 1.0, 1]])
        cfg = make_cfg(['command=fcm', 'seed=0', f'data={data}',
                        'fcm.nclusters=3'])
        assert run(cfg) == EXIT_INVALID


class TestMetrics:
    def test_report(self, make_cfg, tmp_path):
        fpath = tmp_path / 'pred.csv'
        pd.DataFrame({
            'label': [1, 0, 0, 1, 1, 0],
            'pred': [1, 1, 0, 0, 1, 0],
            'confidence': [0.8] * 6,
        }).to_csv(fpath, index=False)
        out = dispatch(make_cfg(['command=metrics', f'data={fpath.as_posix()}']))
        metrics = out['metrics']
        assert metrics['dice'] == pytest.approx(2.0 / 3.0)
        assert metrics['specificity'] == pytest.approx(2.0 / 3.0)
        assert metrics['ece'] == pytest.approx(0.8 - 4.0 / 6.0)
        assert (tmp_path / 'metrics' / 'calibration.csv').is_file()

    def test_missing_columns(self, make_cfg, tmp_path):
        fpath = tmp_path / 'pred.csv'
        pd.DataFrame({'pred': [0, 1]}).to_csv(fpath, index=False)
        cfg = make_cfg(['command=metrics', f'data={fpath.as_posix()}'])
        assert run(cfg) == EXIT_INVALID


def test_bananas_debug(make_cfg, tmp_path):
    cfg = make_cfg(['command=bananas', 'seed=0', 'mode=debug'])
    assert cfg.train.epochs == 20
    assert run(cfg) == EXIT_OK
    jobdir = tmp_path / 'bananas'
    summary = pd.read_csv(jobdir / 'summary.csv')
    assert sorted(summary['model'].unique()) == ['enn', 'rbf']
    assert len(summary) == 4
    grid = pd.read_csv(jobdir / 'grid.csv')
    assert len(grid) == 2 * 5 * 5 * 3
    assert (jobdir / 'logs' / 'tables' / 'summary.txt').is_file()
