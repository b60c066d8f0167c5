"""
test_classify.py

EKNN, ENN and RBF evidential classifiers.
"""
from __future__ import absolute_import, annotations, division, print_function

import warnings
from typing import Callable

import numpy as np
import pandas as pd
import pytest
import torch

from evidential.classify.data import (
    banana_data,
    load_features,
    off_manifold_blob,
    save_features,
)
from evidential.classify.eknn import eknn_predict, eknn_predict_batch, fit_gamma
from evidential.classify.init import init_prototypes
from evidential.classify.models import (
    EnnModel,
    RbfModel,
    eknn_fit,
    enn_forward,
    enn_forward_batch,
    fit_enn,
    fit_rbf,
    load_model,
    predict_masses,
    rbf_forward,
    rbf_forward_batch,
    save_model,
)
from evidential.classify.pytorch.network import (
    EnnNetwork,
    RbfNetwork,
    as_tensor,
    enn_masses,
    masses_to_betp,
    rbf_masses,
    rbf_weights,
)
from evidential.configs import (
    BananaConfig,
    EknnConfig,
    LearningRateConfig,
    TrainConfig,
)
from evidential.core.frame import Frame
from evidential.core.mass import combine_all, mass_from_assignments, pignistic
from evidential.errors import DimensionMismatch, ShapeMismatch, ValidationError
from evidential.loss.pytorch.loss import EvidentialLoss
from evidential.scripts.bananas import (
    rank_correlations,
    run_sweep,
    summarize_sweep,
)

AB = Frame(('a', 'b'))
LR = LearningRateConfig(lr_init=0.05)


def train_config(**kwargs) -> TrainConfig:
    opts = dict(nprototypes=4, epochs=300, seed=0)
    opts.update(kwargs)
    return TrainConfig(**opts)


def accuracy(masses: np.ndarray, y: np.ndarray) -> float:
    betp = masses_to_betp(as_tensor(masses)).numpy()
    return float(np.mean(np.argmax(betp, axis=1) == y))


class TestEknn:
    X = np.array([[0.0, 0.0], [1.0, 0.0], [10.0, 10.0]])
    y = np.array([0, 0, 1])

    def test_single_neighbor_at_zero_distance(self):
        m = eknn_predict([0.0, 0.0], self.X, self.y,
                         EknnConfig(K=1, gamma=1.0), AB)
        assert m['a'] == pytest.approx(0.95)
        assert m[AB.omega] == pytest.approx(0.05)

    def test_far_query_is_vacuous(self):
        m = eknn_predict([1e4, -1e4], self.X, self.y, EknnConfig(K=1, gamma=1.0))
        assert m[m.frame.omega] == pytest.approx(1.0)

    def test_two_agreeing_neighbors(self):
        gamma = np.log(0.95 / 0.5)
        m = eknn_predict([0.5, np.sqrt(0.75)], self.X, self.y,
                         EknnConfig(K=2, gamma=gamma), AB)
        assert m['a'] == pytest.approx(0.75)
        assert m[AB.omega] == pytest.approx(0.25)

    def test_per_class_gammas(self):
        m = eknn_predict([0.0, 0.0], self.X, self.y,
                         EknnConfig(K=1, gamma=[1.0, 2.0]))
        assert m[0] == pytest.approx(0.95)
        with pytest.raises(DimensionMismatch):
            eknn_predict([0.0, 0.0], self.X, self.y,
                         EknnConfig(K=1, gamma=[1.0, 2.0, 3.0]))

    def test_k_larger_than_training_set(self):
        with pytest.raises(ValidationError):
            eknn_predict([0.0, 0.0], self.X, self.y, EknnConfig(K=4))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            eknn_predict([0.0, 0.0, 0.0], self.X, self.y, EknnConfig(K=1))

    def test_fit_gamma(self):
        X = np.array([[0.0], [2.0]])
        assert fit_gamma(X) == pytest.approx(0.25)
        with pytest.raises(ValidationError):
            fit_gamma(np.zeros((3, 2)))

    def test_batch_on_blobs(self, blobs):
        X, y = blobs
        masses = eknn_predict_batch(X + 0.01, X, y, EknnConfig(K=3))
        pred = [int(np.argmax(pignistic(m))) for m in masses]
        assert np.mean(np.asarray(pred) == y) == 1.0


class TestEnn:
    def model(self, alpha: float = 0.95) -> EnnModel:
        return EnnModel(
            prototypes=np.array([[0.0, 0.0]]),
            alpha=np.array([alpha]),
            gamma=np.array([1.0]),
            u=np.array([[1.0, 0.0]]),
            frame=AB,
        )

    def test_single_prototype(self):
        m = enn_forward(self.model(), [0.0, 0.0])
        assert m['a'] == pytest.approx(0.95)
        assert m['b'] == 0.0
        assert m[AB.omega] == pytest.approx(0.05)

    def test_full_confidence_at_prototype(self):
        model = self.model(alpha=1.0)
        assert enn_forward(model, [0.0, 0.0])['a'] == pytest.approx(1.0)

    def test_vacuous_far_away(self):
        masses = enn_forward_batch(self.model(), np.array([[1e3, 1e3]]))
        assert masses[0, -1] == pytest.approx(1.0)

    def test_rows_are_mass_functions(self):
        rng = np.random.default_rng(0)
        u = rng.random((5, 3))
        model = EnnModel(
            prototypes=rng.standard_normal((5, 2)),
            alpha=rng.uniform(0.1, 0.9, 5),
            gamma=rng.uniform(0.5, 2.0, 5),
            u=u / u.sum(axis=1, keepdims=True),
            frame=Frame.indexed(3),
        )
        masses = enn_forward_batch(model, rng.standard_normal((50, 2)))
        assert masses.shape == (50, 4)
        assert np.all(masses >= 0)
        assert np.allclose(masses.sum(axis=1), 1.0)

    def test_shape_checks(self):
        with pytest.raises(ShapeMismatch):
            EnnModel(np.zeros((2, 2)), np.array([0.5]), np.array([1.0, 1.0]),
                     np.array([[1.0, 0.0], [0.0, 1.0]]), AB)
        with pytest.raises(DimensionMismatch):
            enn_forward(self.model(), [0.0, 0.0, 0.0])

    def test_gradcheck(self):
        gen = torch.Generator().manual_seed(0)
        x = torch.randn(20, 2, generator=gen, dtype=torch.float64)
        prototypes = torch.randn(3, 2, generator=gen, dtype=torch.float64)
        alpha = torch.tensor([0.3, 0.6, 0.9], dtype=torch.float64)
        gamma = torch.tensor([0.5, 1.0, 2.0], dtype=torch.float64)
        u = torch.rand(3, 2, generator=gen, dtype=torch.float64)
        u = u / u.sum(dim=1, keepdim=True)
        inputs = tuple(t.requires_grad_() for t in (x, prototypes, alpha,
                                                    gamma, u))
        assert torch.autograd.gradcheck(enn_masses, inputs, eps=1e-5)

    @pytest.mark.parametrize('seed', range(20))
    def test_closed_form_is_dempster_combination(self, seed):
        rng = np.random.default_rng(seed)
        frame = Frame.indexed(3)
        for _ in range(10):
            nproto = int(rng.integers(1, 6))
            model = EnnModel(
                prototypes=rng.standard_normal((nproto, 2)),
                alpha=rng.uniform(0.05, 0.95, nproto),
                gamma=rng.uniform(0.2, 2.0, nproto),
                u=rng.dirichlet(np.ones(3), nproto),
                frame=frame,
            )
            x = rng.standard_normal(2)
            s = model.alpha * np.exp(
                -model.gamma * ((model.prototypes - x) ** 2).sum(axis=1)
            )
            pieces = [
                mass_from_assignments(frame, [
                    *[(c, model.u[i, c] * s[i]) for c in range(3)],
                    (frame.omega, 1.0 - s[i]),
                ])
                for i in range(nproto)
            ]
            expected, _ = combine_all(pieces)
            m = enn_forward(model, x)
            for focal in frame.singletons() + [frame.omega]:
                assert m[focal] == pytest.approx(expected[focal], abs=1e-12)


class TestRbf:
    def model(self, v: float) -> RbfModel:
        return RbfModel(
            prototypes=np.array([[0.0, 0.0]]),
            gamma=np.array([1.0]),
            v=np.array([v]),
        )

    def test_zero_weight_is_vacuous(self):
        m, p = rbf_forward(self.model(0.0), [0.0, 0.0])
        assert m.is_vacuous()
        assert p == pytest.approx(0.5)

    def test_positive_weight(self):
        m, p = rbf_forward(self.model(np.log(2.0)), [0.0, 0.0])
        assert m[0] == pytest.approx(0.5)
        assert m[1] == pytest.approx(0.0)
        assert m[m.frame.omega] == pytest.approx(0.5)
        assert p == pytest.approx(2.0 / 3.0)

    def test_negative_weight_supports_second_class(self):
        m, p = rbf_forward(self.model(-np.log(2.0)), [0.0, 0.0])
        assert m[1] == pytest.approx(0.5)
        assert p == pytest.approx(1.0 / 3.0)

    def test_normalized_contour_is_logistic(self):
        gen = torch.Generator().manual_seed(1)
        w = 3.0 * torch.randn(1000, 4, generator=gen, dtype=torch.float64)
        masses = rbf_masses(w)
        pl1 = masses[:, 0] + masses[:, 2]
        pl2 = masses[:, 1] + masses[:, 2]
        expected = torch.sigmoid(w.sum(dim=1))
        assert torch.allclose(pl1 / (pl1 + pl2), expected, atol=1e-12)

    def test_vacuous_far_away(self):
        masses, p = rbf_forward_batch(self.model(5.0), np.array([[1e3, 0.0]]))
        assert masses[0, 2] == pytest.approx(1.0)
        assert p[0] == pytest.approx(0.5)

    def test_binary_only(self):
        with pytest.raises(ValidationError):
            RbfModel(np.zeros((1, 2)), np.ones(1), np.ones(1),
                     frame=Frame.indexed(3))


def numeric_gradients(
        net: torch.nn.Module,
        loss_fn: Callable[[], torch.Tensor],
        h: float = 1e-6,
) -> list[torch.Tensor]:
    grads = []
    with torch.no_grad():
        for param in net.parameters():
            flat = param.data.view(-1)
            grad = torch.zeros_like(flat)
            for k in range(flat.numel()):
                orig = flat[k].item()
                flat[k] = orig + h
                up = loss_fn().item()
                flat[k] = orig - h
                down = loss_fn().item()
                flat[k] = orig
                grad[k] = (up - down) / (2.0 * h)
            grads.append(grad.view_as(param))
    return grads


def random_network(kind: str, rng: np.random.Generator) -> torch.nn.Module:
    nproto = 3
    prototypes = rng.standard_normal((nproto, 2))
    gamma = rng.uniform(0.2, 2.0, nproto)
    if kind == 'enn':
        return EnnNetwork(prototypes, 2,
                          alpha=rng.uniform(0.05, 0.95, nproto),
                          gamma=gamma,
                          u=rng.dirichlet(np.ones(2), nproto))
    # |v| bounded away from 0 keeps w+ / w- differentiable
    v = rng.choice([-1.0, 1.0], nproto) * rng.uniform(0.2, 2.0, nproto)
    return RbfNetwork(prototypes, gamma=gamma, v=v)


class TestGradients:
    @pytest.mark.parametrize('loss', ['default', 'dice'])
    @pytest.mark.parametrize('kind', ['enn', 'rbf'])
    @pytest.mark.parametrize('seed', range(20))
    def test_loss_gradients(self, seed, kind, loss):
        rng = np.random.default_rng(seed)
        net = random_network(kind, rng)
        x = as_tensor(rng.standard_normal((15, 2)))
        y = torch.as_tensor(rng.integers(0, 2, 15), dtype=torch.long)
        criterion = EvidentialLoss(TrainConfig(lam=0.1, loss=loss), kind)
        value, _ = criterion(net, x, y)
        value.backward()
        expected = numeric_gradients(net, lambda: criterion(net, x, y)[0])
        for param, grad in zip(net.parameters(), expected):
            assert torch.allclose(param.grad, grad, rtol=1e-5, atol=1e-7)

    @pytest.mark.parametrize('seed', range(20))
    def test_enn_masses_gradcheck(self, seed):
        rng = np.random.default_rng(seed)
        nproto = int(rng.integers(1, 6))
        u = rng.dirichlet(np.ones(3), nproto)
        inputs = tuple(as_tensor(a).requires_grad_() for a in (
            rng.standard_normal((10, 2)),
            rng.standard_normal((nproto, 2)),
            rng.uniform(0.05, 0.95, nproto),
            rng.uniform(0.2, 2.0, nproto),
            u,
        ))
        assert torch.autograd.gradcheck(enn_masses, inputs, eps=1e-6)

    @pytest.mark.parametrize('seed', range(20))
    def test_rbf_masses_gradcheck(self, seed):
        rng = np.random.default_rng(seed)
        nproto = int(rng.integers(1, 6))
        v = rng.choice([-1.0, 1.0], nproto) * rng.uniform(0.2, 2.0, nproto)
        inputs = tuple(as_tensor(a).requires_grad_() for a in (
            rng.standard_normal((10, 2)),
            rng.standard_normal((nproto, 2)),
            rng.uniform(0.2, 2.0, nproto),
            v,
        ))

        def masses(x, prototypes, gamma, v):
            return rbf_masses(rbf_weights(x, prototypes, gamma, v))

        def logits(x, prototypes, gamma, v):
            return rbf_weights(x, prototypes, gamma, v).sum(dim=1)

        assert torch.autograd.gradcheck(masses, inputs, eps=1e-6)
        assert torch.autograd.gradcheck(logits, inputs, eps=1e-6)


class TestTraining:
    def test_enn_separates_blobs(self, blobs):
        X, y = blobs
        model, info = fit_enn(X, y, train_config(lam=0.0), LR)
        assert accuracy(enn_forward_batch(model, X), y) == 1.0
        assert info['loss_final'] <= info['loss_init']
        history = info['history']
        assert len(history.history['loss']) == 300
        assert history.get_dataset()['loss'].sizes['epoch'] == 300

    def test_rbf_separates_blobs(self, blobs):
        X, y = blobs
        model, info = fit_rbf(X, y, train_config(lam=0.0), LR)
        assert accuracy(rbf_forward_batch(model, X)[0], y) == 1.0
        assert info['loss_final'] <= info['loss_init']

    def test_gradient_descent_with_halving(self, blobs):
        X, y = blobs
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter('always')
            _, info = fit_enn(X, y, train_config(optimizer='gd', epochs=50),
                              LearningRateConfig(lr_init=5.0))
        assert info['loss_final'] <= info['loss_init']
        assert not [w for w in caught if 'requires_grad' in str(w.message)]

    def test_strong_penalty_means_ignorance(self, blobs):
        X, y = blobs
        model, _ = fit_enn(X, y, train_config(lam=10.0), LR)
        assert enn_forward_batch(model, X)[:, -1].mean() > 0.9

    def test_penalty_raises_rbf_ignorance(self, blobs):
        X, y = blobs
        weak, _ = fit_rbf(X, y, train_config(lam=0.0), LR)
        strong, _ = fit_rbf(X, y, train_config(lam=10.0), LR)
        omega_weak = rbf_forward_batch(weak, X)[0][:, 2].mean()
        omega_strong = rbf_forward_batch(strong, X)[0][:, 2].mean()
        assert omega_strong > omega_weak

    def test_deterministic(self, blobs):
        X, y = blobs
        a, _ = fit_enn(X, y, train_config(epochs=20), LR)
        b, _ = fit_enn(X, y, train_config(epochs=20), LR)
        assert np.array_equal(a.prototypes, b.prototypes)
        assert np.array_equal(a.u, b.u)

    def test_rbf_rejects_three_classes(self, three_blobs):
        X, y = three_blobs
        with pytest.raises(ValidationError):
            fit_rbf(X, y, train_config(epochs=1))

    def test_dice_objective(self, blobs):
        X, y = blobs
        model, info = fit_enn(X, y, train_config(loss='dice', lam=0.0), LR)
        assert info['loss_final'] < info['loss_init']
        assert accuracy(enn_forward_batch(model, X), y) >= 0.9


class TestInit:
    def test_one_prototype_per_point(self):
        X = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 0.0]])
        out = init_prototypes(X, 3, 'random', seed=0)
        assert np.array_equal(out, X)
        out = init_prototypes(X, 3, 'kmeans', seed=0)
        assert sorted(map(tuple, out)) == sorted(map(tuple, X))

    def test_kmeans_finds_blob_means(self, three_blobs):
        X, _ = three_blobs
        out = init_prototypes(X, 3, 'kmeans', seed=0)
        centers = np.array([[0.0, 0.0], [6.0, 0.0], [3.0, 5.0]])
        dists = np.linalg.norm(out[:, None, :] - centers[None], axis=-1)
        assert np.all(dists.min(axis=0) < 0.3)

    def test_deterministic(self, three_blobs):
        X, _ = three_blobs
        for method in ('random', 'kmeans'):
            a = init_prototypes(X, 5, method, seed=3)
            b = init_prototypes(X, 5, method, seed=3)
            assert np.array_equal(a, b)

    def test_bad_requests(self):
        with pytest.raises(ValidationError):
            init_prototypes(np.zeros((2, 2)), 3)
        with pytest.raises(ValidationError):
            init_prototypes(np.zeros((4, 2)), 2, 'grid')


class TestPersistence:
    def test_model_roundtrip(self, tmp_path, blobs):
        X, y = blobs
        model, _ = fit_rbf(X, y, train_config(epochs=10), LR)
        fpath = tmp_path / 'rbf.json'
        save_model(model, fpath)
        loaded = load_model(fpath)
        assert isinstance(loaded, RbfModel)
        assert predict_masses(loaded, X[:5]) == predict_masses(model, X[:5])

    def test_eknn_model_roundtrip(self, tmp_path, blobs):
        X, y = blobs
        model = eknn_fit(X, y, EknnConfig(K=3, gamma=0.5))
        fpath = tmp_path / 'eknn.json'
        save_model(model, fpath)
        assert predict_masses(load_model(fpath), X[:3]) == predict_masses(
            model, X[:3]
        )

    def test_not_a_model(self, tmp_path):
        fpath = tmp_path / 'bad.json'
        fpath.write_text('{"kind": "svm"}\n')
        with pytest.raises(ValidationError):
            load_model(fpath)

    def test_feature_file(self, tmp_path, blobs):
        X, y = blobs
        fpath = tmp_path / 'blobs.csv'
        save_features(fpath, X, y)
        X2, y2 = load_features(fpath)
        assert np.array_equal(X, X2)
        assert np.array_equal(y, y2)


class TestBananas:
    def test_banana_data(self):
        X, y = banana_data(101, seed=0)
        assert X.shape == (101, 2)
        assert np.sum(y == 0) == 51
        blob = off_manifold_blob(30, seed=0)
        assert np.allclose(blob.mean(axis=0), [2.5, 1.5], atol=0.15)

    def test_summary_and_rank_correlation(self):
        cells = pd.DataFrame({
            'model': ['enn'] * 6,
            'lam': [0.1, 0.1, 1.0, 1.0, 10.0, 10.0],
            'seed': [0, 1] * 3,
            'train_error': np.zeros(6),
            'test_error': np.zeros(6),
            'omega_train': np.linspace(0.1, 0.6, 6),
            'omega_test': [0.1, 0.2, 0.3, 0.4, 0.5, 0.6],
            'omega_off': np.ones(6),
            'off_ratio': np.ones(6),
        })
        summary = summarize_sweep(cells)
        assert summary['omega_test'].tolist() == pytest.approx([0.15, 0.35,
                                                                0.55])
        assert rank_correlations(summary) == {'enn': pytest.approx(1.0)}

    @pytest.mark.slow
    def test_ignorance_grows_with_lambda(self):
        cells = run_sweep(BananaConfig(), TrainConfig(), seed=12345)
        summary = summarize_sweep(cells)
        for kind, rho in rank_correlations(summary).items():
            assert rho >= 0.9, kind
        small = summary[summary['lam'] == 1e-3].set_index('model')
        assert np.all(small['test_error'] <= 0.12)
        errors = small['test_error']
        assert abs(errors['enn'] - errors['rbf']) <= 0.03
        assert np.all(small['off_ratio'] >= 2.0)
