"""
test_fusion.py

Probability / mass fusion, contextual discounting and reliability fitting.
"""
from __future__ import absolute_import, annotations, division, print_function

import warnings

import numpy as np
import pytest
import torch

from evidential.configs import FusionConfig
from evidential.core.frame import Frame
from evidential.core.mass import ContourFunction, mass_from_assignments, vacuous
from evidential.errors import (
    FrameMismatch,
    ShapeMismatch,
    ValidationError,
    ZeroDenominator,
)
from evidential.fusion.contour import (
    ReliabilityVector,
    contextual_discount_contour,
    fuse_discounted_batch,
    fuse_discounted_sources,
    fuse_prob_mass,
    read_reliability_table,
    reliability_table,
    write_reliability_table,
)
from evidential.fusion.pytorch.reliability import fit_reliability, fuse_contours

AB = Frame(('a', 'b'))
ABC = Frame(('a', 'b', 'c'))


def labeled_sources(n: int = 40, seed: int = 0):
    """A reliable source and one that always names the other class."""
    rng = np.random.default_rng(seed)
    y = rng.integers(0, 2, size=n)
    good = 0.1 + 0.9 * np.eye(2)[y]
    bad = 0.1 + 0.9 * np.eye(2)[1 - y]
    return np.stack([good, bad]), y


class TestProbMass:
    def test_vacuous_returns_probability(self):
        p = np.array([0.3, 0.7])
        out = fuse_prob_mass(p, vacuous(AB))
        assert out is not p
        assert np.array_equal(out, p)

    def test_partial_support(self):
        m = mass_from_assignments(AB, [('a', 0.5), ('a|b', 0.5)])
        out = fuse_prob_mass([0.5, 0.5], m)
        assert out == pytest.approx([2.0 / 3.0, 1.0 / 3.0])

    def test_result_is_probability(self):
        m = mass_from_assignments(ABC, [('a', 0.2), ('c', 0.3),
                                        ('a|b|c', 0.5)])
        out = fuse_prob_mass([0.2, 0.5, 0.3], m)
        assert out.sum() == pytest.approx(1.0)
        assert np.all(out >= 0)

    def test_rejects_other_focal_sets(self):
        m = mass_from_assignments(ABC, [('a|b', 1.0)])
        with pytest.raises(ValidationError):
            fuse_prob_mass([0.2, 0.5, 0.3], m)

    def test_disjoint_supports(self):
        m = mass_from_assignments(AB, [('b', 1.0)])
        with pytest.raises(ZeroDenominator):
            fuse_prob_mass([1.0, 0.0], m)

    def test_not_a_probability(self):
        with pytest.raises(ValidationError):
            fuse_prob_mass([0.6, 0.6], vacuous(AB))


class TestContextualDiscount:
    pl = ContourFunction(ABC, np.array([1.0, 0.4, 0.1]))

    def test_fully_unreliable_source(self):
        out = contextual_discount_contour(self.pl, [0.0, 0.0, 0.0])
        assert np.array_equal(out.values, np.ones(3))

    def test_fully_reliable_source(self):
        out = contextual_discount_contour(self.pl, ReliabilityVector.full(3, 1.0))
        assert np.allclose(out.values, self.pl.values)

    def test_per_class(self):
        out = contextual_discount_contour(self.pl, [1.0, 0.5, 0.0])
        assert np.allclose(out.values, [1.0, 0.7, 1.0])

    def test_bad_reliability(self):
        with pytest.raises(ValidationError):
            ReliabilityVector([0.5, 1.2])
        with pytest.raises(ShapeMismatch):
            contextual_discount_contour(self.pl, [0.5, 0.5])

    def test_zero_reliability_source_is_ignored(self):
        other = ContourFunction(ABC, np.array([0.0, 1.0, 0.3]))
        fused = fuse_discounted_sources([self.pl, other],
                                        [[1.0, 1.0, 1.0], [0.0, 0.0, 0.0]])
        assert fused == pytest.approx(self.pl.values / self.pl.values.sum())

    def test_no_common_support(self):
        one = ContourFunction(AB, np.array([1.0, 0.0]))
        two = ContourFunction(AB, np.array([0.0, 1.0]))
        with pytest.raises(ZeroDenominator):
            fuse_discounted_sources([one, two], [[1.0, 1.0], [1.0, 1.0]])

    def test_frames_must_match(self):
        other = ContourFunction(Frame(('x', 'y', 'z')), np.ones(3))
        with pytest.raises(FrameMismatch):
            fuse_discounted_sources([self.pl, other], [[1.0] * 3, [1.0] * 3])

    def test_batch_matches_single(self):
        rng = np.random.default_rng(2)
        pls = rng.uniform(0.05, 1.0, size=(3, 10, 3))
        betas = rng.uniform(0.0, 1.0, size=(3, 3))
        batch = fuse_discounted_batch(pls, betas)
        for n in range(10):
            single = fuse_discounted_sources(
                [ContourFunction(ABC, pls[t, n]) for t in range(3)], betas
            )
            assert batch[n] == pytest.approx(single)
        torched = fuse_contours(torch.as_tensor(pls), torch.as_tensor(betas))
        assert np.allclose(torched.numpy(), batch)


class TestReliabilityTable:
    def test_write_read(self, tmp_path):
        df = reliability_table([[0.25, 1.0], [0.0, 0.5]], AB, ['cnn', 'svm'])
        fpath = tmp_path / 'beta.csv'
        write_reliability_table(df, fpath)
        back = read_reliability_table(fpath, ['b', 'a'])
        assert list(back.columns) == ['b', 'a']
        assert back.loc['cnn', 'a'] == 0.25
        assert back.loc['svm'].tolist() == [0.5, 0.0]

    def test_wrong_labels(self, tmp_path):
        fpath = tmp_path / 'beta.csv'
        write_reliability_table(reliability_table([[0.5, 0.5]], AB), fpath)
        with pytest.raises(FrameMismatch):
            read_reliability_table(fpath, ['a', 'c'])

    def test_name_count(self):
        with pytest.raises(ShapeMismatch):
            reliability_table([[0.5, 0.5]], AB, ['one', 'two'])


class TestFitReliability:
    def test_learns_which_source_to_trust(self):
        sources, y = labeled_sources()
        betas, info = fit_reliability(sources, y, FusionConfig(epochs=300))
        assert betas.shape == (2, 2)
        assert np.all(betas[0] > 0.9)
        assert np.all(betas[1] < 0.1)
        assert info['loss_final'] < info['loss_init']

    def test_loss_never_increases(self):
        sources, y = labeled_sources(seed=3)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter('always')
            _, info = fit_reliability(sources, y,
                                     FusionConfig(epochs=5, lr=5.0))
        assert info['loss_final'] <= info['loss_init']
        assert not [w for w in caught if 'requires_grad' in str(w.message)]

    def test_identical_sources_get_equal_reliability(self):
        sources, y = labeled_sources(seed=1)
        same = np.stack([sources[0], sources[0]])
        betas, _ = fit_reliability(same, y, FusionConfig(epochs=50))
        assert np.allclose(betas[0], betas[1])

    def test_label_checks(self):
        sources, y = labeled_sources(n=6)
        with pytest.raises(ShapeMismatch):
            fit_reliability(sources, y[:-1])
        with pytest.raises(ValidationError):
            fit_reliability(sources, np.full(6, 2))
