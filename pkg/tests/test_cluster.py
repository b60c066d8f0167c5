"""
test_cluster.py

Fuzzy c-means, evidential c-means and credal partitions.
"""
from __future__ import absolute_import, annotations, division, print_function

import numpy as np
import pytest

from evidential.classify.data import two_blobs
from evidential.cluster.credal import (
    credal_from_rows,
    credal_to_mass,
    focal_structure,
)
from evidential.cluster.ecm import ecm_fit, ecm_masses, ecm_objective
from evidential.cluster.fcm import fcm_fit, fcm_memberships
from evidential.configs import EcmConfig, FcmConfig
from evidential.core.frame import Frame
from evidential.errors import AllMassEmpty, SumNotOne, ValidationError
from evidential.metrics.overlap import permutation_accuracy

AB = Frame(('a', 'b'))


class TestCredalPartition:
    def setup_method(self):
        self.focal = focal_structure(2)
        self.partition = credal_from_rows(
            AB, self.focal,
            [[0.0, 0.0, 0.0],
             [0.0, 0.0, 1.0],
             [1.0, 0.0, 0.0],
             [0.5, 0.3, 0.2]],
            empty=[1.0, 0.0, 0.0, 0.0],
        )

    def test_focal_structure(self):
        assert [AB.key(f) for f in self.focal] == ['a', 'b', 'a|b']
        assert len(focal_structure(3, pairs=True)) == 7
        assert len(focal_structure(3)) == 4

    def test_outlier(self):
        with pytest.raises(AllMassEmpty):
            credal_to_mass(self.partition, 0)

    def test_unknown_and_certain(self):
        assert credal_to_mass(self.partition, 1).is_vacuous()
        assert credal_to_mass(self.partition, 2)['a'] == 1.0

    def test_betp(self):
        betp = self.partition.betp()
        assert np.allclose(betp[0], 0.0)
        assert np.allclose(betp[3], [0.6, 0.4])
        assert self.partition.pignistic_labels()[3] == 0
        assert self.partition.hard_labels().tolist() == [0, 2, 0, 0]

    def test_rows_must_sum_to_one(self):
        with pytest.raises(SumNotOne):
            credal_from_rows(AB, self.focal, [[0.5, 0.3, 0.1]], empty=[0.0])

    def test_to_frame(self):
        df = self.partition.to_frame()
        assert list(df.columns) == ['empty', 'a', 'b', 'a|b']


class TestFcm:
    def test_single_cluster(self):
        X = np.random.default_rng(1).standard_normal((20, 2))
        fp = fcm_fit(X, 1, seed=0)
        assert np.allclose(fp.memberships, 1.0)
        assert np.allclose(fp.centers[0], X.mean(axis=0))

    def test_equidistant_point(self):
        u = fcm_memberships(np.array([[1.0, 0.0]]),
                            np.array([[0.0, 0.0], [2.0, 0.0]]))
        assert np.allclose(u, 0.5)

    def test_point_on_center(self):
        u = fcm_memberships(np.array([[0.0, 0.0]]),
                            np.array([[0.0, 0.0], [2.0, 0.0]]))
        assert u.tolist() == [[1.0, 0.0]]

    def test_separated_blobs(self):
        X, y = two_blobs(200, seed=3, separation=8.0, std=0.5)
        config = FcmConfig(nclusters=2, seed=0, check_monotone=True)
        fp = fcm_fit(X, 2, config=config)
        assert fp.converged
        assert permutation_accuracy(fp.labels(), y) >= 0.95
        assert np.mean(fp.memberships.max(axis=1) > 0.9) >= 0.95

    def test_objective_non_increasing(self):
        X, _ = two_blobs(100, seed=5, separation=2.0)
        fp = fcm_fit(X, 3, seed=2)
        diffs = np.diff(fp.objective)
        assert np.all(diffs <= 1e-9 * max(1.0, fp.objective[0]))

    def test_deterministic(self):
        X, _ = two_blobs(60, seed=4)
        a = fcm_fit(X, 2, seed=11)
        b = fcm_fit(X, 2, seed=11)
        assert np.array_equal(a.memberships, b.memberships)

    def test_too_many_clusters(self):
        with pytest.raises(ValidationError):
            fcm_fit(np.zeros((2, 2)), 3)


class TestEcm:
    def test_three_blobs(self, three_blobs):
        X, y = three_blobs
        partition, prototypes = ecm_fit(
            X, EcmConfig(nclusters=3, pairs=True, seed=0)
        )
        assert prototypes.shape == (3, 2)
        assert permutation_accuracy(partition.pignistic_labels(), y) >= 0.95
        assert len(partition.focal) == 7

    def test_deterministic(self, three_blobs):
        X, _ = three_blobs
        config = EcmConfig(nclusters=3, seed=7)
        p1, v1 = ecm_fit(X, config)
        p2, v2 = ecm_fit(X, config)
        assert np.array_equal(p1.masses, p2.masses)
        assert np.array_equal(v1, v2)

    def test_object_on_prototype(self):
        prototypes = np.array([[0.0, 0.0], [5.0, 0.0], [0.0, 5.0]])
        focal = focal_structure(3, pairs=True)
        masses, empty = ecm_masses(prototypes[:1], prototypes, focal)
        assert np.argmax(masses[0]) == 0
        assert empty[0] == pytest.approx(0.0)

    def test_midpoint_favors_pair(self):
        prototypes = np.array([[0.0, 0.0], [2.0, 0.0], [1.0, 10.0]])
        focal = focal_structure(3, pairs=True)
        keys = [Frame.indexed(3).key(f) for f in focal]
        masses, _ = ecm_masses(np.array([[1.0, 0.3]]), prototypes, focal,
                               delta=100.0)
        row = dict(zip(keys, masses[0]))
        assert row['w1|w2'] > row['w1']
        assert row['w1|w2'] > row['w2']

    def test_far_object_goes_to_empty_set(self):
        prototypes = np.array([[0.0, 0.0], [2.0, 0.0]])
        focal = focal_structure(2)
        _, empty = ecm_masses(np.array([[1000.0, 1000.0]]), prototypes,
                              focal, delta=1.0)
        assert empty[0] > 0.99

    def test_objective_decreases(self, three_blobs):
        X, _ = three_blobs
        focal = focal_structure(3)
        start = X[[0, 50, 100]] + 1.0
        masses, empty = ecm_masses(X, start, focal)
        before = ecm_objective(X, start, focal, masses, empty)
        partition, prototypes = ecm_fit(X, EcmConfig(nclusters=3, pairs=False),
                                        init=start)
        after = ecm_objective(X, prototypes, focal, partition.masses,
                              partition.empty_mass)
        assert after <= before
