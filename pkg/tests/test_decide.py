"""
test_decide.py
"""
from __future__ import absolute_import, annotations, division, print_function

import numpy as np
import pytest

from evidential.core.frame import Frame
from evidential.core.mass import MassFunction, mass_from_assignments, vacuous
from evidential.decide.decision import (
    argmax_lowest,
    decide_max_plausibility,
    decide_pignistic,
    expected_utility_bounds,
)
from evidential.errors import ShapeMismatch, ValidationError

ABC = Frame(('a', 'b', 'c'))


def example() -> MassFunction:
    return mass_from_assignments(ABC, [('a', 0.5), ('b|c', 0.3), ('a|b|c', 0.2)])


def test_expected_utility_bounds():
    lower, upper = expected_utility_bounds(example(), [1.0, 0.0, 2.0])
    assert lower == pytest.approx(0.5 * 1.0 + 0.3 * 0.0 + 0.2 * 0.0)
    assert upper == pytest.approx(0.5 * 1.0 + 0.3 * 2.0 + 0.2 * 2.0)


def test_bounds_of_several_acts():
    acts = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 1.0]])
    lower, upper = expected_utility_bounds(example(), acts)
    assert lower.tolist() == pytest.approx([0.5, 0.3])
    assert upper.tolist() == pytest.approx([0.7, 0.5])


def test_vacuous_bounds_are_utility_range():
    u = [3.0, -1.0, 0.5]
    assert expected_utility_bounds(vacuous(ABC), u) == (-1.0, 3.0)


def test_bayesian_bounds_coincide():
    m = mass_from_assignments(ABC, [('a', 0.2), ('b', 0.3), ('c', 0.5)])
    lower, upper = expected_utility_bounds(m, [1.0, 2.0, 4.0])
    assert lower == pytest.approx(upper)
    assert lower == pytest.approx(2.8)


@pytest.mark.parametrize('u', [[1.0, 2.0], [[1.0, 2.0, 3.0, 4.0]]])
def test_utility_shape(u):
    with pytest.raises(ShapeMismatch):
        expected_utility_bounds(example(), u)


def test_non_finite_utility():
    with pytest.raises(ValidationError):
        expected_utility_bounds(example(), [1.0, np.inf, 0.0])


def test_decisions():
    m = example()
    assert decide_pignistic(m) == 0
    m = mass_from_assignments(ABC, [('a', 0.4), ('b|c', 0.6)])
    # pl = (0.4, 0.6, 0.6)
    assert decide_max_plausibility(m) == 1
    assert decide_pignistic(m) == 0


def test_ties_go_to_lowest_index():
    assert argmax_lowest([0.2, 0.4, 0.4]) == 1
    assert decide_pignistic(vacuous(ABC)) == 0
    assert decide_max_plausibility(vacuous(ABC)) == 0
    assert argmax_lowest([1.0 / 3.0, 1.0 / 3.0 + 1e-15, 0.0]) == 0
