"""
evidential/decide/__init__.py

Decision rules on mass functions.
"""
from __future__ import absolute_import, annotations, division, print_function

from evidential.decide.decision import (  # noqa:F401
    argmax_lowest,
    decide_max_plausibility,
    decide_pignistic,
    expected_utility_bounds,
)
