"""
evidential/__init__.py

Belief-function toolkit. The mass-function algebra is re-exported here;
classifiers, clustering and fusion live in their subpackages.
"""
from __future__ import absolute_import, annotations, division, print_function

from evidential.core import (  # noqa:F401
    Frame,
    MassFunction,
    combine_dempster,
    mass_from_assignments,
    pignistic,
)
from evidential.errors import EvidentialError, ValidationError  # noqa:F401

__version__ = '0.1.0'
