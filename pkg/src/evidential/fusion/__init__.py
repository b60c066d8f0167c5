"""
evidential/fusion/__init__.py

Probability-mass fusion and contextual-discount fusion of contours.
"""
from __future__ import absolute_import, annotations, division, print_function

from evidential.fusion.contour import (  # noqa:F401
    ReliabilityVector,
    contextual_discount_contour,
    fuse_discounted_batch,
    fuse_discounted_sources,
    fuse_prob_mass,
    read_reliability_table,
    reliability_table,
    write_reliability_table,
)
from evidential.fusion.pytorch.reliability import (  # noqa:F401
    fit_reliability,
    fuse_contours,
)
