"""
evidential/bba/__init__.py

Basic belief assignment models.
"""
from __future__ import absolute_import, annotations, division, print_function

from evidential.bba.gaussian import (  # noqa:F401
    ClusterStats,
    cluster_stats,
    gd_mass,
    gd_values,
)
from evidential.bba.likelihood import (  # noqa:F401
    appriou1,
    appriou2,
    binary_frame,
    shafer_bba,
)
from evidential.bba.membership import (  # noqa:F401
    UncertaintyCategory,
    bfod,
    one_sided_gaussian_cf,
    ratio_mv,
    ratio_mv_raw,
    sigmoid_cf,
    zhu_mass,
    zhu_overlap,
    zhu_raw_masses,
)
