"""
evidential/cluster/__init__.py

Fuzzy and evidential c-means.
"""
from __future__ import absolute_import, annotations, division, print_function

from evidential.cluster.credal import (  # noqa:F401
    CredalPartition,
    credal_from_rows,
    credal_to_mass,
    focal_structure,
)
from evidential.cluster.ecm import (  # noqa:F401
    ecm_fit,
    ecm_masses,
    ecm_objective,
    focal_prototypes,
)
from evidential.cluster.fcm import (  # noqa:F401
    FuzzyPartition,
    fcm_fit,
    fcm_memberships,
    fcm_objective,
)
