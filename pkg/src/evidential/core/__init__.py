"""
evidential/core/__init__.py

Frames, mass-function algebra and the interchange format.
"""
from __future__ import absolute_import, annotations, division, print_function

from evidential.core.frame import EMPTY, FocalSet, Frame  # noqa:F401
from evidential.core.mass import (  # noqa:F401
    ContourFunction,
    MassFunction,
    SimpleMass,
    belief,
    combine_all,
    combine_contour,
    combine_dempster,
    combine_simple,
    commonality,
    consonant_from_contour,
    contour,
    discount,
    mass_from_assignments,
    normalized_from,
    pignistic,
    plausibility,
    vacuous,
)
from evidential.core.io import (  # noqa:F401
    dumps,
    load_masses,
    loads,
    mass_from_dict,
    mass_to_dict,
    save_masses,
)
