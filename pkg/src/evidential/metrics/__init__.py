"""
evidential/metrics/__init__.py

Overlap, boundary and calibration metrics, and array versions of the
training losses.
"""
from __future__ import absolute_import, annotations, division, print_function

from evidential.metrics.calibration import (  # noqa:F401
    bin_indices,
    ece,
    reliability_table,
)
from evidential.metrics.losses import (  # noqa:F401
    consistency_loss,
    dice_loss_binary,
    dice_loss_multiclass,
    lr_schedule,
    model_regularizer,
)
from evidential.metrics.overlap import (  # noqa:F401
    Confusion,
    Overlap,
    confusion_counts,
    hausdorff,
    mask_points,
    overlap_metrics,
    permutation_accuracy,
    specificity,
)
