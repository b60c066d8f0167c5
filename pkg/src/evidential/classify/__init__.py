"""
evidential/classify/__init__.py

Evidential classifiers: EKNN, ENN and the binary RBF weights-of-evidence
model.
"""
from __future__ import absolute_import, annotations, division, print_function

from evidential.classify.data import (  # noqa:F401
    banana_data,
    load_features,
    off_manifold_blob,
    save_features,
    two_blobs,
)
from evidential.classify.eknn import (  # noqa:F401
    eknn_predict,
    eknn_predict_batch,
    fit_gamma,
)
from evidential.classify.init import (  # noqa:F401
    init_prototypes,
    kmeans_prototype_init,
    random_prototype_init,
)
from evidential.classify.models import (  # noqa:F401
    EknnModel,
    EnnModel,
    RbfModel,
    eknn_fit,
    enn_forward,
    enn_forward_batch,
    enn_train,
    fit_enn,
    fit_rbf,
    load_model,
    predict_masses,
    rbf_forward,
    rbf_forward_batch,
    rbf_train,
    save_model,
)
