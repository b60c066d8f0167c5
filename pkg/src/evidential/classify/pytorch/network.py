"""
network.py

Prototype-based evidential networks in pytorch.

Both networks measure squared distances from the inputs to I prototypes
and turn them into activations s_i = α_i exp(-γ_i d_i²) (α_i = 1 for RBF).

  - `EnnNetwork`: each prototype is a simple mass on its class memberships
    u_i; the I masses are combined by Dempster's rule. Output columns are
    m({ω_1}), ..., m({ω_C}), m(Ω).
  - `RbfNetwork` (C = 2): w_i = s_i v_i are weights of evidence for ω_1
    (w_i > 0) or ω_2 (w_i < 0). Output columns are m({ω_1}), m({ω_2}), m(Ω).

Constrained parameters live in unconstrained form: α = sigmoid(η),
γ = exp(ξ), u_i = β_i² / Σ_c β_ic².
"""
from __future__ import absolute_import, annotations, division, print_function
import logging
from typing import Optional

import numpy as np
import torch
from torch import nn

log = logging.getLogger(__name__)

Tensor = torch.Tensor
DTYPE = torch.float64


def as_tensor(x) -> Tensor:
    return torch.as_tensor(np.asarray(x), dtype=DTYPE)


def sq_distances(x: Tensor, prototypes: Tensor) -> Tensor:
    """N x I squared Euclidean distances (smooth at zero distance)."""
    return ((x[:, None, :] - prototypes[None, :, :]) ** 2).sum(-1)


def normalize_memberships(beta: Tensor) -> Tensor:
    sq = beta ** 2
    return sq / sq.sum(-1, keepdim=True)


def enn_masses(
        x: Tensor,
        prototypes: Tensor,
        alpha: Tensor,
        gamma: Tensor,
        u: Tensor,
) -> Tensor:
    """Dempster combination of the I prototype masses, N x (C + 1).

    With focal sets restricted to singletons and Ω, the unnormalized
    combination is m(Ω) = Π_i (1 - s_i) and
    m({ω_c}) = Π_i (1 - s_i + u_ic s_i) - Π_i (1 - s_i).
    """
    s = alpha[None, :] * torch.exp(-gamma[None, :] * sq_distances(x, prototypes))
    ignorance = torch.prod(1.0 - s, dim=1)
    common = 1.0 - s[:, :, None] + u[None, :, :] * s[:, :, None]
    singles = torch.clamp_min(torch.prod(common, dim=1) - ignorance[:, None], 0.0)
    unnormalized = torch.cat([singles, ignorance[:, None]], dim=1)
    return unnormalized / unnormalized.sum(dim=1, keepdim=True)


def rbf_weights(
        x: Tensor,
        prototypes: Tensor,
        gamma: Tensor,
        v: Tensor,
) -> Tensor:
    """N x I weights of evidence w_i = exp(-γ_i d_i²) v_i."""
    return torch.exp(-gamma[None, :] * sq_distances(x, prototypes)) * v[None, :]


def rbf_masses(w: Tensor) -> Tensor:
    """{ω_1}^{w+} ⊕ {ω_2}^{w-}, N x 3, with w+ / w- the positive / negative
    parts of the weights summed over prototypes."""
    wpos = torch.clamp_min(w, 0.0).sum(dim=1)
    wneg = torch.clamp_min(-w, 0.0).sum(dim=1)
    a = torch.exp(-wpos)
    b = torch.exp(-wneg)
    support_pos = -torch.expm1(-wpos)
    support_neg = -torch.expm1(-wneg)
    keep = a + b - a * b
    return torch.stack([
        support_pos * b / keep,
        support_neg * a / keep,
        a * b / keep,
    ], dim=1)


def masses_to_betp(masses: Tensor) -> Tensor:
    """Pignistic probabilities of a singletons + Ω mass matrix."""
    nclasses = masses.shape[1] - 1
    return masses[:, :nclasses] + masses[:, nclasses:] / nclasses


class EnnNetwork(nn.Module):
    def __init__(
            self,
            prototypes: np.ndarray,
            nclasses: int,
            alpha: Optional[np.ndarray] = None,
            gamma: Optional[np.ndarray] = None,
            u: Optional[np.ndarray] = None,
            generator: Optional[torch.Generator] = None,
    ):
        super().__init__()
        prototypes = as_tensor(prototypes)
        nproto = prototypes.shape[0]
        alpha = as_tensor(np.full(nproto, 0.5) if alpha is None else alpha)
        gamma = as_tensor(np.ones(nproto) if gamma is None else gamma)
        if u is None:
            u = torch.rand(nproto, nclasses, generator=generator, dtype=DTYPE)
            u = u / u.sum(dim=1, keepdim=True)
        else:
            u = as_tensor(u)
        self.nclasses = nclasses
        self.prototypes = nn.Parameter(prototypes.clone())
        self.eta = nn.Parameter(torch.logit(alpha))
        self.xi = nn.Parameter(torch.log(gamma))
        self.beta = nn.Parameter(torch.sqrt(u))

    @property
    def alpha(self) -> Tensor:
        return torch.sigmoid(self.eta)

    @property
    def gamma(self) -> Tensor:
        return torch.exp(self.xi)

    @property
    def u(self) -> Tensor:
        return normalize_memberships(self.beta)

    def forward(self, x: Tensor) -> Tensor:
        return enn_masses(x, self.prototypes, self.alpha, self.gamma, self.u)

    def betp(self, x: Tensor) -> Tensor:
        return masses_to_betp(self(x))

    def penalty(self, x: Optional[Tensor] = None) -> Tensor:
        """Σ_i α_i."""
        return self.alpha.sum()


class RbfNetwork(nn.Module):
    nclasses = 2

    def __init__(
            self,
            prototypes: np.ndarray,
            gamma: Optional[np.ndarray] = None,
            v: Optional[np.ndarray] = None,
            generator: Optional[torch.Generator] = None,
    ):
        super().__init__()
        prototypes = as_tensor(prototypes)
        nproto = prototypes.shape[0]
        gamma = as_tensor(np.ones(nproto) if gamma is None else gamma)
        if v is None:
            v = 0.1 * torch.randn(nproto, generator=generator, dtype=DTYPE)
        else:
            v = as_tensor(v)
        self.prototypes = nn.Parameter(prototypes.clone())
        self.xi = nn.Parameter(torch.log(gamma))
        self.v = nn.Parameter(v.clone())

    @property
    def gamma(self) -> Tensor:
        return torch.exp(self.xi)

    def weights(self, x: Tensor) -> Tensor:
        return rbf_weights(x, self.prototypes, self.gamma, self.v)

    def logits(self, x: Tensor) -> Tensor:
        """log-odds of ω_1: p = sigmoid(Σ_i w_i)."""
        return self.weights(x).sum(dim=1)

    def forward(self, x: Tensor) -> Tensor:
        return rbf_masses(self.weights(x))

    def betp(self, x: Tensor) -> Tensor:
        return masses_to_betp(self(x))

    def penalty(self, x: Optional[Tensor] = None) -> Tensor:
        """Mean over instances of Σ_i w_i², or Σ_i v_i² without inputs."""
        if x is None:
            return (self.v ** 2).sum()
        return (self.weights(x) ** 2).sum(dim=1).mean()
