"""
membership.py

Mass functions built from confidence factors and membership values:
BFOD, Zhu's triangle-overlap model and the ratio of membership values.
"""
from __future__ import absolute_import, annotations, division, print_function
from enum import Enum
import logging
import math
from typing import Optional

from evidential.bba.likelihood import binary_frame
from evidential.core.frame import Frame
from evidential.core.mass import MassFunction, normalized_from
from evidential.errors import NonNormalizable, ValidationError


log = logging.getLogger(__name__)

TOL = 1e-12
ZHU_MAX_OVERLAP = 0.125


class UncertaintyCategory(str, Enum):
    NU = 'NU'  # no uncertainty
    SU = 'SU'  # small uncertainty
    PU = 'PU'  # pure uncertainty


def _unit(name: str, value: float) -> float:
    if not 0.0 <= value <= 1.0:
        raise ValidationError(f'{name} must be in [0, 1], got {value}')
    return float(value)


def sigmoid_cf(v: float, midpoint: float = 0.5, slope: float = 10.0) -> float:
    return 1.0 / (1.0 + math.exp(-slope * (v - midpoint)))


def one_sided_gaussian_cf(
        v: float,
        center: float = 1.0,
        width: float = 0.25,
) -> float:
    """1 at and above `center`, Gaussian decay below it."""
    if width <= 0:
        raise ValidationError(f'width must be > 0, got {width}')
    if v >= center:
        return 1.0
    return math.exp(-0.5 * ((v - center) / width) ** 2)


def bfod(
        cf: float,
        A: float,
        B: float,
        frame: Optional[Frame] = None,
) -> MassFunction:
    """Confidence factor → {ω, ¬ω} masses, linear in cf and clamped at zero.

    `A` is where m({ω}) leaves zero and `B` the largest singleton mass.
    """
    cf = _unit('cf', cf)
    if not 0.0 <= A < 1.0:
        raise ValidationError(f'A must be in [0, 1), got {A}')
    if not 0.0 < B <= 1.0:
        raise ValidationError(f'B must be in (0, 1], got {B}')
    m_for = max(0.0, B * (cf - A) / (1.0 - A))
    m_against = max(0.0, B * (1.0 - A - cf) / (1.0 - A))
    m_omega = 1.0 - m_for - m_against
    if m_omega < -TOL:
        raise NonNormalizable(f'm(Ω) = {m_omega!r} < 0')
    frame = binary_frame() if frame is None else frame
    return MassFunction(frame, {
        frame.singleton(0): m_for,
        frame.singleton(1): m_against,
        frame.omega: max(m_omega, 0.0),
    })


def zhu_overlap(v_c: float, v_next: float) -> float:
    """Overlap area of the two triangular membership functions.

    Apexes of heights `v_c`, `v_next` one gray level apart, bases of width 2.
    """
    total = v_c + v_next
    if total == 0.0:
        return 0.0
    return v_c * v_next / (2.0 * total)


def zhu_raw_masses(
        v_c: float,
        v_next: float,
        eps: float = 0.1,
) -> dict[str, float]:
    """Masses before renormalization, keyed 'c', 'next' and 'pair'."""
    v_c = _unit('v_c', v_c)
    v_next = _unit('v_next', v_next)
    if eps < 0:
        raise ValidationError(f'eps must be >= 0, got {eps}')
    pair = 0.0
    if abs(v_c - v_next) < eps:
        pair = zhu_overlap(v_c, v_next) / (2.0 * ZHU_MAX_OVERLAP)
    return {'c': v_c, 'next': v_next, 'pair': pair}


def zhu_mass(
        v_c: float,
        v_next: float,
        eps: float = 0.1,
        frame: Optional[Frame] = None,
) -> MassFunction:
    raw = zhu_raw_masses(v_c, v_next, eps)
    frame = Frame(('c', 'next')) if frame is None else frame
    return normalized_from(frame, {
        frame.singleton(0): raw['c'],
        frame.singleton(1): raw['next'],
        frame.omega: raw['pair'],
    })


def ratio_mv_raw(
        f1: float,
        f2: float,
        alpha: float = 1.5,
        beta: float = 3.0,
) -> tuple[UncertaintyCategory, dict[str, float]]:
    """Category and masses before renormalization, keyed 'w1', 'w2', 'omega'.

    RMV = max/min; RMV = β counts as SU and RMV = α as PU.
    """
    f1 = _unit('f1', f1)
    f2 = _unit('f2', f2)
    if f1 == 0.0 and f2 == 0.0:
        raise ValidationError('Membership values are both zero')
    if not 1.0 <= alpha < beta:
        raise ValidationError(f'Need 1 <= alpha < beta, got {alpha}, {beta}')
    lo, hi = min(f1, f2), max(f1, f2)
    rmv = math.inf if lo == 0.0 else hi / lo
    if rmv > beta:
        return UncertaintyCategory.NU, {'w1': f1, 'w2': f2, 'omega': 0.0}
    if rmv > alpha:
        lam = abs(f1 - f2) / (beta - alpha)
        masses = {'w1': f1 - lam / 2.0, 'w2': f2 - lam / 2.0, 'omega': lam}
        if min(masses.values()) < 0.0:
            raise NonNormalizable(f'Negative ratio-MV mass: {masses}')
        return UncertaintyCategory.SU, masses
    share = (f1 + f2) / 3.0
    return UncertaintyCategory.PU, {'w1': share, 'w2': share, 'omega': share}


def ratio_mv(
        f1: float,
        f2: float,
        alpha: float = 1.5,
        beta: float = 3.0,
        frame: Optional[Frame] = None,
) -> tuple[UncertaintyCategory, MassFunction]:
    category, raw = ratio_mv_raw(f1, f2, alpha, beta)
    frame = Frame.indexed(2) if frame is None else frame
    return category, normalized_from(frame, {
        frame.singleton(0): raw['w1'],
        frame.singleton(1): raw['w2'],
        frame.omega: raw['omega'],
    })
