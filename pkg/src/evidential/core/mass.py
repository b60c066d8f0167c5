"""
mass.py

Contains mass functions, contour functions, simple mass functions and the
operations on them: belief / plausibility transforms, Dempster's rule and
classical discounting.
"""
from __future__ import absolute_import, annotations, division, print_function
from dataclasses import dataclass
from functools import reduce
import logging
import math
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence, Union

import numpy as np

from evidential.core.frame import EMPTY, FocalSet, Frame, SubsetLike
from evidential.errors import (
    EmptyFocal,
    NonNormalizable,
    SumNotOne,
    TotalConflict,
    ValidationError,
)


log = logging.getLogger(__name__)

SUM_TOL = 1e-9
EQ_TOL = 1e-9
CONFLICT_TOL = 1e-12

Entries = Union[Mapping[SubsetLike, float], Iterable[tuple[SubsetLike, float]]]


def _items(entries: Entries) -> Iterator[tuple[SubsetLike, float]]:
    if isinstance(entries, Mapping):
        return iter(entries.items())
    return iter(entries)


class MassFunction:
    """Normalized basic belief assignment on a frame.

    Only focal sets with positive mass are stored, in canonical order. Use
    `mass_from_assignments` (strict) or `normalized_from` (rescaling) to
    build one from user input.
    """
    __slots__ = ('frame', '_masses')

    def __init__(self, frame: Frame, masses: Mapping[FocalSet, float]):
        total = math.fsum(masses.values())
        if abs(total - 1.0) > SUM_TOL:
            raise SumNotOne(f'Masses sum to {total!r}, expected 1')
        kept = {}
        for focal in sorted(masses):
            value = float(masses[focal])
            if value < 0.0 or not math.isfinite(value):
                raise ValidationError(f'Invalid mass {value!r} on {focal}')
            frame.validate(focal)
            if focal.is_empty():
                if value > 0.0:
                    raise EmptyFocal(f'm(∅) = {value!r} > 0')
                continue
            if value > 0.0:
                kept[focal] = value
        self.frame = frame
        self._masses = MappingProxyType(kept)

    @property
    def masses(self) -> Mapping[FocalSet, float]:
        return self._masses

    @property
    def focal_sets(self) -> tuple[FocalSet, ...]:
        return tuple(self._masses)

    def items(self):
        return self._masses.items()

    def __getitem__(self, focal: SubsetLike) -> float:
        return self._masses.get(self.frame.subset(focal), 0.0)

    def __len__(self) -> int:
        return len(self._masses)

    def __iter__(self) -> Iterator[FocalSet]:
        return iter(self._masses)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MassFunction):
            return NotImplemented
        if self.frame != other.frame:
            return False
        keys = set(self._masses) | set(other._masses)
        return all(
            abs(self._masses.get(k, 0.0) - other._masses.get(k, 0.0)) <= EQ_TOL
            for k in keys
        )

    __hash__ = None  # type:ignore

    def __repr__(self) -> str:
        body = ', '.join(
            f'{self.frame.key(k)}: {v:.6g}' for k, v in self._masses.items()
        )
        return f'MassFunction({{{body}}})'

    def is_bayesian(self) -> bool:
        return all(f.is_singleton() for f in self._masses)

    def is_vacuous(self) -> bool:
        return tuple(self._masses) == (self.frame.omega,)

    def is_consonant(self) -> bool:
        focal = sorted(self._masses)
        return all(a.issubset(b) for a, b in zip(focal, focal[1:]))

    def is_simple(self) -> bool:
        """At most one focal set besides Ω."""
        return len([f for f in self._masses if f != self.frame.omega]) <= 1

    def core(self) -> FocalSet:
        return reduce(lambda a, b: a | b, self._masses, EMPTY)

    def to_vector(self) -> np.ndarray:
        """Dense vector indexed by subset bitmask (entry 0 is ∅)."""
        out = np.zeros(1 << self.frame.size)
        for focal, value in self._masses.items():
            out[focal.bits] = value
        return out


@dataclass(frozen=True, eq=False)
class ContourFunction:
    """Plausibilities of the singletons, pl(ω_c) for c = 1..C."""
    frame: Frame
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64).reshape(-1)
        if values.shape[0] != self.frame.size:
            raise ValidationError(
                f'Contour has {values.shape[0]} entries, frame has '
                f'{self.frame.size}'
            )
        if not np.all(np.isfinite(values)):
            raise ValidationError('Contour values must be finite')
        if np.any(values < -SUM_TOL) or np.any(values > 1.0 + SUM_TOL):
            raise ValidationError(f'Contour values outside [0, 1]: {values}')
        values = np.clip(values, 0.0, 1.0)
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    def __getitem__(self, c: int) -> float:
        return float(self.values[c])

    def __len__(self) -> int:
        return self.values.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ContourFunction):
            return NotImplemented
        return (self.frame == other.frame
                and bool(np.all(np.abs(self.values - other.values) <= EQ_TOL)))

    __hash__ = None  # type:ignore

    def normalized(self) -> np.ndarray:
        total = self.values.sum()
        if total <= 0.0:
            raise NonNormalizable('Contour is identically zero')
        return self.values / total


@dataclass(frozen=True)
class SimpleMass:
    """Simple mass function A^w: m(A) = 1 - exp(-w), m(Ω) = exp(-w)."""
    frame: Frame
    focal: FocalSet
    weight: float

    def __post_init__(self):
        self.frame.validate(self.focal)
        if self.focal.is_empty() or self.focal == self.frame.omega:
            raise ValidationError(
                'A simple mass needs a proper nonempty focal set'
            )
        if not self.weight >= 0.0:
            raise ValidationError(f'Weight of evidence must be >= 0: {self.weight}')

    @classmethod
    def from_support(cls, frame: Frame, focal: FocalSet, s: float) -> SimpleMass:
        if not 0.0 <= s < 1.0:
            raise ValidationError(f'Support must be in [0, 1): {s}')
        return cls(frame, focal, -math.log1p(-s))

    @property
    def support(self) -> float:
        return -math.expm1(-self.weight)

    def to_mass(self) -> MassFunction:
        s = self.support
        return MassFunction(self.frame, {self.focal: s, self.frame.omega: 1.0 - s})


def vacuous(frame: Frame) -> MassFunction:
    return MassFunction(frame, {frame.omega: 1.0})


def mass_from_assignments(frame: Frame, entries: Entries) -> MassFunction:
    """Strict constructor: masses must already sum to one.

    Duplicate focal sets are summed and zero entries dropped.
    """
    acc: dict[FocalSet, list[float]] = {}
    for item, value in _items(entries):
        focal = frame.subset(item)
        value = float(value)
        if value < 0.0:
            raise ValidationError(f'Negative mass {value!r} on {item!r}')
        acc.setdefault(focal, []).append(value)
    if not acc:
        raise ValidationError('No mass assignments given')
    return MassFunction(frame, {k: math.fsum(v) for k, v in acc.items()})


def normalized_from(frame: Frame, entries: Entries) -> MassFunction:
    """Drop any mass on ∅ and rescale the rest to sum to one."""
    acc: dict[FocalSet, list[float]] = {}
    for item, value in _items(entries):
        focal = frame.subset(item)
        value = float(value)
        if value < 0.0 or not math.isfinite(value):
            raise ValidationError(f'Invalid mass {value!r} on {item!r}')
        if not focal.is_empty():
            acc.setdefault(focal, []).append(value)
    sums = {k: math.fsum(v) for k, v in acc.items()}
    total = math.fsum(sums.values())
    if total <= 0.0:
        raise NonNormalizable('No mass left on nonempty focal sets')
    return MassFunction(frame, {k: v / total for k, v in sums.items()})


def belief(m: MassFunction, A: SubsetLike) -> float:
    """Bel(A) = Σ_{∅ ≠ B ⊆ A} m(B)."""
    focal = m.frame.subset(A)
    return math.fsum(v for B, v in m.items() if B.issubset(focal))


def plausibility(m: MassFunction, A: SubsetLike) -> float:
    """Pl(A) = Σ_{B ∩ A ≠ ∅} m(B)."""
    focal = m.frame.subset(A)
    return math.fsum(v for B, v in m.items() if B.bits & focal.bits)


def commonality(m: MassFunction, A: SubsetLike) -> float:
    focal = m.frame.subset(A)
    return math.fsum(v for B, v in m.items() if focal.issubset(B))


def contour(m: MassFunction) -> ContourFunction:
    return ContourFunction(m.frame, np.array([
        plausibility(m, FocalSet(1 << c)) for c in range(m.frame.size)
    ]))


def pignistic(m: MassFunction) -> np.ndarray:
    """BetP(ω) = Σ_{A ∋ ω} m(A) / |A|."""
    terms: list[list[float]] = [[] for _ in range(m.frame.size)]
    for focal, value in m.items():
        share = value / focal.size
        for c in focal.members:
            terms[c].append(share)
    return np.array([math.fsum(t) for t in terms])


def combine_dempster(
        m1: MassFunction,
        m2: MassFunction,
) -> tuple[MassFunction, float]:
    """Normalized orthogonal sum m1 ⊕ m2 and the degree of conflict κ.

    Products landing on the same subset are summed with `math.fsum`, so the
    result does not depend on operand order.
    """
    m1.frame.check_same(m2.frame)
    products: dict[int, list[float]] = {}
    for B, b in m1.items():
        for C, c in m2.items():
            products.setdefault(B.bits & C.bits, []).append(b * c)
    conflict = math.fsum(products.pop(0, []))
    if conflict >= 1.0 - CONFLICT_TOL:
        raise TotalConflict(f'Degree of conflict κ = {conflict!r}')
    norm = 1.0 - conflict
    masses = {
        FocalSet(bits): math.fsum(vals) / norm
        for bits, vals in products.items()
    }
    return MassFunction(m1.frame, masses), conflict


def combine_all(masses: Sequence[MassFunction]) -> tuple[MassFunction, float]:
    """Left fold of Dempster's rule.

    The returned conflict is 1 - Π(1 - κ_t), the total mass the unnormalized
    conjunctive combination would give to ∅.
    """
    if len(masses) == 0:
        raise ValidationError('Nothing to combine')
    out = masses[0]
    keep = 1.0
    for m in masses[1:]:
        out, kappa = combine_dempster(out, m)
        keep *= 1.0 - kappa
    return out, 1.0 - keep


def combine_simple(
        s1: SimpleMass,
        s2: SimpleMass,
) -> Union[SimpleMass, MassFunction]:
    """A^w1 ⊕ A^w2 = A^(w1 + w2); distinct focal sets go through Dempster."""
    s1.frame.check_same(s2.frame)
    if s1.focal == s2.focal:
        return SimpleMass(s1.frame, s1.focal, s1.weight + s2.weight)
    combined, _ = combine_dempster(s1.to_mass(), s2.to_mass())
    return combined


def combine_contour(
        pl1: ContourFunction,
        pl2: ContourFunction,
        conflict: float,
) -> ContourFunction:
    """Contour of m1 ⊕ m2: pl1 * pl2 / (1 - κ)."""
    pl1.frame.check_same(pl2.frame)
    if not 0.0 <= conflict < 1.0:
        raise TotalConflict(f'κ must be in [0, 1), got {conflict!r}')
    return ContourFunction(pl1.frame, pl1.values * pl2.values / (1.0 - conflict))


def discount(m: MassFunction, beta: float) -> MassFunction:
    """β m + (1 - β) m_?, with m_? the vacuous mass function."""
    if not 0.0 <= beta <= 1.0:
        raise ValidationError(f'Discount rate must be in [0, 1], got {beta}')
    omega = m.frame.omega
    out = {k: beta * v for k, v in m.items()}
    out[omega] = out.get(omega, 0.0) + (1.0 - beta)
    return MassFunction(m.frame, out)


def consonant_from_contour(pl: ContourFunction) -> MassFunction:
    """Unique consonant mass with contour `pl` (rescaled so that max pl = 1).

    Sort pl in decreasing order (ties by frame index) and give the nested
    set of the top k elements the mass π_(k) - π_(k+1).
    """
    values = pl.values
    top = float(values.max())
    if top <= 0.0:
        raise NonNormalizable('Contour is identically zero')
    pi = values / top
    order = np.argsort(-pi, kind='stable')
    masses: dict[FocalSet, float] = {}
    bits = 0
    for k, c in enumerate(order):
        bits |= 1 << int(c)
        nxt = pi[order[k + 1]] if k + 1 < len(order) else 0.0
        diff = float(pi[c] - nxt)
        if diff > 0.0:
            masses[FocalSet(bits)] = diff
    return MassFunction(pl.frame, masses)
