"""
credal.py

Credal partitions: one mass function per object over a declared focal
structure, plus the mass each object gives to the empty set.
"""
from __future__ import absolute_import, annotations, division, print_function
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from evidential.core.frame import FocalSet, Frame
from evidential.core.mass import MassFunction, normalized_from
from evidential.errors import (
    AllMassEmpty,
    ShapeMismatch,
    SumNotOne,
    ValidationError,
)

ROW_TOL = 1e-9
EMPTY_TOL = 1e-12


def focal_structure(nclusters: int, pairs: bool = False) -> list[FocalSet]:
    """Singletons, optionally all pairs, then Ω (canonical order)."""
    if nclusters < 1:
        raise ValidationError(f'nclusters must be >= 1, got {nclusters}')
    out = {FocalSet(1 << c) for c in range(nclusters)}
    if pairs:
        out |= {FocalSet.of(p) for p in combinations(range(nclusters), 2)}
    out.add(FocalSet((1 << nclusters) - 1))
    return sorted(out)


@dataclass(eq=False)
class CredalPartition:
    frame: Frame
    focal: tuple[FocalSet, ...]
    masses: np.ndarray        # N x f
    empty_mass: np.ndarray    # N

    def __post_init__(self):
        self.focal = tuple(self.frame.validate(f) for f in self.focal)
        if any(f.is_empty() for f in self.focal):
            raise ValidationError('∅ is carried by `empty_mass`, not `focal`')
        if len(set(self.focal)) != len(self.focal):
            raise ValidationError('Duplicate focal sets')
        self.masses = np.asarray(self.masses, dtype=np.float64)
        self.empty_mass = np.asarray(self.empty_mass,
                                     dtype=np.float64).reshape(-1)
        if self.masses.ndim != 2 or self.masses.shape[1] != len(self.focal):
            raise ShapeMismatch(
                f'Mass matrix {self.masses.shape} does not match '
                f'{len(self.focal)} focal sets'
            )
        if self.empty_mass.shape[0] != self.masses.shape[0]:
            raise ShapeMismatch('empty_mass length differs from mass rows')
        if np.any(self.masses < 0) or np.any(self.empty_mass < 0):
            raise ValidationError('Credal partition masses must be >= 0')
        totals = self.masses.sum(axis=1) + self.empty_mass
        if np.any(np.abs(totals - 1.0) > ROW_TOL):
            raise SumNotOne('Credal partition rows must sum to 1')

    @property
    def nobjects(self) -> int:
        return self.masses.shape[0]

    def betp(self) -> np.ndarray:
        """N x C pignistic probabilities, conditioned on a nonempty set."""
        sizes = np.array([f.size for f in self.focal], dtype=np.float64)
        out = np.zeros((self.nobjects, self.frame.size))
        for j, f in enumerate(self.focal):
            for c in f.members:
                out[:, c] += self.masses[:, j] / sizes[j]
        norm = 1.0 - self.empty_mass
        with np.errstate(divide='ignore', invalid='ignore'):
            out = np.where(norm[:, None] > EMPTY_TOL, out / norm[:, None], 0.0)
        return out

    def pignistic_labels(self) -> np.ndarray:
        return np.argmax(self.betp(), axis=1)

    def hard_labels(self) -> np.ndarray:
        """Index into `focal` of each object's largest mass."""
        return np.argmax(self.masses, axis=1)

    def to_frame(self) -> pd.DataFrame:
        columns = [self.frame.key(f) for f in self.focal]
        df = pd.DataFrame(self.masses, columns=columns)
        df.insert(0, 'empty', self.empty_mass)
        return df


def credal_to_mass(partition: CredalPartition, i: int) -> MassFunction:
    """Row `i` renormalized over its nonempty focal sets."""
    if not 0 <= i < partition.nobjects:
        raise ValidationError(f'Object index {i} out of range')
    row = partition.masses[i]
    if partition.empty_mass[i] >= 1.0 - EMPTY_TOL or not np.any(row > 0):
        raise AllMassEmpty(f'Object {i} puts all of its mass on ∅')
    return normalized_from(partition.frame, list(zip(partition.focal, row)))


def credal_from_rows(
        frame: Frame,
        focal: Sequence[FocalSet],
        rows: Sequence[Sequence[float]],
        empty: Optional[Sequence[float]] = None,
) -> CredalPartition:
    rows = np.asarray(rows, dtype=np.float64)
    if empty is None:
        empty = np.clip(1.0 - rows.sum(axis=1), 0.0, None)
    return CredalPartition(frame, tuple(focal), rows, np.asarray(empty))
