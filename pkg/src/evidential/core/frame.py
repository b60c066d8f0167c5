"""
frame.py

Contains the frame of discernment and the bitmask encoding of its subsets.
"""
from __future__ import absolute_import, annotations, division, print_function
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

from evidential.errors import BadFrame, FrameMismatch

MAX_FRAME_SIZE = 20
KEY_SEP = '|'


@dataclass(frozen=True, order=True)
class FocalSet:
    """Subset of a frame, bit `c` set iff element `c` is a member.

    Ordering is canonical: by cardinality, then by bit pattern.
    """
    size: int
    bits: int

    def __init__(self, bits: int):
        if bits < 0:
            raise BadFrame(f'Negative subset encoding: {bits}')
        object.__setattr__(self, 'bits', int(bits))
        object.__setattr__(self, 'size', bin(int(bits)).count('1'))

    @classmethod
    def of(cls, indices: Iterable[int]) -> FocalSet:
        bits = 0
        for idx in indices:
            if idx < 0:
                raise BadFrame(f'Negative frame index: {idx}')
            bits |= 1 << int(idx)
        return cls(bits)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.bits.bit_length())
                     if self.bits >> i & 1)

    def is_empty(self) -> bool:
        return self.bits == 0

    def is_singleton(self) -> bool:
        return self.size == 1

    def issubset(self, other: FocalSet) -> bool:
        return self.bits & ~other.bits == 0

    def __contains__(self, idx: int) -> bool:
        return bool(self.bits >> idx & 1)

    def __len__(self) -> int:
        return self.size

    def __and__(self, other: FocalSet) -> FocalSet:
        return FocalSet(self.bits & other.bits)

    def __or__(self, other: FocalSet) -> FocalSet:
        return FocalSet(self.bits | other.bits)

    def __repr__(self) -> str:
        return f'FocalSet({set(self.members) or "{}"})'


EMPTY = FocalSet(0)
SubsetLike = Union[FocalSet, str, int, np.integer, Sequence[Union[str, int]]]


@dataclass(frozen=True)
class Frame:
    """Ordered, finite set of class labels Ω = (ω_1, ..., ω_C)."""
    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        object.__setattr__(self, 'labels', labels)
        if not 1 <= len(labels) <= MAX_FRAME_SIZE:
            raise BadFrame(
                f'Frame size must be in [1, {MAX_FRAME_SIZE}], '
                f'got {len(labels)}'
            )
        if len(set(labels)) != len(labels):
            raise BadFrame(f'Frame labels must be unique: {labels}')
        if any(KEY_SEP in x or x == '' for x in labels):
            raise BadFrame(f'Labels must be nonempty and free of "{KEY_SEP}"')

    @classmethod
    def indexed(cls, size: int, prefix: str = 'w') -> Frame:
        """Frame with labels `w1, ..., wC`."""
        return cls(tuple(f'{prefix}{i + 1}' for i in range(size)))

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def omega(self) -> FocalSet:
        return FocalSet((1 << self.size) - 1)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError as exc:
            raise BadFrame(f'{label!r} is not in frame {self.labels}') from exc

    def singleton(self, c: int) -> FocalSet:
        return self.validate(FocalSet(1 << c))

    def singletons(self) -> list[FocalSet]:
        return [FocalSet(1 << c) for c in range(self.size)]

    def subset(self, item: SubsetLike) -> FocalSet:
        """Build a subset from labels, indices, a key string or a FocalSet."""
        if isinstance(item, FocalSet):
            return self.validate(item)
        if isinstance(item, str):
            if item in self.labels:
                return self.singleton(self.index(item))
            return self.parse_key(item)
        if isinstance(item, (int, np.integer)):
            return self.singleton(int(item))
        return self.validate(FocalSet.of(
            self.index(x) if isinstance(x, str) else int(x) for x in item
        ))

    def validate(self, focal: FocalSet) -> FocalSet:
        if focal.bits >> self.size:
            raise BadFrame(
                f'{focal} refers to an index outside frame of size {self.size}'
            )
        return focal

    def complement(self, focal: FocalSet) -> FocalSet:
        return FocalSet(self.omega.bits & ~self.validate(focal).bits)

    def key(self, focal: FocalSet) -> str:
        """Labels joined by `|` in frame order, e.g. `a|b`."""
        return KEY_SEP.join(self.labels[i] for i in self.validate(focal).members)

    def parse_key(self, key: str) -> FocalSet:
        if key == '':
            return EMPTY
        return FocalSet.of(self.index(x) for x in key.split(KEY_SEP))

    def powerset(self, include_empty: bool = False) -> Iterator[FocalSet]:
        start = 0 if include_empty else 1
        return iter(sorted(FocalSet(b) for b in range(start, 1 << self.size)))

    def check_same(self, other: Frame) -> None:
        if self.labels != other.labels:
            raise FrameMismatch(
                f'Frames differ: {self.labels} vs {other.labels}'
            )
