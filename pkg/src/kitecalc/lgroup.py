"""Exact arithmetic in the lattice-ordered groups Z^d (componentwise order).

Everything is written additively: the group identity is the zero vector,
the inverse is negation, meet and join are componentwise min and max.
Coordinates are Python ints, so iterated products never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class DimensionError(ValueError):
    pass


class ConeSide(Enum):
    NEGATIVE = "negative"
    POSITIVE = "positive"


@dataclass(frozen=True, slots=True)
class GroupVector:
    coords: tuple[int, ...]

    def __post_init__(self):
        for c in self.coords:
            # bool is an int subclass; a stray True/False is always a bug here
            if not isinstance(c, int) or isinstance(c, bool):
                raise TypeError(f"coordinates must be ints, got {c!r}")

    @classmethod
    def of(cls, *coords: int) -> GroupVector:
        return cls(tuple(coords))

    @classmethod
    def identity(cls, dim: int) -> GroupVector:
        return cls((0,) * dim)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def is_identity(self) -> bool:
        return not any(self.coords)

    def _check(self, other: GroupVector) -> None:
        if len(self.coords) != len(other.coords):
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: GroupVector) -> GroupVector:
        self._check(other)
        return GroupVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: GroupVector) -> GroupVector:
        self._check(other)
        return GroupVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> GroupVector:
        return GroupVector(tuple(-a for a in self.coords))

    def meet(self, other: GroupVector) -> GroupVector:
        self._check(other)
        return GroupVector(tuple(min(a, b) for a, b in zip(self.coords, other.coords)))

    def join(self, other: GroupVector) -> GroupVector:
        self._check(other)
        return GroupVector(tuple(max(a, b) for a, b in zip(self.coords, other.coords)))

    def leq(self, other: GroupVector) -> bool:
        self._check(other)
        return all(a <= b for a, b in zip(self.coords, other.coords))

    def __repr__(self) -> str:
        if len(self.coords) == 1:
            return f"GroupVector({self.coords[0]})"
        return f"GroupVector{self.coords}"


def gv_add(a: GroupVector, b: GroupVector) -> GroupVector:
    return a + b


def gv_neg(a: GroupVector) -> GroupVector:
    return -a


def gv_meet(a: GroupVector, b: GroupVector) -> GroupVector:
    return a.meet(b)


def gv_join(a: GroupVector, b: GroupVector) -> GroupVector:
    return a.join(b)


def in_cone(a: GroupVector, side: ConeSide) -> bool:
    """Membership in G^- (every coordinate <= 0) or G^+ (every coordinate >= 0)."""
    if side is ConeSide.NEGATIVE:
        return all(c <= 0 for c in a.coords)
    return all(c >= 0 for c in a.coords)
