"""The kite construction K_{I,J}^{lam,rho}(Z^d).

The universe is (G^+)^J disjoint-union (G^-)^I.  Upper elements carry |I|
entries from the negative cone, Lower elements carry |J| entries from the
positive cone, and every Lower element sits below every Upper one.  Entries
are stored additively, so the top element 1 is the all-zero Upper element and
the bottom element 0 is the all-zero Lower element.

Finite shapes use dense tuples.  The three canonical infinite shapes (index
set Z with lam(j)=j, rho(j)=j+1, and the two omega shapes) use sparse
finite-support maps with default e.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .lgroup import ConeSide, DimensionError, GroupVector, in_cone


class ShapeError(ValueError):
    """An element does not conform to the shape it is used with."""


class Side(Enum):
    LOWER = "L"
    UPPER = "U"


class Kind(Enum):
    FINITE = "finite"
    ZZ01 = "ZZ01"
    OO01 = "OO01"
    OO10 = "OO10"


INFINITE_KINDS = (Kind.ZZ01, Kind.OO01, Kind.OO10)


@dataclass(frozen=True)
class KiteShape:
    kind: Kind
    i_size: int | None = None
    j_size: int | None = None
    lam_map: tuple[int, ...] = ()
    rho_map: tuple[int, ...] = ()
    group_dim: int = 1

    def __post_init__(self):
        if self.group_dim < 0:
            raise ValueError("group dimension must be >= 0")
        if self.kind is not Kind.FINITE:
            if self.i_size is not None or self.j_size is not None or self.lam_map or self.rho_map:
                raise ValueError(f"{self.kind.value} takes no index data")
            return
        i, j = self.i_size, self.j_size
        if i is None or j is None or i < 0 or j < 0:
            raise ValueError("finite shape needs non-negative |I| and |J|")
        if j > i:
            raise ValueError(f"|J|={j} exceeds |I|={i}")
        for name, m in (("lam", self.lam_map), ("rho", self.rho_map)):
            if len(m) != j:
                raise ValueError(f"{name} must have length |J|={j}, got {len(m)}")
            if any(not 0 <= v < i for v in m):
                raise ValueError(f"{name} has values outside I={{0..{i - 1}}}")
            if len(set(m)) != len(m):
                raise ValueError(f"{name} is not injective")

    @classmethod
    def finite(cls, i_size: int, j_size: int, lam: Sequence[int], rho: Sequence[int],
               group_dim: int = 1) -> KiteShape:
        return cls(Kind.FINITE, i_size, j_size, tuple(lam), tuple(rho), group_dim)

    @classmethod
    def infinite(cls, kind: Kind, group_dim: int = 1) -> KiteShape:
        return cls(kind, group_dim=group_dim)

    @property
    def is_finite(self) -> bool:
        return self.kind is Kind.FINITE

    def size(self, side: Side) -> int | None:
        return self.i_size if side is Side.UPPER else self.j_size

    @cached_property
    def _lam_inv(self) -> dict[int, int]:
        return {i: j for j, i in enumerate(self.lam_map)}

    @cached_property
    def _rho_inv(self) -> dict[int, int]:
        return {i: j for j, i in enumerate(self.rho_map)}

    def lam(self, j: int) -> int:
        if self.kind is Kind.FINITE:
            return self.lam_map[j]
        return j + 1 if self.kind is Kind.OO10 else j

    def rho(self, j: int) -> int:
        if self.kind is Kind.FINITE:
            return self.rho_map[j]
        return j if self.kind is Kind.OO10 else j + 1

    def lam_inv(self, i: int) -> int | None:
        if self.kind is Kind.FINITE:
            return self._lam_inv.get(i)
        if self.kind is Kind.OO10:
            return i - 1 if i >= 1 else None
        return i

    def rho_inv(self, i: int) -> int | None:
        if self.kind is Kind.FINITE:
            return self._rho_inv.get(i)
        if self.kind is Kind.OO10:
            return i
        if self.kind is Kind.OO01:
            return i - 1 if i >= 1 else None
        return i - 1

    def has_index(self, side: Side, k: int) -> bool:
        if self.kind is Kind.FINITE:
            return 0 <= k < self.size(side)
        if self.kind is Kind.ZZ01:
            return True
        return k >= 0

    @property
    def lam_range(self) -> frozenset[int]:
        return frozenset(self.lam_map)

    @property
    def rho_range(self) -> frozenset[int]:
        return frozenset(self.rho_map)

    def identity_vector(self) -> GroupVector:
        return GroupVector.identity(self.group_dim)

    def __str__(self) -> str:
        if self.kind is not Kind.FINITE:
            return f"kite{{{self.kind.value}}}"
        return f"K_{{{self.i_size},{self.j_size}}}(lam={list(self.lam_map)}, rho={list(self.rho_map)})"


def cycle_shape(n: int, group_dim: int = 1) -> KiteShape:
    """K_{n,n}^{0,1}: lam(j) = j, rho(j) = j+1 (mod n)."""
    return KiteShape.finite(n, n, range(n), [(j + 1) % n for j in range(n)], group_dim)


def path_shape(n: int, group_dim: int = 1) -> KiteShape:
    """K_{n+1,n}^{0,1}: lam(j) = j, rho(j) = j+1."""
    return KiteShape.finite(n + 1, n, range(n), range(1, n + 1), group_dim)


def renumber(shape: KiteShape, perm_i: Sequence[int], perm_j: Sequence[int]) -> KiteShape:
    """Relabel I by perm_i and J by perm_j (old index -> new index)."""
    lam = [0] * shape.j_size
    rho = [0] * shape.j_size
    for j in range(shape.j_size):
        lam[perm_j[j]] = perm_i[shape.lam_map[j]]
        rho[perm_j[j]] = perm_i[shape.rho_map[j]]
    return KiteShape.finite(shape.i_size, shape.j_size, lam, rho, shape.group_dim)


def census(max_i: int, group_dim: int = 1) -> Iterator[KiteShape]:
    """Every finite shape with |J| <= |I| <= max_i and every pair of injections."""
    for i in range(max_i + 1):
        for j in range(i + 1):
            injections = list(itertools.permutations(range(i), j))
            for lam in injections:
                for rho in injections:
                    yield KiteShape.finite(i, j, lam, rho, group_dim)


@dataclass(frozen=True)
class KiteElement:
    """Upper (in (G^-)^I) or Lower (in (G^+)^J) kite element.

    Dense elements keep one GroupVector per index.  Sparse elements keep a
    sorted tuple of (index, value) pairs holding only the non-identity values.
    """

    side: Side
    entries: tuple
    sparse: bool = False
    _map: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        cone = ConeSide.NEGATIVE if self.side is Side.UPPER else ConeSide.POSITIVE
        values = [v for _, v in self.entries] if self.sparse else self.entries
        for v in values:
            if not isinstance(v, GroupVector):
                raise TypeError(f"entries must be GroupVectors, got {v!r}")
            if not in_cone(v, cone):
                raise ValueError(f"{v} is outside the {cone.value} cone required by a {self.side.name} element")
        if len({v.dim for v in values}) > 1:
            raise DimensionError("entries of one element must share a group dimension")
        if self.sparse:
            idx = [k for k, _ in self.entries]
            if idx != sorted(set(idx)):
                raise ValueError("sparse entries must have strictly increasing indices")
            if any(v.is_identity() for v in values):
                raise ValueError("sparse entries must omit identity values")
            object.__setattr__(self, "_map", dict(self.entries))

    @classmethod
    def dense(cls, side: Side, values: Iterable) -> KiteElement:
        return cls(side, tuple(_vec(v) for v in values))

    @classmethod
    def sparse_from(cls, side: Side, mapping: Mapping[int, object]) -> KiteElement:
        items = ((k, _vec(v)) for k, v in sorted(mapping.items()))
        return cls(side, tuple((k, v) for k, v in items if not v.is_identity()), sparse=True)

    @property
    def is_upper(self) -> bool:
        return self.side is Side.UPPER

    @property
    def is_lower(self) -> bool:
        return self.side is Side.LOWER

    def at(self, k: int, dim: int) -> GroupVector:
        if self.sparse:
            v = self._map.get(k)
            return GroupVector.identity(dim) if v is None else v
        return self.entries[k]

    def support(self) -> frozenset[int]:
        if self.sparse:
            return frozenset(self._map)
        return frozenset(k for k, v in enumerate(self.entries) if not v.is_identity())

    def __repr__(self) -> str:
        from .literals import format_element
        return format_element(self)


def _vec(v) -> GroupVector:
    if isinstance(v, GroupVector):
        return v
    if isinstance(v, int):
        return GroupVector((v,))
    return GroupVector(tuple(v))


def U(*values) -> KiteElement:
    """Dense Upper element, e.g. U(-1, -2)."""
    return KiteElement.dense(Side.UPPER, values)


def L(*values) -> KiteElement:
    """Dense Lower element, e.g. L(5)."""
    return KiteElement.dense(Side.LOWER, values)


def conform(shape: KiteShape, x: KiteElement) -> None:
    if shape.is_finite:
        if x.sparse:
            raise ShapeError(f"sparse element {x} used with finite shape {shape}")
        n = shape.size(x.side)
        if len(x.entries) != n:
            raise ShapeError(f"{x} has {len(x.entries)} entries, shape {shape} expects {n}")
        if n and x.entries[0].dim != shape.group_dim:
            raise ShapeError(f"{x} has group dimension {x.entries[0].dim}, shape expects {shape.group_dim}")
        return
    if not x.sparse:
        raise ShapeError(f"dense element {x} used with infinite shape {shape}")
    for k, v in x.entries:
        if not shape.has_index(x.side, k):
            raise ShapeError(f"index {k} is outside the index set of {shape}")
        if v.dim != shape.group_dim:
            raise ShapeError(f"{x} has group dimension {v.dim}, shape expects {shape.group_dim}")


def one(shape: KiteShape) -> KiteElement:
    if shape.is_finite:
        return KiteElement(Side.UPPER, (shape.identity_vector(),) * shape.i_size)
    return KiteElement(Side.UPPER, (), sparse=True)


def zero(shape: KiteShape) -> KiteElement:
    if shape.is_finite:
        return KiteElement(Side.LOWER, (shape.identity_vector(),) * shape.j_size)
    return KiteElement(Side.LOWER, (), sparse=True)


def _build(shape: KiteShape, side: Side, entry: Callable[[int], GroupVector],
           candidates: Callable[[], Iterable[int]]) -> KiteElement:
    # candidates is only consulted for infinite shapes: it must cover the result's support
    if shape.is_finite:
        return KiteElement(side, tuple(entry(k) for k in range(shape.size(side))))
    out = []
    for k in sorted(set(candidates())):
        if shape.has_index(side, k):
            v = entry(k)
            if not v.is_identity():
                out.append((k, v))
    return KiteElement(side, tuple(out), sparse=True)


def _image(f: Callable[[int], int | None], idx: Iterable[int]) -> set[int]:
    return {r for r in map(f, idx) if r is not None}


def mul(shape: KiteShape, x: KiteElement, y: KiteElement) -> KiteElement:
    conform(shape, x)
    conform(shape, y)
    d = shape.group_dim
    e = GroupVector.identity(d)
    if x.is_upper and y.is_upper:
        return _build(shape, Side.UPPER, lambda i: x.at(i, d) + y.at(i, d),
                      lambda: x.support() | y.support())
    if x.is_upper:
        return _build(shape, Side.LOWER, lambda j: (x.at(shape.lam(j), d) + y.at(j, d)).join(e),
                      y.support)
    if y.is_upper:
        return _build(shape, Side.LOWER, lambda j: (x.at(j, d) + y.at(shape.rho(j), d)).join(e),
                      x.support)
    return zero(shape)


def ldiv(shape: KiteShape, x: KiteElement, y: KiteElement) -> KiteElement:
    """x\\y: the largest z with x*z <= y."""
    conform(shape, x)
    conform(shape, y)
    d = shape.group_dim
    e = GroupVector.identity(d)
    if x.is_upper and y.is_upper:
        return _build(shape, Side.UPPER, lambda i: (y.at(i, d) - x.at(i, d)).meet(e),
                      lambda: x.support() | y.support())
    if x.is_upper:
        return _build(shape, Side.LOWER, lambda j: y.at(j, d) - x.at(shape.lam(j), d),
                      lambda: y.support() | _image(shape.lam_inv, x.support()))

    if y.is_lower:
        def entry(i):
            j = shape.rho_inv(i)
            return e if j is None else (y.at(j, d) - x.at(j, d)).meet(e)
        return _build(shape, Side.UPPER, entry,
                      lambda: _image(shape.rho, x.support() | y.support()))
    return one(shape)


def rdiv(shape: KiteShape, x: KiteElement, y: KiteElement) -> KiteElement:
    """x/y: the largest z with z*y <= x."""
    conform(shape, x)
    conform(shape, y)
    d = shape.group_dim
    e = GroupVector.identity(d)
    if x.is_upper and y.is_upper:
        return _build(shape, Side.UPPER, lambda i: (x.at(i, d) - y.at(i, d)).meet(e),
                      lambda: x.support() | y.support())
    if y.is_upper:
        return _build(shape, Side.LOWER, lambda j: x.at(j, d) - y.at(shape.rho(j), d),
                      lambda: x.support() | _image(shape.rho_inv, y.support()))
    if x.is_lower:
        def entry(i):
            j = shape.lam_inv(i)
            return e if j is None else (x.at(j, d) - y.at(j, d)).meet(e)
        return _build(shape, Side.UPPER, entry,
                      lambda: _image(shape.lam, x.support() | y.support()))
    return one(shape)


def meet(shape: KiteShape, x: KiteElement, y: KiteElement) -> KiteElement:
    conform(shape, x)
    conform(shape, y)
    if x.side is not y.side:
        return x if x.is_lower else y
    d = shape.group_dim
    return _build(shape, x.side, lambda k: x.at(k, d).meet(y.at(k, d)),
                  lambda: x.support() | y.support())


def join(shape: KiteShape, x: KiteElement, y: KiteElement) -> KiteElement:
    conform(shape, x)
    conform(shape, y)
    if x.side is not y.side:
        return x if x.is_upper else y
    d = shape.group_dim
    return _build(shape, x.side, lambda k: x.at(k, d).join(y.at(k, d)),
                  lambda: x.support() | y.support())


def leq(shape: KiteShape, x: KiteElement, y: KiteElement) -> bool:
    conform(shape, x)
    conform(shape, y)
    if x.side is not y.side:
        return x.is_lower
    d = shape.group_dim
    if shape.is_finite:
        return all(a.leq(b) for a, b in zip(x.entries, y.entries))
    return all(x.at(k, d).leq(y.at(k, d)) for k in x.support() | y.support())


def lneg(shape: KiteShape, x: KiteElement) -> KiteElement:
    return ldiv(shape, x, zero(shape))


def rneg(shape: KiteShape, x: KiteElement) -> KiteElement:
    return rdiv(shape, zero(shape), x)


def conjugates(shape: KiteShape, x: KiteElement, y: KiteElement) -> tuple[KiteElement, KiteElement]:
    """(left, right) conjugates of x by y: y\\xy ^ 1 and yx/y ^ 1."""
    top = one(shape)
    left = meet(shape, ldiv(shape, y, mul(shape, x, y)), top)
    right = meet(shape, rdiv(shape, mul(shape, y, x), y), top)
    return left, right


BINARY_OPS: dict[str, Callable[[KiteShape, KiteElement, KiteElement], KiteElement]] = {
    "meet": meet,
    "join": join,
    "mul": mul,
    "ldiv": ldiv,
    "rdiv": rdiv,
}


def entry_values(side: Side, dim: int, bound: int) -> list[GroupVector]:
    """Cone values with every coordinate magnitude <= bound, ordered by magnitude."""
    sign = -1 if side is Side.UPPER else 1
    return [GroupVector(tuple(sign * m for m in mags))
            for mags in itertools.product(range(bound + 1), repeat=dim)]


def grid(shape: KiteShape, bound: int) -> list[KiteElement]:
    """All elements of a finite shape whose entries have magnitude <= bound.

    Order: Lower before Upper, then lexicographic by entry magnitudes.
    """
    if not shape.is_finite:
        raise ShapeError("grid enumeration needs a finite shape")
    if bound < 0:
        raise ValueError("bound must be >= 0")
    out = []
    for side in (Side.LOWER, Side.UPPER):
        if shape.size(side) == 0:
            out.append(KiteElement(side, ()))
            continue
        vals = entry_values(side, shape.group_dim, bound)
        for combo in itertools.product(vals, repeat=shape.size(side)):
            out.append(KiteElement(side, combo))
    return out


def grid_size(shape: KiteShape, bound: int) -> int:
    per_entry = (bound + 1) ** shape.group_dim
    return per_entry ** shape.j_size + per_entry ** shape.i_size
