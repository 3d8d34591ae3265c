"""Vectorized kite arithmetic over many elements at once.

A Batch stores B elements of one shape as a side mask (True = Upper) and a
value array of shape (B, W, d), W = |I|.  Lower rows use the first |J|
columns and keep zeros elsewhere.  Index maps are integer arrays with -1
for "undefined"; gathers append a zero column so that -1 reads as e.

Window plans cover the infinite shapes: indices lo..hi are stored at
positions 0..hi-lo.  They are exact for a single operation whenever the
operands vanish on the first and last window position.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kite import Kind, KiteElement, KiteShape, ShapeError, Side, conform, grid
from .lgroup import GroupVector

# magnitudes at or above this switch the engine to Python ints
OVERFLOW_LIMIT = 2 ** 62


@dataclass(frozen=True)
class Plan:
    i_size: int
    j_size: int
    dim: int
    lam: np.ndarray
    rho: np.ndarray
    lam_inv: np.ndarray
    rho_inv: np.ndarray
    lo: int = 0

    @property
    def width(self) -> int:
        return self.i_size


def _inverse(m: np.ndarray, size: int) -> np.ndarray:
    inv = np.full(size, -1, dtype=np.intp)
    valid = m >= 0
    inv[m[valid]] = np.nonzero(valid)[0]
    return inv


def plan_for(shape: KiteShape) -> Plan:
    if not shape.is_finite:
        raise ShapeError("infinite shapes need a window plan")
    lam = np.asarray(shape.lam_map, dtype=np.intp)
    rho = np.asarray(shape.rho_map, dtype=np.intp)
    return Plan(shape.i_size, shape.j_size, shape.group_dim, lam, rho,
                _inverse(lam, shape.i_size), _inverse(rho, shape.i_size))


def window_plan(shape: KiteShape, lo: int, hi: int) -> Plan:
    """Positions 0..hi-lo stand for indices lo..hi of an infinite shape."""
    if shape.is_finite:
        raise ShapeError("window plans are for infinite shapes")
    if shape.kind is not Kind.ZZ01 and lo < 0:
        raise ShapeError(f"{shape.kind.value} has no negative indices")
    n = hi - lo + 1
    lam = np.empty(n, dtype=np.intp)
    rho = np.empty(n, dtype=np.intp)
    for p in range(n):
        k = lo + p
        lam[p] = shape.lam(k) - lo
        rho[p] = shape.rho(k) - lo
    lam[lam >= n] = -1
    rho[rho >= n] = -1
    return Plan(n, n, shape.group_dim, lam, rho, _inverse(lam, n), _inverse(rho, n), lo)


@dataclass
class Batch:
    side: np.ndarray
    vals: np.ndarray

    def __len__(self) -> int:
        return len(self.side)

    def take(self, idx) -> Batch:
        return Batch(self.side[idx], self.vals[idx])

    def equal(self, other: Batch) -> np.ndarray:
        same = (self.vals == other.vals).reshape(len(self), -1).all(axis=1)
        return (self.side == other.side) & same

    def to_object(self) -> Batch:
        return Batch(self.side, self.vals.astype(object))


def encode(plan: Plan, elems: list[KiteElement], dtype=np.int64) -> Batch:
    vals = np.zeros((len(elems), plan.width, plan.dim), dtype=dtype)
    side = np.zeros(len(elems), dtype=bool)
    for r, x in enumerate(elems):
        side[r] = x.is_upper
        if x.sparse:
            for k, v in x.entries:
                p = k - plan.lo
                if not 0 <= p < plan.width:
                    raise ShapeError(f"index {k} falls outside the window")
                vals[r, p] = v.coords
        else:
            n = plan.i_size if x.is_upper else plan.j_size
            if len(x.entries) != n:
                raise ShapeError(f"{x} does not fit a plan with |I|={plan.i_size}, |J|={plan.j_size}")
            for p, v in enumerate(x.entries):
                vals[r, p] = v.coords
    return Batch(side, vals)


def decode(plan: Plan, batch: Batch, r: int, sparse: bool = False) -> KiteElement:
    upper = bool(batch.side[r])
    n = plan.i_size if upper else plan.j_size
    side = Side.UPPER if upper else Side.LOWER
    vecs = [GroupVector(tuple(int(c) for c in batch.vals[r, p])) for p in range(n)]
    if sparse:
        return KiteElement.sparse_from(side, {plan.lo + p: v for p, v in enumerate(vecs)})
    return KiteElement(side, tuple(vecs))


def grid_batch(shape: KiteShape, bound: int, dtype=np.int64) -> tuple[Plan, list[KiteElement], Batch]:
    plan = plan_for(shape)
    elems = grid(shape, bound)
    return plan, elems, encode(plan, elems, dtype)


def constant(plan: Plan, upper: bool, count: int, dtype=np.int64) -> Batch:
    return Batch(np.full(count, upper, dtype=bool),
                 np.zeros((count, plan.width, plan.dim), dtype=dtype))


def _gather(vals: np.ndarray, idx: np.ndarray) -> np.ndarray:
    pad = np.zeros((vals.shape[0], 1, vals.shape[2]), dtype=vals.dtype)
    return np.concatenate([vals, pad], axis=1)[:, idx]


def _lower(plan: Plan, arr_j: np.ndarray) -> np.ndarray:
    """Pad a (B, |J|, d) Lower value array to width W."""
    extra = plan.width - plan.j_size
    if extra == 0:
        return arr_j
    pad = np.zeros((arr_j.shape[0], extra, arr_j.shape[2]), dtype=arr_j.dtype)
    return np.concatenate([arr_j, pad], axis=1)


def _select(x: Batch, y: Batch, uu, ul, lu, ll) -> tuple[np.ndarray, np.ndarray]:
    """Pick per row among the four (side, vals) case results."""
    xs = x.side[:, None, None]
    ys = y.side[:, None, None]
    vals = np.where(xs, np.where(ys, uu[1], ul[1]), np.where(ys, lu[1], ll[1]))
    side = np.where(x.side, np.where(y.side, uu[0], ul[0]), np.where(y.side, lu[0], ll[0]))
    return side, vals


def _zeros(x: Batch) -> np.ndarray:
    return np.zeros_like(x.vals)


def mul(plan: Plan, x: Batch, y: Batch) -> Batch:
    j = plan.j_size
    uu = (True, x.vals + y.vals)
    ul = (False, _lower(plan, np.maximum(_gather(x.vals, plan.lam) + y.vals[:, :j], 0)))
    lu = (False, _lower(plan, np.maximum(x.vals[:, :j] + _gather(y.vals, plan.rho), 0)))
    ll = (False, _zeros(x))
    return Batch(*_select(x, y, uu, ul, lu, ll))


def ldiv(plan: Plan, x: Batch, y: Batch) -> Batch:
    j = plan.j_size
    uu = (True, np.minimum(y.vals - x.vals, 0))
    ul = (False, _lower(plan, y.vals[:, :j] - _gather(x.vals, plan.lam)))
    lu = (True, _zeros(x))
    ll = (True, np.minimum(_gather(y.vals, plan.rho_inv) - _gather(x.vals, plan.rho_inv), 0))
    return Batch(*_select(x, y, uu, ul, lu, ll))


def rdiv(plan: Plan, x: Batch, y: Batch) -> Batch:
    j = plan.j_size
    uu = (True, np.minimum(x.vals - y.vals, 0))
    ul = (True, _zeros(x))
    lu = (False, _lower(plan, x.vals[:, :j] - _gather(y.vals, plan.rho)))
    ll = (True, np.minimum(_gather(x.vals, plan.lam_inv) - _gather(y.vals, plan.lam_inv), 0))
    return Batch(*_select(x, y, uu, ul, lu, ll))


def meet(plan: Plan, x: Batch, y: Batch) -> Batch:
    m = np.minimum(x.vals, y.vals)
    uu = (True, m)
    ul = (False, y.vals)
    lu = (False, x.vals)
    ll = (False, m)
    return Batch(*_select(x, y, uu, ul, lu, ll))


def join(plan: Plan, x: Batch, y: Batch) -> Batch:
    m = np.maximum(x.vals, y.vals)
    uu = (True, m)
    ul = (True, x.vals)
    lu = (True, y.vals)
    ll = (False, m)
    return Batch(*_select(x, y, uu, ul, lu, ll))


def leq(plan: Plan, x: Batch, y: Batch) -> np.ndarray:
    return meet(plan, x, y).equal(x)


def lneg(plan: Plan, x: Batch) -> Batch:
    return ldiv(plan, x, constant(plan, False, len(x), x.vals.dtype))


def rneg(plan: Plan, x: Batch) -> Batch:
    return rdiv(plan, constant(plan, False, len(x), x.vals.dtype), x)


BINARY = {"meet": meet, "join": join, "mul": mul, "ldiv": ldiv, "rdiv": rdiv}


def check_conform(shape: KiteShape, elems: list[KiteElement]) -> None:
    for x in elems:
        conform(shape, x)
