"""Finite-dimensional approximation of the infinite kites.

mu   sends a finite-support element of kite{ZZ01} to the family of centered
     windows <u_-n, ..., u_n> in K_{2n+1,2n+1}^{0,1}, positions labeled -n..n
     with rho wrapping modulo 2n+1.  It is a homomorphism only up to ~.
nu   sends an element of kite{OO01} to prefix truncations in K_{n+1,n}^{0,1}:
     Lower f_0..f_{n-1}, Upper a_0..a_n.
nu'  sends an element of kite{OO10} to the reversed truncations
     (Lower position p holds f_{n-1-p}, Upper position q holds a_{n-q}).

Relations u ~ w are verified only up to a finite depth N.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import batch as bk
from . import kite
from .kite import Kind, KiteElement, KiteShape, Side

OPS = ("meet", "join", "mul", "ldiv", "rdiv", "lneg", "rneg")
UNARY = ("lneg", "rneg")
KINDS = ("mu", "nu", "nu_prime")
_SOURCE = {"mu": Kind.ZZ01, "nu": Kind.OO01, "nu_prime": Kind.OO10}


def level_shape(kind: str, n: int, group_dim: int = 1) -> KiteShape:
    if kind == "mu":
        return kite.cycle_shape(2 * n + 1, group_dim)
    return kite.path_shape(n, group_dim)


def source_shape(kind: str, group_dim: int = 1) -> KiteShape:
    return KiteShape.infinite(_SOURCE[kind], group_dim)


def level_indices(kind: str, side: Side, n: int) -> list[int]:
    """Source index stored at each position of level n."""
    if kind == "mu":
        return list(range(-n, n + 1))
    size = n + 1 if side is Side.UPPER else n
    if kind == "nu":
        return list(range(size))
    return [size - 1 - p for p in range(size)]


@dataclass(frozen=True)
class LevelFamily:
    kind: str
    side: Side
    levels: tuple[KiteElement, ...]

    @property
    def depth(self) -> int:
        return len(self.levels) - 1


def _truncate(kind: str, u: KiteElement, N: int, dim: int) -> LevelFamily:
    levels = []
    for n in range(N + 1):
        idx = level_indices(kind, u.side, n)
        levels.append(KiteElement(u.side, tuple(u.at(k, dim) for k in idx)))
    return LevelFamily(kind, u.side, tuple(levels))


def _radius(u: KiteElement) -> int:
    return max((abs(k) for k in u.support()), default=0)


def mu_minus(u: KiteElement, N: int, group_dim: int = 1) -> LevelFamily:
    kite.conform(source_shape("mu", group_dim), u)
    if N < _radius(u):
        raise ValueError(f"depth {N} is smaller than the support radius {_radius(u)}")
    return _truncate("mu", u, N, group_dim)


def nu(u: KiteElement, N: int, group_dim: int = 1) -> LevelFamily:
    kite.conform(source_shape("nu", group_dim), u)
    if N < _radius(u):
        raise ValueError(f"support index {_radius(u)} exceeds depth {N}")
    return _truncate("nu", u, N, group_dim)


def nu_prime(u: KiteElement, N: int, group_dim: int = 1) -> LevelFamily:
    kite.conform(source_shape("nu_prime", group_dim), u)
    if N < _radius(u):
        raise ValueError(f"support index {_radius(u)} exceeds depth {N}")
    return _truncate("nu_prime", u, N, group_dim)


MAPS: dict[str, Callable[..., LevelFamily]] = {"mu": mu_minus, "nu": nu, "nu_prime": nu_prime}


def apply_op(shape: KiteShape, op: str, x: KiteElement, y: KiteElement | None = None) -> KiteElement:
    if op == "lneg":
        return kite.lneg(shape, x)
    if op == "rneg":
        return kite.rneg(shape, x)
    return kite.BINARY_OPS[op](shape, x, y)


def family_op(op: str, U: LevelFamily, W: LevelFamily | None = None, group_dim: int = 1) -> LevelFamily:
    """Apply a kite operation levelwise in the product of level kites."""
    if op not in OPS:
        raise ValueError(f"unknown operation {op!r}")
    if W is not None and (W.kind != U.kind or W.depth != U.depth):
        raise ValueError("families must share kind and depth")
    levels = []
    for n, x in enumerate(U.levels):
        shape = level_shape(U.kind, n, group_dim)
        levels.append(apply_op(shape, op, x, None if op in UNARY else W.levels[n]))
    return LevelFamily(U.kind, levels[0].side, tuple(levels))


# ---- the ~ relation ---------------------------------------------------------

@dataclass
class SimWitness:
    k: int
    verified_to: int
    diff_sets: list[list[int]]
    holds: bool


def diff_sets(U: LevelFamily, W: LevelFamily) -> list[list[int]]:
    """Per level, the labels where the two families differ."""
    out = []
    for n, (a, b) in enumerate(zip(U.levels, W.levels)):
        labels = level_indices(U.kind, U.side, n)
        out.append([labels[p] for p, (s, t) in enumerate(zip(a.entries, b.entries)) if s != t])
    return out


def sim_check(U: LevelFamily, W: LevelFamily, k: int) -> SimWitness:
    """Does diff(n) miss [-n+k, n-k] for every k <= n <= N?"""
    if U.kind != "mu" or W.kind != "mu":
        raise ValueError("~ is defined on mu families")
    if U.depth != W.depth:
        raise ValueError("families must have equal depth")
    if U.side is not W.side:
        raise ValueError("families on different sides are never ~-related")
    diffs = diff_sets(U, W)
    ok = all(not (-n + k <= i <= n - k)
             for n in range(k, U.depth + 1) for i in diffs[n])
    return SimWitness(k, U.depth, diffs, ok)


def least_k(U: LevelFamily, W: LevelFamily, cap: int | None = None) -> int | None:
    cap = U.depth if cap is None else cap
    for k in range(cap + 1):
        if sim_check(U, W, k).holds:
            return k
    return None


def hom_defect(op: str, u: KiteElement, w: KiteElement | None, N: int, group_dim: int = 1) -> int | None:
    """Least k with mu(op(u, w)) ~_k op(mu(u), mu(w)), checked to depth N."""
    z = source_shape("mu", group_dim)
    lhs_src = apply_op(z, op, u, w)
    fam_u = mu_minus(u, N, group_dim)
    fam_w = None if op in UNARY else mu_minus(w, N, group_dim)
    rhs = family_op(op, fam_u, fam_w, group_dim)
    lhs = _truncate("mu", lhs_src, N, group_dim)
    if lhs.side is not rhs.side:
        return None
    return least_k(lhs, rhs)


def level_mismatches(kind: str, op: str, u: KiteElement, w: KiteElement | None, N: int,
                     group_dim: int = 1) -> list[tuple[int, str, int]]:
    """(level, side, position) triples where map(op(u,w)) and family_op disagree."""
    src = source_shape(kind, group_dim)
    lhs = _truncate(kind, apply_op(src, op, u, w), N, group_dim)
    rhs = family_op(op, _truncate(kind, u, N, group_dim),
                    None if op in UNARY else _truncate(kind, w, N, group_dim), group_dim)
    out = []
    for n, (a, b) in enumerate(zip(lhs.levels, rhs.levels)):
        if a.side is not b.side:
            out.append((n, "side", -1))
        else:
            out.extend((n, a.side.value, p) for p, (s, t) in enumerate(zip(a.entries, b.entries)) if s != t)
    return out


# ---- vectorized sweeps --------------------------------------------------------

def finite_support_elements(kind: str, radius: int, magnitude: int, group_dim: int = 1) -> list[KiteElement]:
    """Every element supported on the index range of the given radius with entries bounded by magnitude."""
    idx = list(range(-radius, radius + 1)) if kind == "mu" else list(range(radius + 1))
    out = []
    for side in (Side.LOWER, Side.UPPER):
        vals = kite.entry_values(side, group_dim, magnitude)
        for combo in itertools.product(vals, repeat=len(idx)):
            out.append(KiteElement.sparse_from(side, dict(zip(idx, combo))))
    return out


def _window(kind: str, radius: int) -> tuple[int, int]:
    return (-radius - 1, radius + 1) if kind == "mu" else (0, radius + 1)


def _level_batch(kind: str, b: bk.Batch, lo: int, n: int, dim: int) -> tuple[bk.Plan, bk.Batch]:
    """Truncate window-encoded source elements to level n."""
    shape = level_shape(kind, n, dim)
    plan = bk.plan_for(shape)
    vals = np.zeros((len(b), plan.width, dim), dtype=b.vals.dtype)
    width_src = b.vals.shape[1]
    for side, mask in ((Side.UPPER, b.side), (Side.LOWER, ~b.side)):
        labels = level_indices(kind, side, n)
        for p, k in enumerate(labels):
            q = k - lo
            if 0 <= q < width_src:
                vals[mask, p] = b.vals[mask, q]
    return plan, bk.Batch(b.side.copy(), vals)


def _apply_batch(plan: bk.Plan, op: str, x: bk.Batch, y: bk.Batch | None) -> bk.Batch:
    if op == "lneg":
        return bk.lneg(plan, x)
    if op == "rneg":
        return bk.rneg(plan, x)
    return bk.BINARY[op](plan, x, y)


def _pairs(count: int, op: str) -> tuple[np.ndarray, np.ndarray | None]:
    if op in UNARY:
        return np.arange(count), None
    return np.divmod(np.arange(count * count), count)


@dataclass
class SweepResult:
    kind: str
    op: str
    N: int
    pairs: int
    max_defect: int | None  # None if some pair has no admissible k
    mismatches: list[tuple[int, int, str, int]] = field(default_factory=list)  # (pair, level, side, position)

    @property
    def exact(self) -> bool:
        return not self.mismatches


def sweep(kind: str, op: str, elems: list[KiteElement], N: int, radius: int,
          group_dim: int = 1, chunk: int = 1 << 14, keep: int = 50) -> SweepResult:
    """Compare map(op(u,w)) with family_op(op, map(u), map(w)) for all element pairs.

    For mu this reports the largest least-k over pairs; for nu/nu' it lists
    every levelwise mismatch (up to `keep`).
    """
    lo, hi = _window(kind, radius)
    src = source_shape(kind, group_dim)
    wplan = bk.window_plan(src, lo, hi)
    enc = bk.encode(wplan, elems)
    xi_all, yi_all = _pairs(len(elems), op)
    total = len(xi_all)
    max_defect: int | None = 0
    mismatches: list[tuple[int, int, str, int]] = []
    for start in range(0, total, chunk):
        sl = slice(start, min(total, start + chunk))
        x = enc.take(xi_all[sl])
        y = None if yi_all is None else enc.take(yi_all[sl])
        res = _apply_batch(wplan, op, x, y)
        count = len(x)
        need = np.zeros((count, N + 1), dtype=np.int64)
        for n in range(N + 1):
            plan, lhs = _level_batch(kind, res, lo, n, group_dim)
            _, lx = _level_batch(kind, x, lo, n, group_dim)
            ly = None if y is None else _level_batch(kind, y, lo, n, group_dim)[1]
            rhs = _apply_batch(plan, op, lx, ly)
            side_diff = lhs.side != rhs.side
            pos_diff = (lhs.vals != rhs.vals).any(axis=2)
            if kind == "mu":
                labels = np.arange(-n, n + 1)
                dist = n - np.abs(labels) + 1
                need[:, n] = np.where(pos_diff, dist[None, :], 0).max(axis=1, initial=0)
                need[side_diff, n] = N + 2
            else:
                for r, p in zip(*np.nonzero(pos_diff | side_diff[:, None])):
                    if len(mismatches) < keep:
                        side = "side" if side_diff[r] else ("U" if lhs.side[r] else "L")
                        mismatches.append((start + int(r), n, side, int(p)))
        if kind == "mu" and max_defect is not None:
            best = np.full(count, -1, dtype=np.int64)
            for k in range(N + 1):
                ok = (need[:, k:] <= k).all(axis=1) & (best < 0)
                best[ok] = k
            if (best < 0).any():
                max_defect = None
            else:
                max_defect = max(max_defect, int(best.max()))
    return SweepResult(kind, op, N, total, max_defect if kind == "mu" else None, mismatches)


def injectivity_at_depth(elems: list[KiteElement], N: int, radius: int, group_dim: int = 1,
                         chunk: int = 256) -> list[tuple[int, int, int]]:
    """Pairs (a, b, k) of distinct mu elements that are ~_k related at depth N for some k <= N-radius-1.

    An empty list means every distinct pair is separated for every such k.
    """
    lo, hi = _window("mu", radius)
    wplan = bk.window_plan(source_shape("mu", group_dim), lo, hi)
    enc = bk.encode(wplan, elems)
    levels = [_level_batch("mu", enc, lo, n, group_dim)[1] for n in range(N + 1)]
    kmax = N - radius - 1
    bad = []
    g = len(elems)
    for a0 in range(0, g, chunk):
        a = np.arange(a0, min(g, a0 + chunk))
        same_side = levels[0].side[a][:, None] == levels[0].side[None, :]
        need = np.zeros((len(a), g, N + 1), dtype=np.int64)
        for n in range(N + 1):
            v = levels[n].vals
            diff = (v[a][:, None] != v[None, :]).any(axis=3)
            dist = n - np.abs(np.arange(-n, n + 1)) + 1
            need[:, :, n] = np.where(diff, dist, 0).max(axis=2, initial=0)
        for k in range(kmax + 1):
            related = (need[:, :, k:] <= k).all(axis=2) & same_side
            related[np.arange(len(a)), a] = False
            for r, b in zip(*np.nonzero(related)):
                bad.append((int(a[r]), int(b), k))
    return bad


@dataclass
class GenerationReport:
    N: int
    radius: int
    magnitude: int
    mu_injective: bool
    mu_defect: dict[str, int | None]
    nu_exact: dict[str, bool]
    nu_prime_exact: dict[str, bool]

    @property
    def holds(self) -> bool:
        return (self.mu_injective
                and all(d is not None and d <= 1 for d in self.mu_defect.values())
                and all(self.nu_exact.values()) and all(self.nu_prime_exact.values()))


def generation_report(N: int = 8, radius: int = 2, magnitude: int = 2) -> GenerationReport:
    """The three embedding checks at desk scale."""
    mu_elems = finite_support_elements("mu", radius, magnitude)
    nu_elems = finite_support_elements("nu", radius, magnitude)
    return GenerationReport(
        N, radius, magnitude,
        mu_injective=not injectivity_at_depth(mu_elems, N, radius),
        mu_defect={op: sweep("mu", op, mu_elems, N, radius).max_defect for op in OPS},
        nu_exact={op: sweep("nu", op, nu_elems, N, radius).exact for op in OPS},
        nu_prime_exact={op: sweep("nu_prime", op, nu_elems, N, radius).exact for op in OPS},
    )
