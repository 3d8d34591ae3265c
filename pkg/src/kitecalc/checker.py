"""Term evaluation and exhaustive identity checking on bounded grids.

Assignments are enumerated in lexicographic order over the grid order, with
the alphabetically first variable most significant.  A failing check reports
the least violating assignment under that order, whatever the worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

import numpy as np

from . import batch as bk
from . import kite
from .kite import KiteElement, KiteShape
from .terms import (
    Identity, IdentityKind, Join, LDiv, LNeg, Meet, Mul, One, RDiv, RNeg, Term, Var, Zero,
    occurrences,
)

DEFAULT_MAX_EVALS = 10 ** 8
CHUNK = 1 << 14


class BudgetExceeded(RuntimeError):
    def __init__(self, needed: int, cap: int):
        super().__init__(f"check needs {needed} evaluations, cap is {cap}")
        self.needed = needed
        self.cap = cap


class UnboundVariable(KeyError):
    pass


def default_max_evals() -> int:
    raw = os.environ.get("KITECALC_MAX_EVALS")
    return int(raw) if raw else DEFAULT_MAX_EVALS


# ---- scalar evaluation ------------------------------------------------------

_SCALAR_BINARY = {Meet: kite.meet, Join: kite.join, Mul: kite.mul, LDiv: kite.ldiv, RDiv: kite.rdiv}


def eval_term(shape: KiteShape, t: Term, env: Mapping[str, KiteElement]) -> KiteElement:
    if isinstance(t, Var):
        if t.name not in env:
            raise UnboundVariable(t.name)
        return env[t.name]
    if isinstance(t, Zero):
        return kite.zero(shape)
    if isinstance(t, One):
        return kite.one(shape)
    if isinstance(t, LNeg):
        return kite.lneg(shape, eval_term(shape, t.arg, env))
    if isinstance(t, RNeg):
        return kite.rneg(shape, eval_term(shape, t.arg, env))
    op = _SCALAR_BINARY[type(t)]
    return op(shape, eval_term(shape, t.left, env), eval_term(shape, t.right, env))


def identity_holds(shape: KiteShape, ident: Identity, env: Mapping[str, KiteElement]) -> bool:
    vals = [eval_term(shape, t, env) for t in ident.terms]
    if ident.kind is IdentityKind.INEQUATION:
        return kite.meet(shape, vals[0], vals[1]) == vals[0]
    return all(v == vals[0] for v in vals[1:])


# ---- batch evaluation -------------------------------------------------------

_BATCH_BINARY = {Meet: bk.meet, Join: bk.join, Mul: bk.mul, LDiv: bk.ldiv, RDiv: bk.rdiv}


def eval_batch(plan: bk.Plan, t: Term, env: Mapping[str, bk.Batch], count: int,
               dtype=np.int64) -> bk.Batch:
    if isinstance(t, Var):
        if t.name not in env:
            raise UnboundVariable(t.name)
        return env[t.name]
    if isinstance(t, (Zero, One)):
        return bk.constant(plan, isinstance(t, One), count, dtype)
    if isinstance(t, LNeg):
        return bk.lneg(plan, eval_batch(plan, t.arg, env, count, dtype))
    if isinstance(t, RNeg):
        return bk.rneg(plan, eval_batch(plan, t.arg, env, count, dtype))
    op = _BATCH_BINARY[type(t)]
    return op(plan, eval_batch(plan, t.left, env, count, dtype),
              eval_batch(plan, t.right, env, count, dtype))


def identity_mask(plan: bk.Plan, ident: Identity, env: Mapping[str, bk.Batch], count: int,
                  dtype=np.int64) -> np.ndarray:
    vals = [eval_batch(plan, t, env, count, dtype) for t in ident.terms]
    if ident.kind is IdentityKind.INEQUATION:
        return bk.meet(plan, vals[0], vals[1]).equal(vals[0])
    ok = np.ones(count, dtype=bool)
    for v in vals[1:]:
        ok &= v.equal(vals[0])
    return ok


# ---- laws that are not single identities ----------------------------------

@dataclass(frozen=True)
class Adjointness:
    """x*y <= z  iff  y <= x\\z  iff  x <= z/y."""

    name: str = "adjoint"

    def variables(self) -> list[str]:
        return ["x", "y", "z"]

    def scalar(self, shape: KiteShape, env: Mapping[str, KiteElement]) -> bool:
        x, y, z = env["x"], env["y"], env["z"]
        a = kite.leq(shape, kite.mul(shape, x, y), z)
        b = kite.leq(shape, y, kite.ldiv(shape, x, z))
        c = kite.leq(shape, x, kite.rdiv(shape, z, y))
        return a == b == c

    def mask(self, plan: bk.Plan, env: Mapping[str, bk.Batch], count: int, dtype) -> np.ndarray:
        x, y, z = env["x"], env["y"], env["z"]
        a = bk.leq(plan, bk.mul(plan, x, y), z)
        b = bk.leq(plan, y, bk.ldiv(plan, x, z))
        c = bk.leq(plan, x, bk.rdiv(plan, z, y))
        return (a == b) & (b == c)

    def magnitude_factor(self) -> int:
        return 4


def _law_scalar(shape, law, env) -> bool:
    if isinstance(law, Identity):
        return identity_holds(shape, law, env)
    return law.scalar(shape, env)


def _law_mask(plan, law, env, count, dtype) -> np.ndarray:
    if isinstance(law, Identity):
        return identity_mask(plan, law, env, count, dtype)
    return law.mask(plan, env, count, dtype)


def _magnitude(law, bound: int) -> int:
    if isinstance(law, Identity):
        occ = sum(occurrences(t) for t in law.terms)
        factor = 2 if law.kind is IdentityKind.INEQUATION else 1
        return bound * occ * factor
    return bound * law.magnitude_factor()


# ---- reports ----------------------------------------------------------------

@dataclass
class CheckReport:
    identity: str
    holds: bool
    counterexample: dict[str, KiteElement] | None
    evaluations: int
    shape: KiteShape
    bound: int
    total: int = 0
    variables: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        from .literals import format_element
        cex = None
        if self.counterexample is not None:
            cex = {k: format_element(v) for k, v in self.counterexample.items()}
        return {"identity": self.identity, "holds": self.holds,
                "counterexample": cex, "evaluations": self.evaluations}


def _name(law) -> str:
    if getattr(law, "name", ""):
        return law.name
    return str(law)


@lru_cache(maxsize=64)
def _cached_grid(shape: KiteShape, bound: int, object_mode: bool):
    dtype = object if object_mode else np.int64
    return bk.grid_batch(shape, bound, dtype)


def _digits(idx: np.ndarray, g: int, nvars: int) -> list[np.ndarray]:
    out = []
    for k in range(nvars):
        out.append((idx // g ** (nvars - 1 - k)) % g)
    return out


def _scan(shape: KiteShape, law, bound: int, start: int, stop: int, object_mode: bool) -> int:
    """Least violating assignment index in [start, stop), or -1."""
    plan, elems, gb = _cached_grid(shape, bound, object_mode)
    dtype = object if object_mode else np.int64
    names = law.variables()
    g = len(elems)
    for lo in range(start, stop, CHUNK):
        hi = min(stop, lo + CHUNK)
        idx = np.arange(lo, hi, dtype=np.int64)
        env = {v: gb.take(d) for v, d in zip(names, _digits(idx, g, len(names)))}
        ok = _law_mask(plan, law, env, hi - lo, dtype)
        bad = np.flatnonzero(~ok)
        if bad.size:
            return lo + int(bad[0])
    return -1


def check_identity(shape: KiteShape, law, bound: int, *, engine: str = "batch",
                   workers: int = 1, max_evals: int | None = None) -> CheckReport:
    """Exhaustively check `law` on every assignment of grid elements with magnitude <= bound."""
    if bound < 0:
        raise ValueError("bound must be >= 0")
    cap = default_max_evals() if max_evals is None else max_evals
    names = law.variables()
    g = kite.grid_size(shape, bound)
    total = g ** len(names)
    if total > cap:
        raise BudgetExceeded(total, cap)

    if engine == "scalar":
        first = _scalar_scan(shape, law, bound, names)
    elif engine == "batch":
        object_mode = _magnitude(law, bound) >= bk.OVERFLOW_LIMIT
        first = _parallel_scan(shape, law, bound, total, workers, object_mode)
    else:
        raise ValueError(f"unknown engine {engine!r}")

    if first < 0:
        return CheckReport(_name(law), True, None, total, shape, bound, total, names)
    elems = kite.grid(shape, bound)
    digits = [(first // g ** (len(names) - 1 - k)) % g for k in range(len(names))]
    cex = {v: elems[d] for v, d in zip(names, digits)}
    return CheckReport(_name(law), False, cex, first + 1, shape, bound, total, names)


def _scalar_scan(shape, law, bound, names) -> int:
    import itertools
    elems = kite.grid(shape, bound)
    for n, combo in enumerate(itertools.product(elems, repeat=len(names))):
        if not _law_scalar(shape, law, dict(zip(names, combo))):
            return n
    return -1


def _parallel_scan(shape, law, bound, total, workers, object_mode) -> int:
    if workers <= 1 or total <= CHUNK:
        return _scan(shape, law, bound, 0, total, object_mode)
    span = max(CHUNK, -(-total // (workers * 4)))
    ranges = [(s, min(total, s + span)) for s in range(0, total, span)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # one wave at a time; the earliest wave with a hit holds the global minimum
        for w in range(0, len(ranges), workers):
            wave = ranges[w:w + workers]
            futs = [pool.submit(_scan, shape, law, bound, s, e, object_mode) for s, e in wave]
            hits = [r for r in (f.result() for f in futs) if r >= 0]
            if hits:
                return min(hits)
    return -1


def associativity() -> Identity:
    from .terms import parse_identity
    return parse_identity("(x*y)*z = x*(y*z)", name="assoc")


def check_associativity(shape: KiteShape, bound: int, **kw) -> CheckReport:
    return check_identity(shape, associativity(), bound, **kw)


def check_adjointness(shape: KiteShape, bound: int, **kw) -> CheckReport:
    return check_identity(shape, Adjointness(), bound, **kw)
