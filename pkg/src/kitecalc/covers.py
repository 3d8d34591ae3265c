"""The Z_n^dagger family and the facts that separate the varieties it generates.

Z_n^dagger is K_{n+1,n}^{0,1}(Z) with J = {0..n-1}, lam(j) = j, rho(j) = j+1.
Z_0^dagger is K_{2,1}^{0,1} over the trivial group, the two-element Boolean
algebra.  f~ is left negation and f- is right negation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from . import batch as bk
from . import kite
from .checker import CheckReport, check_identity
from .kite import KiteElement, KiteShape, Side
from .terms import catalog


def zdag(n: int) -> KiteShape:
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return KiteShape.finite(2, 1, [0], [1], group_dim=0)
    return kite.path_shape(n)


def all_minus_one(n: int) -> KiteElement:
    """The Upper element <-1, ..., -1> of Z_n^dagger."""
    return kite.U(*([-1] * (n + 1)))


def f_sim_iterate(shape: KiteShape, x: KiteElement, k: int) -> KiteElement:
    if k < 0:
        raise ValueError("k must be >= 0")
    for _ in range(k):
        x = kite.lneg(shape, x)
    return x


def f_minus_iterate(shape: KiteShape, x: KiteElement, k: int) -> KiteElement:
    if k < 0:
        raise ValueError("k must be >= 0")
    for _ in range(k):
        x = kite.rneg(shape, x)
    return x


def is_constant(shape: KiteShape, x: KiteElement) -> bool:
    return x == kite.zero(shape) or x == kite.one(shape)


def _report(name: str, shape: KiteShape, bound: int, elems, ok: np.ndarray) -> CheckReport:
    bad = np.flatnonzero(~ok)
    total = len(elems)
    if bad.size:
        r = int(bad[0])
        return CheckReport(name, False, {"x": elems[r]}, r + 1, shape, bound, total, ["x"])
    return CheckReport(name, True, None, total, shape, bound, total, ["x"])


def check_eq2(shape: KiteShape, bound: int) -> CheckReport:
    """x*x = 0 or (ln x)*(ln x) = 0 for every grid element."""
    plan, elems, gb = bk.grid_batch(shape, bound)
    z = bk.constant(plan, False, len(elems))
    ln = bk.lneg(plan, gb)
    ok = bk.mul(plan, gb, gb).equal(z) | bk.mul(plan, ln, ln).equal(z)
    return _report("eq2", shape, bound, elems, ok)


def check_eq3(n: int, bound: int, exponent: int | None = None) -> CheckReport:
    """f~^exponent(x) is 0 or 1 for every grid element of Z_n^dagger (default exponent 2n+1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    exponent = 2 * n + 1 if exponent is None else exponent
    shape = zdag(n)
    plan, elems, gb = bk.grid_batch(shape, bound)
    x = gb
    for _ in range(exponent):
        x = bk.lneg(plan, x)
    ok = ~x.vals.reshape(len(elems), -1).any(axis=1)
    return _report(f"eq3[{exponent}]", shape, bound, elems, ok)


@dataclass(frozen=True)
class SeparationReport:
    n: int
    m: int
    exponent: int
    value: KiteElement

    @property
    def separates(self) -> bool:
        return not is_constant(zdag(self.m), self.value)


def separation_witness(n: int, m: int) -> SeparationReport:
    """f~^(2n+1) at <-1,...,-1> of Z_m^dagger; a non-constant value violates (4) for n."""
    if not 1 <= n < m:
        raise ValueError(f"need 1 <= n < m, got n={n}, m={m}")
    shape = zdag(m)
    return SeparationReport(n, m, 2 * n + 1, f_sim_iterate(shape, all_minus_one(m), 2 * n + 1))


@dataclass
class Claim1Report:
    n: int
    generator: KiteElement
    g: int
    status: str  # "contains", "missing" or "indeterminate"
    closure_size: int
    targets: list[KiteElement]
    missing: list[KiteElement] = field(default_factory=list)

    @property
    def contains_generators(self) -> bool | None:
        return {"contains": True, "missing": False}.get(self.status)


def _in_box(x: KiteElement, bound: int) -> bool:
    return all(abs(c) <= bound for v in x.entries for c in v.coords)


def subalgebra_closure(shape: KiteShape, gens: list[KiteElement], bound: int,
                       budget: int = 5000) -> tuple[set[KiteElement], bool]:
    """Closure under all operations and constants, keeping only elements inside the bound-box.

    Returns (elements, complete); complete is False when the budget ran out.
    """
    found = [kite.zero(shape), kite.one(shape)]
    for x in gens:
        if x not in found:
            found.append(x)
    seen = set(found)
    done = 0
    while done < len(found):
        x = found[done]
        done += 1
        new = [kite.lneg(shape, x), kite.rneg(shape, x)]
        for y in found[:done]:
            for op in kite.BINARY_OPS.values():
                new.append(op(shape, x, y))
                new.append(op(shape, y, x))
        for z in new:
            if z not in seen and _in_box(z, bound):
                seen.add(z)
                found.append(z)
                if len(found) > budget:
                    return seen, False
    return seen, True


def claim1_probe(n: int, a: KiteElement, bound: int, budget: int = 5000) -> Claim1Report:
    """Does the subalgebra generated by a (inside the box) hold every one-dimensional gcd generator?"""
    shape = zdag(n)
    kite.conform(shape, a)
    if a == kite.one(shape):
        raise ValueError("a must be nontrivial")
    mags = [abs(v.coords[0]) for v in a.entries]
    g = 0
    for m in mags:
        g = gcd(g, m)
    if g == 0:
        raise ValueError("a must be nontrivial")
    targets = []
    for i in range(shape.i_size):
        vals = [0] * shape.i_size
        vals[i] = -g
        targets.append(KiteElement.dense(Side.UPPER, vals))
    for j in range(shape.j_size):
        vals = [0] * shape.j_size
        vals[j] = g
        targets.append(KiteElement.dense(Side.LOWER, vals))
    closure, complete = subalgebra_closure(shape, [a], bound, budget)
    missing = [t for t in targets if t not in closure]
    if not missing:
        status = "contains"
    else:
        status = "missing" if complete else "indeterminate"
    return Claim1Report(n, a, g, status, len(closure), targets, missing)


def normal_valued_check(shape: KiteShape, bound: int, **kw) -> CheckReport:
    """x^2 y^2 <= y x on the grid."""
    return check_identity(shape, catalog().nvalued, bound, **kw)


@dataclass
class CoversRow:
    n: int
    exponent: int
    holds: bool
    sharp: bool
    separations: dict[int, bool]


def covers_table(n_max: int, bound: int) -> list[CoversRow]:
    rows = []
    for n in range(1, n_max + 1):
        eq3 = check_eq3(n, bound)
        sharp = not is_constant(zdag(n), f_sim_iterate(zdag(n), all_minus_one(n), 2 * n - 1))
        seps = {m: separation_witness(n, m).separates for m in range(n + 1, n_max + 1)}
        rows.append(CoversRow(n, 2 * n + 1, eq3.holds, sharp, seps))
    return rows
