"""Structure theory of kite shapes and elements.

Shape predicates (good, pseudo-MV), connectivity of I+J under the incidence
graph j - lam(j), j - rho(j), subdirect irreducibility and the canonical
classification, component decomposition, Boolean elements, the rotation
claims for one-dimensional elements, and bounded normal-filter reachability.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

import networkx as nx
import numpy as np

from . import batch as bk
from . import kite
from .kite import Kind, KiteElement, KiteShape, Side


# ---- shape predicates -------------------------------------------------------

def is_good_shape(shape: KiteShape) -> bool:
    """ln rn x = rn ln x holds iff lam(J) = rho(J)."""
    if not shape.is_finite:
        return shape.kind is Kind.ZZ01
    return shape.lam_range == shape.rho_range


def is_psmv_shape(shape: KiteShape) -> bool:
    """Pseudo MV iff lam(J) = I = rho(J)."""
    if not shape.is_finite:
        return shape.kind is Kind.ZZ01
    full = frozenset(range(shape.i_size))
    return shape.lam_range == full == shape.rho_range


# ---- connectivity -------------------------------------------------------------

Vertex = tuple[str, int]


@dataclass(frozen=True)
class ComponentPartition:
    blocks: tuple[frozenset[Vertex], ...]

    def __len__(self) -> int:
        return len(self.blocks)

    def block_of(self, v: Vertex) -> int:
        for n, b in enumerate(self.blocks):
            if v in b:
                return n
        raise KeyError(v)


def components(shape: KiteShape) -> ComponentPartition:
    if not shape.is_finite:
        raise ValueError("components needs a finite shape")
    g = nx.Graph()
    g.add_nodes_from(("I", i) for i in range(shape.i_size))
    g.add_nodes_from(("J", j) for j in range(shape.j_size))
    for j in range(shape.j_size):
        g.add_edge(("J", j), ("I", shape.lam_map[j]))
        g.add_edge(("J", j), ("I", shape.rho_map[j]))
    blocks = [frozenset(c) for c in nx.connected_components(g)]
    blocks.sort(key=lambda b: min(b, key=lambda v: (v[0] != "I", v[1])))
    return ComponentPartition(tuple(blocks))


def _orbit(start: int, step, limit: int) -> set[int]:
    seen = {start}
    cur = start
    for _ in range(limit):
        cur = step(cur)
        if cur is None:
            break
        seen.add(cur)
    return seen


def si_condition(shape: KiteShape) -> bool:
    """Every i reaches every j by iterating rho.lam^-1 or lam.rho^-1 at most |I| times."""
    if not shape.is_finite:
        raise ValueError("si_condition needs a finite shape")
    n = shape.i_size

    def fwd(i):
        j = shape.lam_inv(i)
        return None if j is None else shape.rho(j)

    def back(i):
        j = shape.rho_inv(i)
        return None if j is None else shape.lam(j)

    for i in range(n):
        if len(_orbit(i, fwd, n) | _orbit(i, back, n)) != n:
            return False
    return True


# ---- classification ---------------------------------------------------------

@dataclass(frozen=True)
class TypeTag:
    kind: int | None  # 1..5, None for NotSI
    n: int | None = None

    def __str__(self) -> str:
        if self.kind is None:
            return "NotSI"
        return f"Type{self.kind}" + (f"({self.n})" if self.n is not None else "")


NOT_SI = TypeTag(None)


@dataclass(frozen=True)
class ClassificationResult:
    si: bool
    type_tag: TypeTag
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None


def canonical_shape(tag: TypeTag, group_dim: int = 1) -> KiteShape:
    if tag.kind == 1:
        return kite.cycle_shape(tag.n, group_dim)
    if tag.kind == 5:
        return kite.path_shape(tag.n, group_dim)
    if tag.kind in (2, 3, 4):
        return KiteShape.infinite({2: Kind.ZZ01, 3: Kind.OO01, 4: Kind.OO10}[tag.kind], group_dim)
    raise ValueError(f"{tag} has no canonical shape")


def _numbering(shape: KiteShape, start: int) -> tuple[list[int], list[int]]:
    """Walk i0 -lam^-1-> j0 -rho-> i1 -lam^-1-> j1 ... recording visit order."""
    order_i, order_j = [start], []
    cur = start
    while True:
        j = shape.lam_inv(cur)
        if j is None:
            break
        order_j.append(j)
        nxt = shape.rho(j)
        if nxt == start:
            break
        order_i.append(nxt)
        cur = nxt
    return order_i, order_j


def classify(shape: KiteShape) -> ClassificationResult:
    if not shape.is_finite:
        if shape.group_dim >= 2:
            return ClassificationResult(False, NOT_SI)
        tag = TypeTag({Kind.ZZ01: 2, Kind.OO01: 3, Kind.OO10: 4}[shape.kind])
        return ClassificationResult(True, tag)
    if shape.i_size == 0 or shape.group_dim == 0:
        # only the two constants exist: the two-element Boolean algebra K_{0,0}
        return ClassificationResult(True, TypeTag(1, 0), ((), ()) if shape.i_size == 0 else None)
    if shape.group_dim >= 2 or not si_condition(shape):
        return ClassificationResult(False, NOT_SI)
    n_i, n_j = shape.i_size, shape.j_size
    if n_i == n_j:
        order_i, order_j = _numbering(shape, 0)
        kind = 1
    else:
        start = min(set(range(n_i)) - shape.rho_range)
        order_i, order_j = _numbering(shape, start)
        kind = 5
    if len(order_i) != n_i or len(order_j) != n_j:
        raise AssertionError(f"numbering walk did not cover {shape}")
    perm_i = [0] * n_i
    perm_j = [0] * n_j
    for new, old in enumerate(order_i):
        perm_i[old] = new
    for new, old in enumerate(order_j):
        perm_j[old] = new
    return ClassificationResult(True, TypeTag(kind, n_j), (tuple(perm_i), tuple(perm_j)))


# ---- decomposition ----------------------------------------------------------

@dataclass(frozen=True)
class Factor:
    shape: KiteShape
    i_index: tuple[int, ...]
    j_index: tuple[int, ...]
    classification: ClassificationResult

    def project(self, x: KiteElement) -> KiteElement:
        idx = self.i_index if x.is_upper else self.j_index
        return KiteElement(x.side, tuple(x.entries[k] for k in idx))


@dataclass
class DecompositionReport:
    factors: list[Factor]
    injective: bool
    preserving: bool
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.injective and self.preserving


def restrict(shape: KiteShape, i_index: Iterable[int], j_index: Iterable[int]) -> KiteShape:
    i_index, j_index = list(i_index), list(j_index)
    pos = {i: n for n, i in enumerate(i_index)}
    lam = [pos[shape.lam_map[j]] for j in j_index]
    rho = [pos[shape.rho_map[j]] for j in j_index]
    return KiteShape.finite(len(i_index), len(j_index), lam, rho, shape.group_dim)


def factors(shape: KiteShape) -> list[Factor]:
    part = components(shape)
    if len(part) <= 1:
        return [Factor(shape, tuple(range(shape.i_size)), tuple(range(shape.j_size)), classify(shape))]
    out = []
    for block in part.blocks:
        i_index = tuple(sorted(k for s, k in block if s == "I"))
        j_index = tuple(sorted(k for s, k in block if s == "J"))
        sub = restrict(shape, i_index, j_index)
        out.append(Factor(sub, i_index, j_index, classify(sub)))
    return out


def _project_batch(b: bk.Batch, f: Factor, plan: bk.Plan) -> bk.Batch:
    vals = np.zeros((len(b), plan.width, plan.dim), dtype=b.vals.dtype)
    up = b.side
    if f.i_index:
        vals[up] = b.vals[up][:, list(f.i_index)]
    if f.j_index:
        vals[~up, :len(f.j_index)] = b.vals[~up][:, list(f.j_index)]
    return bk.Batch(b.side.copy(), vals)


def decompose(shape: KiteShape, bound: int) -> DecompositionReport:
    """Split into component factors and verify the product map on the grid."""
    facs = factors(shape)
    plan, elems, gb = bk.grid_batch(shape, bound)
    failures: list[str] = []

    keys = {}
    injective = True
    for r, x in enumerate(elems):
        key = tuple(f.project(x) for f in facs)
        if key in keys:
            injective = False
            failures.append(f"{elems[keys[key]]} and {x} have the same image")
            break
        keys[key] = r

    g = len(elems)
    xi, yi = np.divmod(np.arange(g * g), g)
    x, y = gb.take(xi), gb.take(yi)
    preserving = True
    for f in facs:
        fplan = bk.plan_for(f.shape)
        px, py = _project_batch(x, f, fplan), _project_batch(y, f, fplan)
        for name, op in bk.BINARY.items():
            lhs = _project_batch(op(plan, x, y), f, fplan)
            rhs = op(fplan, px, py)
            bad = np.flatnonzero(~lhs.equal(rhs))
            if bad.size:
                preserving = False
                r = int(bad[0])
                failures.append(f"{name} not preserved on factor {f.shape} at "
                                f"({elems[xi[r]]}, {elems[yi[r]]})")
        for const, fconst in ((kite.one(shape), kite.one(f.shape)), (kite.zero(shape), kite.zero(f.shape))):
            if f.project(const) != fconst:
                preserving = False
                failures.append(f"constant {const} not preserved on factor {f.shape}")
    return DecompositionReport(facs, injective, preserving, failures)


# ---- Boolean elements -------------------------------------------------------

def boolean_elements(shape: KiteShape, bound: int) -> list[KiteElement]:
    """Grid elements x with x*x = x and ln rn x = x = rn ln x."""
    plan, elems, gb = bk.grid_batch(shape, bound)
    ok = bk.mul(plan, gb, gb).equal(gb)
    ok &= bk.lneg(plan, bk.rneg(plan, gb)).equal(gb)
    ok &= bk.rneg(plan, bk.lneg(plan, gb)).equal(gb)
    return [elems[r] for r in np.flatnonzero(ok)]


# ---- rotations ------------------------------------------------------------

@dataclass(frozen=True)
class Claim:
    number: int
    observed: bool
    predicted: bool

    @property
    def holds(self) -> bool:
        return self.observed == self.predicted


@dataclass(frozen=True)
class RotationReport:
    index: int
    ln_ln: KiteElement
    ln_rn: KiteElement
    rn_ln: KiteElement
    rn_rn: KiteElement
    claims: tuple[Claim, ...]
    dimension_ok: bool

    @property
    def holds(self) -> bool:
        return self.dimension_ok and all(c.holds for c in self.claims)


def _dimension(shape: KiteShape, x: KiteElement) -> int:
    return len(x.support())


def rotation_report(shape: KiteShape, a: KiteElement) -> RotationReport:
    kite.conform(shape, a)
    if not a.is_upper or len(a.support()) != 1:
        raise ValueError(f"{a} is not a one-dimensional Upper element")
    (i,) = a.support()
    ln = lambda x: kite.lneg(shape, x)  # noqa: E731
    rn = lambda x: kite.rneg(shape, x)  # noqa: E731
    top = kite.one(shape)
    lnln, lnrn, rnln, rnrn = ln(ln(a)), ln(rn(a)), rn(ln(a)), rn(rn(a))

    def below_one(x):
        return kite.leq(shape, x, top) and x != top

    li, ri = shape.lam_inv(i), shape.rho_inv(i)
    claims = (
        Claim(1, below_one(lnln) and below_one(rnln), li is not None),
        Claim(2, below_one(rnrn) and below_one(lnrn), ri is not None),
        Claim(3, rnln == a, li is not None),
        Claim(4, lnrn == a, ri is not None),
        Claim(5, kite.join(shape, lnln, a) == top, li is None or shape.rho(li) != i),
        Claim(6, kite.join(shape, rnrn, a) == top, ri is None or shape.lam(ri) != i),
    )
    doubles = (lnln, lnrn, rnln, rnrn)
    dims_ok = all(x.is_upper and _dimension(shape, x) <= 1 for x in doubles)
    if li is not None and ri is not None:
        dims_ok = dims_ok and all(_dimension(shape, x) == 1 for x in doubles)
    return RotationReport(i, lnln, lnrn, rnln, rnrn, claims, dims_ok)


def one_dimensional(shape: KiteShape, index: int, value: int) -> KiteElement:
    """Upper element with `value` at `index` (d = 1) and e elsewhere."""
    if shape.is_finite:
        vals = [0] * shape.i_size
        vals[index] = value
        return KiteElement.dense(Side.UPPER, vals)
    return KiteElement.sparse_from(Side.UPPER, {index: value})


# ---- normal filters -----------------------------------------------------------

@dataclass
class FilterReach:
    status: str  # "reached", "unreachable" or "indeterminate"
    trace: list[tuple[str, KiteElement]]
    explored: int

    @property
    def reached(self) -> bool | None:
        return {"reached": True, "unreachable": False}.get(self.status)


def _in_box(x: KiteElement, bound: int) -> bool:
    return all(abs(c) <= bound for v in x.entries for c in v.coords)


def filter_steps(shape: KiteShape, x: KiteElement, grid_elems: list[KiteElement]):
    """Single-element generator steps: conjugates by grid elements and double negations."""
    for y in grid_elems:
        left, right = kite.conjugates(shape, x, y)
        yield f"left conjugate by {y}", left
        yield f"right conjugate by {y}", right
    ln = lambda z: kite.lneg(shape, z)  # noqa: E731
    rn = lambda z: kite.rneg(shape, z)  # noqa: E731
    yield "ln ln", ln(ln(x))
    yield "rn rn", rn(rn(x))
    yield "ln rn", ln(rn(x))
    yield "rn ln", rn(ln(x))


def filter_reach(shape: KiteShape, seed: KiteElement, target: KiteElement, bound: int,
                 budget: int = 10_000) -> FilterReach:
    """Bounded closure of {seed} under filter generator steps inside the bound-box.

    Only Upper elements are kept: a Lower element in a filter makes it improper.
    The target counts as reached once some member lies below it.
    """
    if not (seed.is_upper and target.is_upper):
        raise ValueError("seed and target must be Upper elements")
    grid_elems = kite.grid(shape, bound)
    parent: dict[KiteElement, tuple[str, KiteElement | None]] = {seed: ("seed", None)}
    members = [seed]
    queue = deque([seed])

    def trace_to(x):
        out = []
        while x is not None:
            rule, prev = parent[x]
            out.append((rule, x))
            x = prev
        return out[::-1]

    def done(x):
        return kite.leq(shape, x, target)

    if done(seed):
        return FilterReach("reached", trace_to(seed), 1)
    while queue:
        x = queue.popleft()
        candidates = list(filter_steps(shape, x, grid_elems))
        for m in list(members):
            candidates.append((f"mul with {m}", kite.mul(shape, x, m)))
            candidates.append((f"meet with {m}", kite.meet(shape, x, m)))
        for rule, z in candidates:
            if not z.is_upper or z in parent or not _in_box(z, bound):
                continue
            parent[z] = (rule, x)
            members.append(z)
            if done(z):
                return FilterReach("reached", trace_to(z), len(members))
            if len(members) >= budget:
                return FilterReach("indeterminate", [], len(members))
            queue.append(z)
    return FilterReach("unreachable", [], len(members))


def ni_membership(x: KiteElement, m: int) -> bool:
    """Is x in N^I for N the negative part of mZ?"""
    if m < 1:
        raise ValueError("modulus must be >= 1")
    if not x.is_upper:
        raise ValueError(f"{x} is not an Upper element")
    values = [v for _, v in x.entries] if x.sparse else x.entries
    return all(c % m == 0 for v in values for c in v.coords)


def subgroup_member(x: KiteElement, axis: int) -> bool:
    """Is x in (M^-)^I for M the coordinate subgroup of Z^d along `axis`?"""
    if not x.is_upper:
        raise ValueError(f"{x} is not an Upper element")
    values = [v for _, v in x.entries] if x.sparse else x.entries
    return all(c == 0 for v in values for k, c in enumerate(v.coords) if k != axis)


def conjugation_violation(shape: KiteShape, member, bound: int):
    """First (x, y, conjugate) with x a member whose conjugate by grid y is not a member."""
    elems = kite.grid(shape, bound)
    for x in elems:
        if not x.is_upper or not member(x):
            continue
        for y in elems:
            for c in kite.conjugates(shape, x, y):
                if not c.is_upper or not member(c):
                    return x, y, c
    return None
