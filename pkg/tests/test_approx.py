import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kitecalc import approx, kite
from kitecalc.approx import (
    OPS, UNARY, LevelFamily, family_op, finite_support_elements, hom_defect, injectivity_at_depth,
    least_k, level_mismatches, mu_minus, nu, nu_prime, sim_check, sweep,
)
from kitecalc.kite import L, Side, U
from kitecalc.literals import parse_element as P

from .strategies import sparse_elements


def test_mu_minus_examples():
    fam = mu_minus(P("U{0:-1}"), 2)
    assert fam.levels == (U(-1), U(0, -1, 0), U(0, 0, -1, 0, 0))
    assert all(x == kite.one(approx.level_shape("mu", n)) for n, x in enumerate(mu_minus(P("U{}"), 3).levels))
    fam = mu_minus(P("L{-1:2,1:3}"), 2)
    assert fam.levels[1] == L(2, 0, 3)
    assert fam.levels[2] == L(0, 2, 0, 3, 0)
    with pytest.raises(ValueError):
        mu_minus(P("U{3:-1}"), 2)


def test_nu_examples():
    assert nu_prime(P("L{0:1}"), 2).levels[2] == L(0, 1)
    assert nu(P("L{0:1}"), 2).levels[2] == L(1, 0)
    assert nu(P("U{0:-1,2:-2}"), 2).levels == (U(-1), U(-1, 0), U(-1, 0, -2))
    assert all(x.entries == (kite.GroupVector((0,)),) * len(x.entries) for x in nu(P("U{}"), 3).levels)
    with pytest.raises(ValueError):
        nu(P("L{4:1}"), 3)


def test_sim_check_examples():
    a = mu_minus(P("U{0:-1}"), 4)
    assert sim_check(a, a, 0).holds and least_k(a, a) == 0
    # differing only at the extreme labels of each level
    b = LevelFamily("mu", Side.UPPER, tuple(
        U(*([-1] + [0] * (2 * n - 1) + [-1])) if n else U(-1) for n in range(5)))
    c = LevelFamily("mu", Side.UPPER, tuple(U(*([0] * (2 * n + 1))) for n in range(5)))
    assert not sim_check(b, c, 0).holds
    assert least_k(b, c) == 1
    assert least_k(mu_minus(P("U{0:-1}"), 6), mu_minus(P("U{0:-2}"), 6)) is None
    with pytest.raises(ValueError):
        sim_check(mu_minus(P("U{}"), 2), mu_minus(P("L{}"), 2), 0)


def test_family_op_examples():
    u, w = P("L{0:5}"), P("U{1:-3}")
    fam = family_op("mul", mu_minus(u, 3), mu_minus(w, 3))
    # level n: entry at label j is max(f_j + a_{j+1}, 0), the last one wrapping to label -n
    for n, x in enumerate(fam.levels):
        labels = list(range(-n, n + 1))
        expect = []
        for p, j in enumerate(labels):
            nxt = labels[(p + 1) % len(labels)]
            expect.append(max(u.at(j, 1).coords[0] + w.at(nxt, 1).coords[0], 0))
        assert x == L(*expect)
    one = mu_minus(P("U{}"), 3)
    assert family_op("mul", one, mu_minus(u, 3)) == mu_minus(u, 3)
    zero = family_op("mul", mu_minus(u, 3), mu_minus(P("L{1:2}"), 3))
    assert all(not x.support() for x in zero.levels)
    with pytest.raises(ValueError):
        family_op("pow", one, one)


def test_hom_defect_examples():
    assert hom_defect("mul", P("L{0:5}"), P("U{1:-3}"), 4) <= 1
    assert hom_defect("mul", P("U{}"), P("U{}"), 4) == 0
    assert hom_defect("meet", P("U{-1:-2}"), P("L{1:3}"), 4) == 0


@settings(max_examples=40)
@given(sparse_elements(-2, 2, 2), sparse_elements(-2, 2, 2), st.sampled_from(OPS))
def test_mu_defect_at_most_one_and_constant_in_depth(u, w, op):
    arg = None if op in UNARY else w
    d6, d8 = hom_defect(op, u, arg, 6), hom_defect(op, u, arg, 8)
    assert d6 is not None and d6 <= 1
    assert d6 == d8


@settings(max_examples=25)
@given(sparse_elements(-2, 2, 2), sparse_elements(-2, 2, 2), st.sampled_from(OPS))
def test_sweep_matches_scalar_defect(u, w, op):
    elems = [u, w]
    res = sweep("mu", op, elems, 5, 2)
    pairs = [(a, None) for a in elems] if op in UNARY else [(a, b) for a in elems for b in elems]
    assert res.max_defect == max(hom_defect(op, a, b, 5) for a, b in pairs)


@settings(max_examples=25)
@given(sparse_elements(0, 2, 2), sparse_elements(0, 2, 2), st.sampled_from(OPS),
       st.sampled_from(["nu", "nu_prime"]))
def test_sweep_matches_scalar_level_mismatches(u, w, op, kind):
    elems = [u, w]
    res = sweep(kind, op, elems, 4, 2)
    pairs = [(a, None) for a in elems] if op in UNARY else [(a, b) for a in elems for b in elems]
    scalar = [(r, n, s, p) for r, (a, b) in enumerate(pairs) for n, s, p in level_mismatches(kind, op, a, b, 4)]
    assert res.mismatches == scalar


def test_injectivity_at_depth():
    elems = finite_support_elements("mu", 1, 1)
    assert len(elems) == 2 * 8
    assert injectivity_at_depth(elems, 4, 1) == []
    a, b = mu_minus(P("U{1:-1}"), 4), mu_minus(P("U{}"), 4)
    # distinct elements are separated once N >= k + r + 1
    for k in range(0, 3):
        assert not sim_check(a, b, k).holds


@given(sparse_elements(-2, 2, 2), sparse_elements(-2, 2, 2))
def test_least_k_is_monotone(u, w):
    if u.side is not w.side:
        return
    a, b = mu_minus(u, 6), mu_minus(w, 6)
    k = least_k(a, b)
    if k is not None:
        assert all(sim_check(a, b, j).holds for j in range(k, 7))


# ---- exactness of nu and nu' -----------------------------------------------------

_NU_INEXACT = {"nu": {"rdiv", "rneg"}, "nu_prime": {"ldiv", "lneg"}}


@pytest.mark.parametrize("kind", ["nu", "nu_prime"])
def test_nu_exact_except_lower_lower_divisions(kind):
    elems = finite_support_elements(kind, 2, 2)
    for op in OPS:
        res = sweep(kind, op, elems, 6, 2)
        assert res.exact == (op not in _NU_INEXACT[kind]), op
        # every mismatch sits at source index n of a level n no deeper than the support
        for _, n, side, p in res.mismatches:
            assert side == "U" and approx.level_indices(kind, Side.UPPER, n)[p] == n and n <= 2


def test_nu_level_zero_obstruction():
    # level 0 of nu is K_{1,0}, where every Lower image is the bottom, so its right
    # negation must be the top, while rn of L{0:1} in kite{OO01} is not the top
    src = approx.source_shape("nu")
    x = P("L{0:1}")
    assert kite.rneg(src, x) == P("U{0:-1}")
    level0 = approx.level_shape("nu", 0)
    assert nu(x, 2).levels[0] == kite.zero(level0)
    assert kite.rneg(level0, kite.zero(level0)) == kite.one(level0)
    assert level_mismatches("nu", "rneg", x, None, 2) == [(0, "U", 0)]
    assert level_mismatches("nu_prime", "lneg", x, None, 2) == [(0, "U", 0)]
