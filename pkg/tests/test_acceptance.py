"""Acceptance criteria, one test per criterion.

Each test records a single PASS/FAIL line, shown in the terminal summary
under "acceptance criteria", and then asserts the criterion in full.
"""

import time
from collections import Counter

from kitecalc import approx, kite
from kitecalc.checker import check_adjointness, check_associativity, check_identity
from kitecalc.covers import (
    all_minus_one, check_eq2, check_eq3, f_sim_iterate, is_constant, normal_valued_check,
    separation_witness, zdag,
)
from kitecalc.kite import KiteShape, U, census, renumber
from kitecalc.structure import (
    canonical_shape, classify, components, decompose, is_good_shape, is_psmv_shape, one_dimensional,
    rotation_report, si_condition,
)
from kitecalc.terms import catalog

from .conftest import ACCEPTANCE_LINES

CAT = catalog()
CENSUS = list(census(3))


def record(number: int, ok: bool, detail: str) -> None:
    line = f"CRITERION {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def test_criterion_1_pseudo_bl_axioms():
    t0 = time.perf_counter()
    failures = []
    for s in CENSUS:
        for name in ("integral", "zerobounded", "divis", "divint", "prelin"):
            if not check_identity(s, CAT[name], 2).holds:
                failures.append((name, str(s)))
        if not check_associativity(s, 2).holds:
            failures.append(("assoc", str(s)))
        if not check_adjointness(s, 2).holds:
            failures.append(("adjoint", str(s)))
    secs = time.perf_counter() - t0
    ok = not failures and secs < 120
    record(1, ok, f"{len(CENSUS)} shapes, M=2, {len(failures)} failures, {secs:.1f}s")
    assert not failures, failures[:5]
    assert secs < 120


def test_criterion_2_characterizations():
    mismatches = []
    for s in CENSUS:
        good = check_identity(s, CAT.good, 2).holds
        if good != (s.lam_range == s.rho_range) or good != is_good_shape(s):
            mismatches.append(("good", str(s)))
        full = frozenset(range(s.i_size))
        mv = check_identity(s, CAT.mvint, 2).holds
        if mv != (s.lam_range == full == s.rho_range) or mv != is_psmv_shape(s):
            mismatches.append(("mvint", str(s)))
    record(2, not mismatches, f"{len(CENSUS)} shapes, {len(mismatches)} mismatches")
    assert not mismatches, mismatches


def test_criterion_3_rotations():
    bad = []
    count = 0
    for s in CENSUS:
        for i in range(s.i_size):
            for v in (-1, -2, -3):
                count += 1
                rep = rotation_report(s, one_dimensional(s, i, v))
                if not rep.holds:
                    bad.append((str(s), i, v))
    record(3, not bad, f"{count} one-dimensional elements, {len(bad)} failing")
    assert not bad, bad[:5]


def test_criterion_4_classification():
    problems = []
    for s in CENSUS:
        res = classify(s)
        if si_condition(s) != (len(components(s)) <= 1):
            problems.append(("si_condition vs connectivity", str(s)))
        if res.si != si_condition(s):
            problems.append(("si flag", str(s)))
        if res.si:
            if res.type_tag.kind not in (1, 5) or renumber(s, *res.witness) != canonical_shape(res.type_tag):
                problems.append(("witness", str(s)))
        elif str(res.type_tag) != "NotSI":
            problems.append(("tag", str(s)))
    counts = Counter(str(classify(s).type_tag) for s in CENSUS)
    summary = ", ".join(f"{k} {v}" for k, v in sorted(counts.items()))
    record(4, not problems, f"{summary}; {len(problems)} problems")
    assert not problems, problems


def test_criterion_5_decomposition():
    failures = []
    count = 0
    for s in CENSUS:
        if classify(s).si:
            continue
        count += 1
        rep = decompose(s, 2)
        if not rep.ok:
            failures.append((str(s), rep.failures[:2]))
    record(5, not failures, f"{count} non-SI shapes, M=2, {len(failures)} failures")
    assert not failures, failures


def test_criterion_6_embeddings():
    t0 = time.perf_counter()
    rep = approx.generation_report(N=8, radius=2, magnitude=2)
    secs = time.perf_counter() - t0
    inexact_nu = [op for op, ok in rep.nu_exact.items() if not ok]
    inexact_nup = [op for op, ok in rep.nu_prime_exact.items() if not ok]
    mu_ok = rep.mu_injective and all(d is not None and d <= 1 for d in rep.mu_defect.values())
    detail = (f"mu injective={rep.mu_injective}, mu defects={rep.mu_defect}; "
              f"nu inexact for {inexact_nu or 'none'}, nu' inexact for {inexact_nup or 'none'}; {secs:.1f}s")
    record(6, rep.holds and secs < 60, detail)
    assert mu_ok, detail
    assert not inexact_nu and not inexact_nup, detail
    assert secs < 60


def test_criterion_7_covers():
    problems = []
    for s in CENSUS:
        if not check_eq2(s, 2).holds:
            problems.append(("eq2", str(s)))
        if not normal_valued_check(s, 2).holds:
            problems.append(("nvalued", str(s)))
    for n in (1, 2, 3):
        if not check_eq3(n, 2).holds:
            problems.append(("eq3", n))
        if check_eq3(n, 2, exponent=2 * n - 1).holds:
            problems.append(("eq3 sharpness", n))
        if is_constant(zdag(n), f_sim_iterate(zdag(n), all_minus_one(n), 2 * n - 1)):
            problems.append(("all -1 witness", n))
    pairs = [(n, m) for m in range(2, 5) for n in range(1, m)]
    for n, m in pairs:
        if not separation_witness(n, m).separates:
            problems.append(("separation", n, m))
    record(7, not problems, f"census eq2+nvalued, eq3 n=1..3, {len(pairs)} separations; {len(problems)} problems")
    assert not problems, problems


def test_criterion_8_non_goodness():
    k21 = KiteShape.finite(2, 1, [0], [1])
    chang = KiteShape.finite(1, 1, [0], [0])
    good = check_identity(k21, CAT.good, 2)
    dbl = check_identity(k21, CAT.dblneg, 2)
    mv = check_identity(chang, CAT.mvint, 2)
    ok = (not good.holds and good.counterexample == {"x": U(0, -1)}
          and not dbl.holds and mv.holds)
    record(8, ok, f"good witness {good.counterexample}, dblneg holds={dbl.holds}, Chang mvint holds={mv.holds}")
    assert ok
