"""Acceptance criteria 1-8, one PASS/FAIL line each.

Run with pytest (lines are repeated in the terminal summary) or directly:
``python3 tests/test_acceptance.py``.
"""

import math
import time
from fractions import Fraction

import numpy as np

from inhomdim import (IFS, AnalyticSource, MethodSchedule, Similarity, best_bounds, check_cosc,
                      cre_liminf, dim_estimates, dyadic_ifs, profile_from_schedule, profile_of,
                      realize_cubeset, similarity_dimension)
from inhomdim.bounds import analytic_p
from inhomdim.cre import cre_at, slack
from inhomdim.orbital import build_orbital, verify_structure
from inhomdim.verify import (CRE_TS, exlem1_schedule, exlem2_schedule, quadrant_ifs,
                             random_deltas, random_dyadic_ifs, single_branch, stopping_checks,
                             suite_keylem, switch_pairs_ok)

RESULTS = []


def record(n, ok, detail):
    line = f"ACCEPTANCE {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    RESULTS.append(line)
    assert ok, line


def test_1_reference_brackets():
    start = time.perf_counter()
    a = best_bounds(1.5, AnalyticSource(5, 1.0, 4.5))
    b = best_bounds(1.0, AnalyticSource(5, 1.0, 2.0))
    elapsed = time.perf_counter() - start
    ok = (abs(a.supL - 1.756) <= 1e-3 and abs(a.infU - 2.200) <= 1e-3
          and abs(b.supL - 1.375) <= 1e-3 and abs(b.infU - 1.800) <= 1e-3 and elapsed < 1.0)
    record(1, ok, f"[{a.supL:.4f}, {a.infU:.4f}] and [{b.supL:.4f}, {b.infU:.4f}] "
                  f"in {elapsed:.2f}s")


def test_2_similarity_dimension():
    third = Fraction(1, 3)
    thirds = IFS([Similarity(third, (Fraction(i, 3),)) for i in range(3)])
    s1 = similarity_dimension(thirds)
    s2 = similarity_dimension(dyadic_ifs(1, [(1, 0), (2, 2)]))
    # quadratic oracle: x = 2^-s solves x^2 + x - 1 = 0
    oracle = -math.log2((-1 + math.sqrt(5)) / 2)
    ok = abs(s1 - 1) <= 1e-10 and abs(s2 - oracle) <= 1e-10
    record(2, ok, f"s(1/3 x3) = {s1:.12f}, s(1/2, 1/4) = {s2:.12f} vs {oracle:.12f}")


def test_3_stopping_set_suite():
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    cases = fails = 0
    for _ in range(50):
        system = random_dyadic_ifs(rng, d_max=3, n_max=5)
        for delta in random_deltas(rng, system, 20):
            fails += not all(stopping_checks(system, delta, sum_tol=1e-8))
            cases += 1
    elapsed = time.perf_counter() - start
    record(3, fails == 0 and elapsed < 10.0,
           f"{cases - fails}/{cases} (IFS, delta) cases in {elapsed:.2f}s")


def test_4_exlem2_end_to_end():
    start = time.perf_counter()
    sched = exlem2_schedule()
    prof = profile_from_schedule(sched)
    lo, hi = dim_estimates(prof)
    tol = 0.03 + slack(math.ceil(0.01 * sched.depth))
    errs = [abs(cre_liminf(prof, t) - analytic_p(5, 1.0, t)) for t in CRE_TS]
    ub, lb, _ = switch_pairs_ok(sched, 1, Fraction(9, 2))
    elapsed = time.perf_counter() - start
    ok = (abs(lo - 1) <= 0.05 and abs(hi - 4.5) <= 0.05 and max(errs) <= tol and ub and lb
          and elapsed < 30.0)
    record(4, ok, f"dims ({lo:.4f}, {hi:.4f}), max CRE error {max(errs):.5f} <= {tol:.3f}, "
                  f"switch bounds at {len(sched.switches)} switches, {elapsed:.2f}s")


def test_5_exlem1_end_to_end():
    sched = exlem1_schedule()
    prof = profile_from_schedule(sched)
    lo, hi = dim_estimates(prof)
    windows = [k0 for k0 in sched.windows if k0 * k0 <= sched.depth]
    vals = {k0: cre_at(prof, 0.5, k0 * k0) for k0 in windows}
    ok = (abs(lo - 0.5) <= 0.1 and abs(hi - 1.5) <= 0.1 and 404 in windows
          and all(v <= 1 / k0 + 2 / k0 ** 2 for k0, v in vals.items()))
    record(5, ok, f"dims ({lo:.4f}, {hi:.4f}), p_hat_b(k0^2) = "
                  + ", ".join(f"{v:.4f}@{k0}" for k0, v in vals.items()))


def test_6_keylem_suite():
    checks = suite_keylem()
    bad = [c.name for c in checks if not c.passed]
    sharp = [c for c in checks if "attained within" in c.name][0]
    record(6, not bad, f"{len(checks) - len(bad)}/{len(checks)} properties; {sharp.detail}"
                       + (f"; failing: {bad}" if bad else ""))


def test_7_brute_force_cube_oracle():
    rng = np.random.default_rng(7)
    d = 2
    fails = 0
    for n in range(100):
        K = int(rng.integers(1, 13))
        choices = "".join(rng.choice(["1", "2"], size=K))
        sched = MethodSchedule(d, choices)
        expect = d * sched.N2
        for rule, seed in (("lexicographic", None), ("seeded", n)):
            cubes = realize_cubeset(sched, rule, seed)
            counts = [len(cubes.level(k)) for k in range(K + 1)]
            fails += counts != [2 ** int(e) for e in expect]
            fails += not np.array_equal(profile_of(cubes).logM, expect)
    record(7, fails == 0, f"100 schedules x 2 child-choice rules, {fails} mismatches")


def test_8_orbital_sandwich():
    system = quadrant_ifs()
    cosc = check_cosc(system)
    K = 12
    cond = single_branch(2, K)
    orb = build_orbital(system, cond, K)
    lo, hi = dim_estimates(profile_of(orb.cubes), (0.25, 1.0))
    structure = verify_structure(system, cond, K, 4)
    ok = cosc and system.s == 2 and hi <= 2.1 and lo >= 1.9 and structure
    record(8, ok, f"COSC={cosc}, s={system.s:g}, orbital dims ({lo:.4f}, {hi:.4f}), "
                  f"structure margin 4: {structure}")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            try:
                fn()
            except AssertionError:
                pass
