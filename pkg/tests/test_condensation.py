from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from inhomdim.condensation import (ALL, ONE, MethodSchedule, OscillationParams,
                                   default_first_window, profile_from_schedule, realize_cubeset,
                                   schedule_oscillating, schedule_sparse, window_trigger_holds)
from inhomdim.cubes import dim_estimates, profile_of
from inhomdim.exceptions import MaterializationError, UnreachableThresholdError
from inhomdim.verify import switch_pairs_ok


def brute_realize(choices, d, rng=None):
    """Oracle: grow explicit coordinate tuples level by level."""
    cubes = {(0,) * d}
    children = [tuple((i >> j) & 1 for j in range(d)) for i in range(2 ** d)]
    for c in choices:
        if c == ALL:
            cubes = {tuple(2 * x + o for x, o in zip(q, ch)) for q in cubes for ch in children}
        else:
            cubes = {tuple(2 * x for x in q) for q in cubes}
    return cubes


def test_params_validation():
    with pytest.raises(ValueError):
        OscillationParams(2, Fraction(3, 2), Fraction(1), 100)
    with pytest.raises(ValueError):
        OscillationParams(2, Fraction(1, 2), Fraction(3), 100)
    with pytest.raises(ValueError):
        OscillationParams(2, Fraction(1, 2), Fraction(3, 2), 5)


def test_schedule_choice_validation():
    with pytest.raises(ValueError):
        MethodSchedule(2, "1203")
    s = MethodSchedule(2, [ONE, ALL, ALL])
    assert list(s.N2) == [0, 0, 1, 2] and s.depth == 3


def test_unreachable_threshold():
    with pytest.raises(UnreachableThresholdError, match="unreachable-threshold"):
        schedule_oscillating(OscillationParams(5, Fraction(1), Fraction(5), 100))


def test_oscillating_small_example():
    sched = schedule_oscillating(OscillationParams(2, Fraction(1, 2), Fraction(3, 2), 200))
    ub, lb, growth = switch_pairs_ok(sched, Fraction(1, 2), Fraction(3, 2))
    assert ub and lb and growth
    assert sched.choices[0] == ONE
    kinds = [k for _, k in sched.switches]
    assert kinds == ["up", "down"] * (len(kinds) // 2) + ["up"] * (len(kinds) % 2)


def brute_oscillating(d, b, B, K):
    """Oracle: track the integer count M and test both triggers with big-int powers.

    M <= 2^(kb)              <=>  M^q <= 2^(k p)                for b = p/q
    M >= 3^d 2^B 2^(kB)      <=>  M^Q >= 3^(dQ) 2^((k+1) P)     for B = P/Q
    """
    p, q = b.numerator, b.denominator
    P, Q = B.numerator, B.denominator
    out, mode, M = [], ONE, 1
    for k in range(1, K + 1):
        out.append(mode)
        if mode == ALL:
            M *= 2 ** d
        if mode == ONE and M ** q <= 2 ** (k * p):
            mode = ALL
        elif mode == ALL and M ** Q >= 3 ** (d * Q) * 2 ** ((k + 1) * P):
            mode = ONE
    return "".join(out)


@pytest.mark.parametrize("d, b, B", [
    (2, Fraction(1, 2), Fraction(3, 2)),
    (3, Fraction(1, 3), Fraction(5, 2)),
    (5, Fraction(1), Fraction(9, 2)),
    (1, Fraction(1, 4), Fraction(3, 4)),
])
def test_oscillating_matches_integer_oracle(d, b, B):
    sched = schedule_oscillating(OscillationParams(d, b, B, 600))
    assert sched.choices == brute_oscillating(d, b, B, 600)


def test_oscillating_profile_envelope():
    d, b, B = 5, Fraction(1), Fraction(9, 2)
    sched = schedule_oscillating(OscillationParams(d, b, B, 20000))
    k = np.arange(sched.depth + 1)
    logm = d * sched.N2
    assert np.all(logm >= float(b) * k - float(b))
    assert np.all(logm <= d * np.log2(3) + d + float(B) * k)


def test_sparse_windows_trigger():
    params = OscillationParams(2, Fraction(1, 2), Fraction(3, 2), 20000)
    sched = schedule_sparse(params, [4, 20])
    assert sched.windows[:2] == [4, 20]
    for k0 in sched.windows:
        assert window_trigger_holds(sched, Fraction(1, 2), k0)
    lo, hi = dim_estimates(profile_from_schedule(sched))
    assert lo <= 0.55


def test_default_first_window():
    assert default_first_window(2, Fraction(1, 2)) == 8
    assert default_first_window(5, Fraction(9, 2)) == 4


def test_schedule_file_roundtrip(tmp_path):
    sched = schedule_oscillating(OscillationParams(2, Fraction(1, 2), Fraction(3, 2), 300))
    sched.save(tmp_path / "s.txt")
    again = MethodSchedule.load(tmp_path / "s.txt")
    assert again.choices == sched.choices
    assert again.switches == [tuple(s) for s in sched.switches]
    assert again.sidecar() == sched.sidecar()


schedules = st.text(alphabet=[ONE, ALL], min_size=1, max_size=12)


@given(schedules, st.sampled_from(["lexicographic", "seeded"]), st.integers(0, 1000))
def test_materialized_profile_is_exact(choices, rule, seed):
    d = 2
    sched = MethodSchedule(d, choices)
    cubes = realize_cubeset(sched, rule, seed)
    prof = profile_of(cubes)
    assert prof.exact
    assert np.array_equal(prof.logM, d * sched.N2)
    assert prof == profile_from_schedule(sched)


@given(st.text(alphabet=[ONE, ALL], min_size=1, max_size=9))
def test_lexicographic_matches_brute_force(choices):
    cubes = realize_cubeset(MethodSchedule(2, choices))
    got = {tuple(int(v) for v in row) for row in cubes.coords(cubes.depth)}
    assert got == brute_realize(choices, 2)


def test_seeded_is_reproducible():
    sched = MethodSchedule(2, "1212112")
    a = realize_cubeset(sched, "seeded", 7)
    assert a == realize_cubeset(sched, "seeded", 7)


def test_materialization_guard():
    with pytest.raises(MaterializationError):
        realize_cubeset(MethodSchedule(3, ALL * 9))
    with pytest.raises(ValueError):
        realize_cubeset(MethodSchedule(2, "12"), "random")


def test_realize_small_example():
    cubes = realize_cubeset(MethodSchedule(2, ALL + ONE))
    assert len(cubes.level(1)) == 4 and len(cubes.level(2)) == 4
    assert sorted(map(tuple, cubes.coords(2).tolist())) == [(0, 0), (0, 2), (2, 0), (2, 2)]
