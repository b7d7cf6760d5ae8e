"""Named verification suites; each returns a list of :class:`Check` records."""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import bounds, cre, ifs as ifs_mod
from .condensation import (OscillationParams, profile_from_schedule,
                           schedule_oscillating, schedule_sparse, window_trigger_holds)
from .cubes import DyadicCubeSet, dim_estimates, profile_of
from .orbital import build_orbital, verify_structure

EXLEM2 = dict(d=5, b=Fraction(1), B=Fraction(9, 2), depth=100_000)
EXLEM1 = dict(d=2, b=Fraction(1, 2), B=Fraction(3, 2), depth=500_000, windows=(4, 20, 404))
CRE_TS = (1.5, 2.0, 2.2, 2.7386, 3.5, 4.0)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def random_dyadic_ifs(rng, d_max=3, n_max=5, m_max=3) -> ifs_mod.IFS:
    d = int(rng.integers(1, d_max + 1))
    n = int(rng.integers(1, n_max + 1))
    maps = []
    for _ in range(n):
        m = int(rng.integers(1, m_max + 1))
        maps.append((m, tuple(int(v) for v in rng.integers(0, 2 ** m, size=d))))
    return ifs_mod.dyadic_ifs(d, maps)


def random_deltas(rng, system, count, max_words=3000):
    """Deltas in (0, 1] keeping L_min^-s delta^-s below ``max_words``."""
    s = system.s
    if s <= 0:
        u_max = 12.0
    else:
        u_max = max(0.0, min(12.0, math.log2(max_words) / s - math.log2(1 / system.L_min)))
    return [2.0 ** -float(rng.uniform(0, u_max)) for _ in range(count)]


def stopping_checks(system, delta, sum_tol=1e-8) -> list:
    words = ifs_mod.delta_stopping(system, delta)
    s = system.s
    prefixes = {w[:j] for w in words for j in range(len(w))}
    antichain = not any(w in prefixes for w in words)
    total = math.fsum(float(system.lip(w)) ** s for w in words)
    lo, hi = delta ** -s, system.L_min ** -s * delta ** -s
    card = lo * (1 - 1e-9) <= len(words) <= hi * (1 + 1e-9)
    return [antichain, abs(total - 1) <= sum_tol, card]


def suite_stopsize(n_systems=50, n_deltas=20, seed=0) -> list:
    rng = np.random.default_rng(seed)
    fails = [0, 0, 0, 0]
    cases = 0
    for _ in range(n_systems):
        system = random_dyadic_ifs(rng)
        for delta in random_deltas(rng, system, n_deltas):
            a, b, c = stopping_checks(system, delta)
            fails[0] += not a
            fails[1] += not b
            fails[2] += not c
            if delta < 1:
                count = len(ifs_mod.words_lip_at_least(system, delta))
                if system.s > 0:
                    bound = math.log(delta) / math.log(system.L_max) * delta ** -system.s
                    fails[3] += count > bound * (1 + 1e-9)
            cases += 1
    names = ["antichain", "sum lip^s = 1 (1e-8)", "delta^-s <= |I| <= L_min^-s delta^-s",
             "|lip >= delta| <= (log delta/log L_max) delta^-s"]
    return [Check(n, f == 0, f"{cases - f}/{cases} cases") for n, f in zip(names, fails)]


def exlem2_schedule():
    p = EXLEM2
    return schedule_oscillating(OscillationParams(p["d"], p["b"], p["B"], p["depth"]))


def exlem1_schedule():
    p = EXLEM1
    return schedule_sparse(OscillationParams(p["d"], p["b"], p["B"], p["depth"]), p["windows"])


def switch_pairs_ok(schedule, b, B) -> tuple:
    """Check the count bounds at every switch and the two k_n growth inequalities."""
    d = schedule.d
    b, B = float(b), float(B)
    logm = d * schedule.N2
    ub = lb = True
    for k, kind in schedule.switches:
        if kind == "up":
            ub &= bool(logm[k] <= k * b + 1e-9)
        else:
            lb &= bool(logm[k] >= d * math.log2(3) + k * B - 1e-9)
    ks = [k for k, _ in schedule.switches]
    growth = True
    # ks[0] = k_1 (up), ks[1] = k_2 (down), ...; k_{2n} = ks[2n-1]
    for i in range(1, len(ks) - 2, 2):
        k2n, k2n1, k2n2 = ks[i], ks[i + 1], ks[i + 2]
        growth &= k2n1 / k2n2 >= (d - B) / (d - b) - (b + 3 * d) / (k2n2 * (d - b)) - 1e-12
        growth &= k2n / k2n1 >= b / B - (2 * b + 3 * d) / (k2n1 * B) - 1e-12
    return ub, lb, growth


def suite_exlem2() -> list:
    p = EXLEM2
    d, b, B = p["d"], float(p["b"]), float(p["B"])
    sched = exlem2_schedule()
    prof = profile_from_schedule(sched)
    lo, hi = dim_estimates(prof)
    out = [Check("dim_estimates (1, 4.5) +-0.05", abs(lo - b) <= 0.05 and abs(hi - B) <= 0.05,
                 f"({lo:.4f}, {hi:.4f})")]
    sl = cre.slack(math.ceil(0.01 * p["depth"]))
    worst = 0.0
    for t in CRE_TS:
        worst = max(worst, abs(cre.cre_liminf(prof, t) - bounds.analytic_p(d, b, t)))
    out.append(Check("cre_liminf matches (b/t)(d-t)/(d-b) within 0.03 + slack",
                     worst <= 0.03 + sl, f"max error {worst:.5f}"))
    ub, lb, growth = switch_pairs_ok(sched, b, B)
    out.append(Check("M <= 2^(kb) at every switch-up level", ub, f"{len(sched.switches)} switches"))
    out.append(Check("M >= 3^d 2^B 2^(kB) at every switch-down level", lb, ""))
    out.append(Check("k_n growth inequalities", growth, ""))
    k = np.arange(prof.depth + 1)
    env = bool(np.all(b * k - b <= prof.logM) and
               np.all(prof.logM <= d * math.log2(3) + d + B * k))
    out.append(Check("global envelope", env, ""))
    return out


def suite_exlem1() -> list:
    p = EXLEM1
    b = p["b"]
    sched = exlem1_schedule()
    prof = profile_from_schedule(sched)
    lo, hi = dim_estimates(prof)
    out = [Check("dim_estimates (0.5, 1.5) +-0.1",
                 abs(lo - float(b)) <= 0.1 and abs(hi - float(p["B"])) <= 0.1,
                 f"({lo:.4f}, {hi:.4f})")]
    for k0 in p["windows"]:
        out.append(Check(f"window k0={k0}: d N2[k+d+1] < b k", window_trigger_holds(sched, b, k0), ""))
        val = cre.cre_at(prof, float(b), k0 * k0)
        out.append(Check(f"window k0={k0}: p_hat_b(k0^2) <= 1/k0 + 2/k0^2",
                         val <= 1 / k0 + 2 / k0 ** 2, f"{val:.6f}"))
    return out


def _keylem_checks(label, prof) -> list:
    return [Check(f"{label} keylem {name}", ok, detail)
            for name, (ok, detail) in cre.check_keylem(prof).items()]


def suite_keylem() -> list:
    p = EXLEM2
    d, b = p["d"], float(p["b"])
    prof2 = profile_from_schedule(exlem2_schedule())
    out = _keylem_checks("exlem2", prof2)
    lo, hi = dim_estimates(prof2)
    ts = np.linspace(lo + 0.05, hi - 0.05, 40)
    worst = max(abs(cre.cre_liminf(prof2, t) - bounds.analytic_p(d, b, t)) for t in ts)
    out.append(Check("exlem2 ambient bound attained within 0.05", worst <= 0.05,
                     f"max gap {worst:.5f}"))
    out += _keylem_checks("exlem1", profile_from_schedule(exlem1_schedule()))
    return out


def quadrant_ifs():
    return ifs_mod.dyadic_ifs(2, [(1, (0, 0)), (1, (0, 1)), (1, (1, 0)), (1, (1, 1))])


def single_branch(d, depth):
    return DyadicCubeSet(d, depth, np.zeros((1, d), dtype=np.int64))


def suite_structure(K=12, margin=4) -> list:
    system = quadrant_ifs()
    cond = single_branch(2, K)
    out = [Check("quadrant IFS certified COSC", ifs_mod.check_cosc(system), f"s = {system.s:g}")]
    orb = build_orbital(system, cond, K)
    lo, hi = dim_estimates(profile_of(orb.cubes), (0.25, 1.0))
    out.append(Check(f"orbital dims in [1.9, 2.1] at K={K}", hi <= 2.1 and lo >= 1.9,
                     f"({lo:.4f}, {hi:.4f})"))
    out.append(Check(f"structure containment K={K} margin={margin}",
                     verify_structure(system, cond, K, margin), ""))
    return out


BRACKETS = [
    dict(d=5, b=1.0, s=1.5, B=4.5, supL=1.756, infU=2.2),
    dict(d=5, b=1.0, s=1.0, B=2.0, supL=1.375, infU=1.8),
]


def suite_figure3(tol=1e-3) -> list:
    out = []
    for c in BRACKETS:
        r = bounds.best_bounds(c["s"], bounds.AnalyticSource(c["d"], c["b"], c["B"]))
        ok = abs(r.supL - c["supL"]) <= tol and abs(r.infU - c["infU"]) <= tol
        out.append(Check(f"bracket s={c['s']} B={c['B']}", ok,
                         f"[{r.supL:.4f}, {r.infU:.4f}] vs [{c['supL']}, {c['infU']}]"))
    return out


SUITES = {
    "stopsize": suite_stopsize,
    "keylem": suite_keylem,
    "exlem1": suite_exlem1,
    "exlem2": suite_exlem2,
    "structure": suite_structure,
    "figure3": suite_figure3,
}


def run_suite(name: str) -> list:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name]()
