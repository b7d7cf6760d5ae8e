"""Discrete covering regularity exponents on dyadic covering profiles.

At base level k (delta = 2^-k) the exponent is restricted to the grid j/k:

    p_hat[k] = max{ j/k : 0 <= j <= k, logM[j] >= j t },

and the finite-depth liminf is its minimum over a window of base levels.
"""

import csv
import io
from dataclasses import dataclass

import numpy as np

from .cubes import DEFAULT_WINDOW, CoveringProfile, dim_estimates, window_levels

# non-strict comparison margin for real-valued t against integer counts
TIE_MARGIN = 1e-9


def last_qualifying(profile: CoveringProfile, t: float) -> np.ndarray:
    """best[k] = largest j <= k with logM[j] >= j t (j = 0 always qualifies)."""
    if t < 0:
        raise ValueError("t must be non-negative")
    logm = np.asarray(profile.logM, dtype=float)
    j = np.arange(len(logm))
    ok = logm >= j * t - TIE_MARGIN
    return np.maximum.accumulate(np.where(ok, j, 0))


def cre_levels(profile: CoveringProfile, t: float) -> np.ndarray:
    """p_hat[k] for k = 0..depth (entry 0 is set to 1 by convention)."""
    best = last_qualifying(profile, t)
    out = np.ones(len(best))
    out[1:] = best[1:] / np.arange(1, len(best))
    return out


def cre_at(profile: CoveringProfile, t: float, k: int) -> float:
    if not 1 <= k <= profile.depth:
        raise ValueError(f"base level {k} outside 1..{profile.depth}")
    return float(last_qualifying(profile, t)[k] / k)


def slack(k_min: int) -> float:
    """Discretization allowance used by every property check."""
    return 2.0 / k_min


@dataclass
class CRECurve:
    t: float
    levels: np.ndarray
    per_level: np.ndarray
    estimate: float
    k_min: int
    k_max: int

    @property
    def slack(self) -> float:
        return slack(self.k_min)


def cre_liminf(profile: CoveringProfile, t: float, window=DEFAULT_WINDOW) -> float:
    ks = window_levels(profile.depth, window)
    return float(cre_levels(profile, t)[ks.start:ks.stop].min())


def cre_curve(profile: CoveringProfile, t_grid, window=DEFAULT_WINDOW) -> list:
    t_grid = [float(t) for t in t_grid]
    if not t_grid:
        raise ValueError("t_grid must be non-empty")
    ks = window_levels(profile.depth, window)
    levels = np.arange(ks.start, ks.stop)
    curves = []
    for t in t_grid:
        per = cre_levels(profile, t)[ks.start:ks.stop]
        curves.append(CRECurve(t, levels, per, float(per.min()), ks.start, ks.stop - 1))
    return curves


def curves_to_csv(curves) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "p_estimate", "k_min", "k_max", "slack"])
    for c in curves:
        w.writerow([repr(c.t), repr(c.estimate), c.k_min, c.k_max, repr(c.slack)])
    return buf.getvalue()


def check_keylem(profile: CoveringProfile, window=DEFAULT_WINDOW, t_grid=None, ambient_dim=None) -> dict:
    """Finite-depth checks of the six CRE properties.

    Returns ``{name: (passed, detail)}``.  Every inequality carries the slack
    2/k_min; the ambient box dimension defaults to the profile's d.
    """
    d = profile.d if ambient_dim is None else ambient_dim
    lower, upper = dim_estimates(profile, window)
    ks = window_levels(profile.depth, window)
    sl = slack(ks.start)
    if t_grid is None:
        t_grid = np.linspace(0.0, d, 101)
    t_grid = np.asarray(sorted(set(float(t) for t in t_grid)))
    est = np.array([cre_liminf(profile, t, window) for t in t_grid])
    res = {}

    # (1) range, on every base level of the window
    ok = True
    for t in t_grid:
        per = cre_levels(profile, t)[ks.start:ks.stop]
        ok &= bool(np.all((per >= 0) & (per <= 1)))
    res["range"] = (ok, "all p_hat in [0, 1]")

    # (2) monotone in t, =1 below the lower estimate, =0 above the upper one
    mono = bool(np.all(np.diff(est) <= sl))
    below = t_grid < lower - 0.1
    above = t_grid > upper + 0.1
    ones = bool(np.all(est[below] >= 1 - 1.0 / ks.start))
    zeros = bool(np.all(est[above] <= sl))
    res["monotone_and_limits"] = (mono and ones and zeros,
                                  f"monotone={mono} ones_below={ones} zeros_above={zeros}")

    # (3) attainment: p_hat k is an integer j satisfying the defining inequality
    ok = True
    logm = np.asarray(profile.logM, dtype=float)
    for t in t_grid:
        per = cre_levels(profile, t)[ks.start:ks.stop]
        j = per * np.arange(ks.start, ks.stop)
        ji = np.rint(j).astype(np.int64)
        ok &= bool(np.allclose(j, ji, atol=1e-9))
        ok &= bool(np.all(logm[ji] >= ji * t - 1e-9))
    res["attained"] = (ok, "p_hat * k is an integer j with logM[j] >= j t")

    # (4) p_t <= lower / t for t > lower
    sel = t_grid > lower + 0.1
    ok = bool(np.all(est[sel] <= lower / t_grid[sel] + sl))
    res["lower_ratio_bound"] = (ok, f"{int(sel.sum())} t values above lower + 0.1")

    # (5) p_t <= (s/t) p_s for lower < s < t < upper
    mid = np.where((t_grid > lower) & (t_grid < upper))[0]
    ok = True
    for a in mid:
        for b in mid:
            if t_grid[a] < t_grid[b]:
                ok &= bool(est[b] <= t_grid[a] / t_grid[b] * est[a] + sl)
    res["ratio_scaling"] = (ok, f"{len(mid)} t values strictly between the estimates")

    # (6) Ahlfors-regular ambient bound
    ok = True
    if lower < d:
        for a in mid:
            t = t_grid[a]
            if t < d:
                ok &= bool(est[a] <= lower / t * (d - t) / (d - lower) + sl)
    res["ambient_bound"] = (ok, f"ambient dimension {d}")
    return res
