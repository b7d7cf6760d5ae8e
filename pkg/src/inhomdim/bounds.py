"""Dimension bounds for inhomogeneous self-similar sets F_C.

L(t) = p_t t + (1 - p_t) s is a lower bound for the lower box dimension of
F_C (under the COSC) and U(t) = max(t, s + p_t t) an upper bound for
t > max(s, lower box dimension of C).  ``best_bounds`` optimizes both over t.
"""

import json
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .cre import cre_liminf
from .cubes import DEFAULT_WINDOW, dim_estimates

U_EPS = 1e-6
EDGE_SNAP = 1e-9


def _check_p(p):
    if not 0 <= p <= 1:
        raise ValueError(f"p_t must lie in [0, 1], got {p}")


def lower_bound_L(t: float, p_t: float, s: float) -> float:
    _check_p(p_t)
    return p_t * t + (1 - p_t) * s


def upper_bound_U(t: float, p_t: float, s: float) -> float:
    _check_p(p_t)
    return max(t, s + p_t * t)


def analytic_p(d: int, b: float, t: float) -> float:
    """(b/t) (d - t)/(d - b): the CRE of the fast-oscillation construction."""
    if not b < t < d:
        raise ValueError(f"analytic p_t needs b < t < d, got b={b}, t={t}, d={d}")
    return (b / t) * (d - t) / (d - b)


def theorem_main_bounds(s, lowerF, upperF, lowerC, upperC, d=None) -> tuple:
    """Sandwich for the upper box dimension of F_C: (max(upperF, upperC), max(s, upperC))."""
    vals = [s, lowerF, upperF, lowerC, upperC]
    if any(v < 0 for v in vals) or (d is not None and any(v > d for v in vals)):
        raise ValueError("dimensions must lie in [0, d]")
    if not lowerF <= upperF <= s + 1e-12:
        raise ValueError("need lowerF <= upperF <= s")
    if lowerC > upperC:
        raise ValueError("need lowerC <= upperC")
    return max(upperF, upperC), max(s, upperC)


def trivial_bounds(s, lowerF, lowerC, upperC, sosc: bool) -> tuple:
    """Trivial bracket for the lower box dimension of F_C, from the dimensions alone."""
    if min(s, lowerF, lowerC, upperC) < 0:
        raise ValueError("dimensions must be non-negative")
    lower = max(lowerF, lowerC)
    upper = max(lowerF, upperC) if sosc else max(s, upperC)
    return lower, upper


@dataclass
class AnalyticSource:
    """p_t from the closed form, for a set with box dimensions b < B in [0,1]^d."""
    d: int
    b: float
    B: float

    def p(self, t):
        return analytic_p(self.d, self.b, t)

    @property
    def dims(self):
        return self.b, self.B


@dataclass
class ProfileSource:
    """p_t estimated from a covering profile over a window of base levels."""
    profile: object
    window: tuple = DEFAULT_WINDOW

    def p(self, t):
        return cre_liminf(self.profile, t, self.window)

    @property
    def dims(self):
        return dim_estimates(self.profile, self.window)


@dataclass
class BoundsReport:
    s: float
    lowerC: float
    upperC: float
    t_grid: list
    L: list
    U: list
    supL: float
    t_at_supL: float
    infU: Optional[float]
    t_at_infU: Optional[float]
    trivial: tuple
    conditional_on_cosc: bool = False
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["trivial"] = list(self.trivial)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _refine(f, lo, hi, x0, f0, maximize):
    """Bounded Brent on [lo, hi]; never returns something worse than (x0, f0)."""
    sign = -1.0 if maximize else 1.0
    if hi <= lo:
        return x0, f0
    res = minimize_scalar(lambda x: sign * f(x), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-10})
    x1, f1 = float(res.x), float(f(res.x))
    if (f1 > f0) if maximize else (f1 < f0):
        return x1, f1
    return x0, f0


def best_bounds(s: float, source, t_range=None, grid_n: int = 1000,
                sosc: bool = True, cosc: Optional[bool] = None,
                lowerF: Optional[float] = None) -> BoundsReport:
    """sup_t L(t) and inf_t U(t) on a uniform grid, refined around the extremes.

    ``t_range`` defaults to the open interval between the lower and upper box
    dimension of C; its ends are snapped inward by 1e-9.  U is only evaluated
    for t > max(s, lowerC) + 1e-6 and reported as None elsewhere.
    ``lowerF`` (box dimension of the homogeneous attractor) defaults to s
    under the SOSC and to 0 otherwise, which only affects the trivial bracket.
    """
    if grid_n < 100:
        raise ValueError("grid_n must be at least 100")
    lowerC, upperC = source.dims
    if t_range is None:
        t_range = (lowerC, upperC)
    t_lo, t_hi = float(t_range[0]) + EDGE_SNAP, float(t_range[1]) - EDGE_SNAP
    if not t_lo < t_hi:
        raise ValueError(f"empty t range {t_range}")
    grid = np.linspace(t_lo, t_hi, grid_n)

    def L(t):
        return lower_bound_L(t, source.p(t), s)

    u_min = max(s, lowerC) + U_EPS

    def U(t):
        return upper_bound_U(t, source.p(t), s)

    Ls = [L(t) for t in grid]
    Us = [U(t) if t > u_min else None for t in grid]

    i = int(np.argmax(Ls))
    t_sup, supL = _refine(L, grid[max(i - 1, 0)], grid[min(i + 1, grid_n - 1)],
                          float(grid[i]), Ls[i], maximize=True)

    valid = [j for j, u in enumerate(Us) if u is not None]
    notes = []
    if valid:
        j = min(valid, key=lambda j: Us[j])
        lo = max(grid[max(j - 1, 0)], u_min)
        t_inf, infU = _refine(U, lo, grid[min(j + 1, grid_n - 1)], float(grid[j]), Us[j],
                              maximize=False)
    else:
        t_inf = infU = None
        notes.append("U(t) absent: no grid point exceeds max(s, lowerC)")

    if lowerF is None:
        lowerF = s if sosc else 0.0
    trivial = trivial_bounds(s, lowerF, lowerC, upperC, sosc)
    conditional = cosc is None
    if conditional:
        notes.append("L(t) is conditional on the COSC")
    elif not cosc:
        notes.append("COSC not satisfied: L(t) is not a proven bound")
    return BoundsReport(s, lowerC, upperC, [float(t) for t in grid], Ls, Us, supL, t_sup,
                        infU, t_inf, trivial, conditional, notes)
