"""Condensation sets built from Method-1 / Method-2 cube selection schedules.

At step k a schedule either keeps exactly one child of every level-(k-1)
cube (``ONE``, Method 1) or all 2^d children (``ALL``, Method 2), so
M_{2^-k} = 2^(d N2[k]) where N2[k] counts the ALL steps among 1..k.
"""

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .cubes import CoveringProfile, DyadicCubeSet
from .exceptions import MaterializationError, UnreachableThresholdError

ONE, ALL = "1", "2"
MAX_MATERIALIZED_LOG2 = 26
# denominators above this use float comparisons with a margin
EXACT_DENOMINATOR_LIMIT = 10 ** 6
FLOAT_MARGIN = 1e-9
LOG2_3 = math.log2(3)


@dataclass(frozen=True)
class OscillationParams:
    d: int
    b: Fraction
    B: Fraction
    depth: int

    def __post_init__(self):
        object.__setattr__(self, "b", Fraction(self.b))
        object.__setattr__(self, "B", Fraction(self.B))
        if self.d < 1:
            raise ValueError("d must be a positive integer")
        if not 0 < self.b < self.B <= self.d:
            raise ValueError(f"need 0 < b < B <= d, got b={self.b}, B={self.B}, d={self.d}")
        if self.depth < 10:
            raise ValueError("depth must be at least 10")


@dataclass
class MethodSchedule:
    """Per-level choices for levels 1..K plus the construction log.

    ``switches`` holds ``(k, "up")`` when ONE turns into ALL after level k and
    ``(k, "down")`` for the reverse.
    """

    d: int
    choices: str
    kind: str = "manual"
    params: dict = field(default_factory=dict)
    switches: list = field(default_factory=list)
    windows: list = field(default_factory=list)

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be a positive integer")
        if isinstance(self.choices, (list, tuple)):
            self.choices = "".join(self.choices)
        if set(self.choices) - {ONE, ALL}:
            raise ValueError("schedule choices must be '1' (ONE) or '2' (ALL)")
        is_all = np.frombuffer(self.choices.encode(), dtype=np.uint8) == ord(ALL)
        n2 = np.zeros(len(self.choices) + 1, dtype=np.int64)
        np.cumsum(is_all, out=n2[1:])
        n2.setflags(write=False)
        self.N2 = n2

    @property
    def depth(self) -> int:
        return len(self.choices)

    def tail_ratios(self, start: int = 1) -> tuple:
        """(min, max) of N2[k]/k over k >= start: surrogates for lim inf / lim sup."""
        ks = np.arange(start, self.depth + 1)
        r = self.N2[start:] / ks
        return float(r.min()), float(r.max())

    # files -------------------------------------------------------------

    def sidecar(self) -> dict:
        params = {k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.params.items()}
        return {"kind": self.kind, "d": self.d, "depth": self.depth, "params": params,
                "switches": [[k, direction] for k, direction in self.switches],
                "windows": list(self.windows)}

    def save(self, path, sidecar_path=None):
        with open(path, "w") as fh:
            fh.write(self.choices + "\n")
        if sidecar_path is None:
            sidecar_path = str(path) + ".json"
        with open(sidecar_path, "w") as fh:
            json.dump(self.sidecar(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path, sidecar_path=None) -> "MethodSchedule":
        with open(path) as fh:
            choices = fh.read().strip()
        if sidecar_path is None:
            sidecar_path = str(path) + ".json"
        with open(sidecar_path) as fh:
            meta = json.load(fh)
        return cls(int(meta["d"]), choices, meta.get("kind", "manual"), meta.get("params", {}),
                   [tuple(s) for s in meta.get("switches", [])], meta.get("windows", []))


class _Comparator:
    """Exact rational comparisons, falling back to floats for huge denominators."""

    def __init__(self, *values):
        self.exact = all(Fraction(v).denominator <= EXACT_DENOMINATOR_LIMIT for v in values)

    def le(self, lhs, rhs) -> bool:
        """lhs <= rhs; on the float path ties lean toward True."""
        if self.exact:
            return Fraction(lhs) <= Fraction(rhs)
        return float(lhs) <= float(rhs) + FLOAT_MARGIN

    def ge_log2_3(self, x, d: int) -> bool:
        """x >= d log2(3), exact for rational x."""
        diff = float(x) - d * LOG2_3
        if not self.exact:
            return diff >= -FLOAT_MARGIN
        if abs(diff) > 1e-6:
            return diff > 0
        x = Fraction(x)
        # x >= d log2 3  <=>  2^(num) >= 3^(d den)
        return x.numerator >= 0 and 2 ** x.numerator >= 3 ** (d * x.denominator)


def schedule_oscillating(params: OscillationParams) -> MethodSchedule:
    """Fastest oscillation between lower dimension b and upper dimension B.

    Starts with ONE.  In ONE mode, once M_{2^-k} <= 2^(kb) the next level is
    ALL; in ALL mode, once M_{2^-k} >= 3^d 2^B 2^(kB) the next level is ONE.
    """
    d, b, B, K = params.d, params.b, params.B, params.depth
    if B >= d:
        raise UnreachableThresholdError(
            "unreachable-threshold: the ALL->ONE trigger 3^d 2^B 2^(kB) is never met when B = d")
    cmp = _Comparator(b, B)
    choices = []
    switches = []
    mode = ONE
    n2 = 0
    for k in range(1, K + 1):
        choices.append(mode)
        if mode == ALL:
            n2 += 1
        logm = d * n2
        if mode == ONE and cmp.le(logm, k * b):
            mode = ALL
            switches.append((k, "up"))
        elif mode == ALL and cmp.ge_log2_3(logm - B - k * B, d):
            mode = ONE
            switches.append((k, "down"))
    return MethodSchedule(d, "".join(choices), "oscillating",
                          {"d": d, "b": b, "B": B, "depth": K}, switches)


def default_first_window(d: int, b) -> int:
    return max(4, math.ceil(2 * d / Fraction(b)))


def schedule_sparse(params: OscillationParams, windows: Optional[Sequence[int]] = None) -> MethodSchedule:
    """Lower dimension b, upper dimension B and long windows where N_delta < delta^-b.

    Window n covers levels k0..k0^2 and guarantees d N2[k+d+1] < b k there.
    Inside a window N2 tracks greedily just below that cap.  After a window
    the schedule runs ALL until d N2[k]/k reaches the upper target (phase U),
    then ONE until d N2[k]/k <= b (phase D), then tracks the ratio b until
    the next window opens.

    With ``windows=None`` windows are generated on the fly: the first at
    max(4, ceil(2d/b)) and each later one at the first level after phase D
    that is also beyond k0^2 + d + 1.  Explicit windows always take priority;
    phases U and D only use the levels left between them, and never raise N2
    above what the next window can absorb.
    """
    d, b, B, K = params.d, params.b, params.B, params.depth
    explicit = windows is not None
    if explicit:
        windows = [int(w) for w in windows]
        if not windows:
            raise ValueError("windows must be non-empty")
        if windows[0] < 1:
            raise ValueError("window starts must be positive")
        for w0, w1 in zip(windows, windows[1:]):
            if w1 <= w0 * w0:
                raise ValueError(f"overlapping windows: {w1} must exceed {w0}^2 = {w0 * w0}")
    else:
        windows = [default_first_window(d, b)]

    # all comparisons are integer cross-multiplications against b = bn/bd
    bn, bd = b.numerator, b.denominator

    def target(n):
        t = B if B < d else Fraction(d) - Fraction(1, n)
        return t.numerator, t.denominator

    choices = []
    n2 = 0
    epoch = 0          # index of the current or next window
    phase = "idle"     # idle | W | U | D
    opened = []
    tn, td = target(1)
    for m in range(1, K + 1):
        if phase == "W" and m > windows[epoch] ** 2 + d + 1:
            epoch += 1
            phase = "U"
            tn, td = target(epoch + 1)
        if phase == "U" and d * n2 * td >= tn * (m - 1):
            phase = "D"
        if phase == "D" and d * n2 * bd <= bn * (m - 1):
            phase = "idle"
            if not explicit:
                prev = windows[-1]
                windows.append(max(prev * prev + d + 2, m))
        if epoch < len(windows) and m == windows[epoch]:
            phase = "W"
            opened.append(m)

        # ALL is allowed iff d (n2 + 1) bd < cap, which keeps every window feasible
        cap = None
        if epoch < len(windows):
            k0 = windows[epoch]
            cap = bn * (k0 if m < k0 + d + 1 else m - d - 1)

        if phase in ("W", "U"):
            want_all = True
        elif phase == "D":
            want_all = False
        else:
            want_all = d * (n2 + 1) * bd <= bn * m

        if want_all and (cap is None or d * (n2 + 1) * bd < cap):
            choices.append(ALL)
            n2 += 1
        else:
            choices.append(ONE)

    return MethodSchedule(d, "".join(choices), "sparse",
                          {"d": d, "b": b, "B": B, "depth": K}, [], opened)


def window_trigger_holds(schedule: MethodSchedule, b, k0: int) -> bool:
    """d N2[k+d+1] < b k for every k in [k0, k0^2] that fits in the schedule."""
    d = schedule.d
    b = Fraction(b)
    last = min(k0 * k0, schedule.depth - d - 1)
    if last < k0:
        return True
    ks = np.arange(k0, last + 1)
    n2 = schedule.N2[ks + d + 1]
    return bool(np.all(d * n2 * b.denominator < b.numerator * ks))


def profile_from_schedule(schedule: MethodSchedule) -> CoveringProfile:
    """logM[k] = d N2[k], exact; nothing is materialized."""
    return CoveringProfile(schedule.d, schedule.d * np.asarray(schedule.N2, dtype=np.int64))


def realize_cubeset(schedule: MethodSchedule, choice_rule: str = "lexicographic",
                    seed: Optional[int] = None) -> DyadicCubeSet:
    """Materialize the cube set of a schedule.

    ``lexicographic`` keeps the lowest-coordinate child under Method 1;
    ``seeded`` picks a child uniformly with ``numpy.random.default_rng(seed)``.
    """
    d, K = schedule.d, schedule.depth
    if choice_rule not in ("lexicographic", "seeded"):
        raise ValueError(f"unknown choice rule {choice_rule!r}")
    final = d * int(schedule.N2[-1])
    if final > MAX_MATERIALIZED_LOG2:
        raise MaterializationError(
            f"2^{final} cubes exceeds the 2^{MAX_MATERIALIZED_LOG2} guard; "
            "use profile_from_schedule for the symbolic profile instead")
    rng = np.random.default_rng(seed)
    offsets = np.array(np.meshgrid(*[[0, 1]] * d, indexing="ij")).reshape(d, -1).T
    coords = np.zeros((1, d), dtype=np.int64)
    for c in schedule.choices:
        if c == ALL:
            coords = (2 * coords[:, None, :] + offsets[None, :, :]).reshape(-1, d)
        elif choice_rule == "lexicographic":
            coords = 2 * coords
        else:
            coords = 2 * coords + rng.integers(0, 2, size=coords.shape)
    return DyadicCubeSet(d, K, coords)
