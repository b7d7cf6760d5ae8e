"""Similarity IFSs on the unit cube, Hutchinson's formula and word enumeration.

Words are tuples of 0-based map indices; the empty tuple is the empty word.
"""

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import bisect

from .dyadic import dyadic_exponent, format_dyadic, is_dyadic, parse_dyadic
from .exceptions import DivergenceError, UnsupportedConfigurationError

DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class Similarity:
    """The map x -> ratio * A x + translation.

    ``ratio`` and ``translation`` are :class:`~fractions.Fraction` in dyadic
    mode and floats otherwise.  ``isometry`` (the orthogonal part A) is None
    for axis-aligned homotheties.
    """

    ratio: object
    translation: tuple
    isometry: Optional[np.ndarray] = field(default=None, compare=False)

    def __post_init__(self):
        if not 0 < self.ratio < 1:
            raise ValueError(f"similarity ratio must lie in (0, 1), got {self.ratio}")
        if self.isometry is not None:
            A = np.asarray(self.isometry, dtype=float)
            d = len(self.translation)
            if A.shape != (d, d) or not np.allclose(A @ A.T, np.eye(d), atol=1e-9):
                raise ValueError("isometry part must be a d x d orthogonal matrix")
            object.__setattr__(self, "isometry", A)
        if not self._maps_unit_cube_inside():
            raise ValueError(f"image of [0,1]^d under {self} leaves [0,1]^d")

    @property
    def d(self) -> int:
        return len(self.translation)

    @property
    def is_dyadic(self) -> bool:
        if self.isometry is not None or not isinstance(self.ratio, Fraction):
            return False
        if self.ratio.numerator != 1 or not is_dyadic(self.ratio):
            return False
        m = self.exponent
        return all(isinstance(c, Fraction) and (c * 2 ** m).denominator == 1
                   for c in self.translation)

    @property
    def exponent(self) -> int:
        """m with ratio = 2^-m (dyadic maps only)."""
        return dyadic_exponent(self.ratio)

    @property
    def offset(self) -> tuple:
        """Integer grid position p of the image cube translation = p / 2^m."""
        m = self.exponent
        return tuple(int(c * 2 ** m) for c in self.translation)

    def _corners_image(self):
        d = self.d
        corners = np.array(np.meshgrid(*[[0.0, 1.0]] * d, indexing="ij")).reshape(d, -1)
        A = np.eye(d) if self.isometry is None else self.isometry
        t = np.array([float(c) for c in self.translation])[:, None]
        return float(self.ratio) * (A @ corners) + t

    def _maps_unit_cube_inside(self) -> bool:
        if self.isometry is None:
            return all(0 <= c and c + self.ratio <= 1 for c in self.translation)
        img = self._corners_image()
        return bool(np.all(img >= -1e-12) and np.all(img <= 1 + 1e-12))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        A = np.eye(self.d) if self.isometry is None else self.isometry
        return float(self.ratio) * (A @ x) + np.array([float(c) for c in self.translation])

    def compose(self, other: "Similarity") -> "Similarity":
        """Return self o other."""
        if self.isometry is None and other.isometry is None:
            trans = tuple(a + self.ratio * b for a, b in zip(self.translation, other.translation))
            return Similarity(self.ratio * other.ratio, trans)
        A = np.eye(self.d) if self.isometry is None else self.isometry
        B = np.eye(self.d) if other.isometry is None else other.isometry
        t = float(self.ratio) * (A @ np.array([float(c) for c in other.translation]))
        t = t + np.array([float(c) for c in self.translation])
        return Similarity(float(self.ratio) * float(other.ratio), tuple(t), A @ B)


class IFS:
    """A finite family of contracting similarities on [0,1]^d."""

    def __init__(self, maps: Sequence[Similarity]):
        maps = list(maps)
        if not maps:
            raise ValueError("an IFS needs at least one map")
        d = maps[0].d
        if d < 1 or any(m.d != d for m in maps):
            raise ValueError("all maps must act on the same dimension d >= 1")
        self.d = d
        self.maps = tuple(maps)

    def __len__(self):
        return len(self.maps)

    def __repr__(self):
        return f"IFS(d={self.d}, N={len(self)}, mode={self.mode!r})"

    @cached_property
    def mode(self) -> str:
        return "dyadic" if all(m.is_dyadic for m in self.maps) else "real"

    @property
    def ratios(self) -> np.ndarray:
        return np.array([float(m.ratio) for m in self.maps])

    @property
    def L_min(self) -> float:
        return float(self.ratios.min())

    @property
    def L_max(self) -> float:
        return float(self.ratios.max())

    @cached_property
    def exponents(self) -> tuple:
        if self.mode != "dyadic":
            raise UnsupportedConfigurationError("integer exponents exist only in dyadic mode")
        return tuple(m.exponent for m in self.maps)

    @cached_property
    def s(self) -> float:
        return similarity_dimension(self)

    def lip(self, word) -> object:
        """Lipschitz constant of S_word; exact Fraction in dyadic mode."""
        if self.mode == "dyadic":
            return Fraction(1, 2 ** sum(self.exponents[i] for i in word))
        return math.prod(float(self.maps[i].ratio) for i in word)

    def compose(self, word) -> Similarity:
        """The map S_{w_1} o ... o S_{w_n}; the identity is not representable."""
        if not word:
            raise ValueError("the empty word has no Similarity representation")
        out = self.maps[word[-1]]
        for i in reversed(word[:-1]):
            out = self.maps[i].compose(out)
        return out

    # serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        if self.mode == "dyadic":
            maps = []
            for m in self.maps:
                e = m.exponent
                maps.append({"ratio": format_dyadic(m.ratio),
                             "translation": [format_dyadic(c, e) for c in m.translation]})
            return {"d": self.d, "mode": "dyadic", "maps": maps}
        maps = []
        for m in self.maps:
            rec = {"ratio": float(m.ratio), "translation": [float(c) for c in m.translation]}
            if m.isometry is not None:
                rec["isometry"] = m.isometry.tolist()
            maps.append(rec)
        return {"d": self.d, "mode": "real", "maps": maps}

    @classmethod
    def from_dict(cls, data: dict) -> "IFS":
        d = int(data["d"])
        mode = data.get("mode", "dyadic")
        if mode not in ("dyadic", "real"):
            raise ValueError(f"unknown IFS mode {mode!r}")
        maps = []
        for rec in data["maps"]:
            trans = rec["translation"]
            if len(trans) != d:
                raise ValueError(f"translation {trans} does not have d = {d} coordinates")
            if mode == "dyadic":
                if rec.get("isometry") is not None:
                    raise UnsupportedConfigurationError("dyadic mode does not allow rotations")
                ratio = parse_dyadic(rec["ratio"])
                if ratio.numerator != 1:
                    raise ValueError(f"dyadic ratio must be 2^-m, got {ratio}")
                sim = Similarity(ratio, tuple(parse_dyadic(c) for c in trans))
                if not sim.is_dyadic:
                    raise ValueError(f"translation {trans} is not on the 2^-m grid of its ratio")
            else:
                sim = Similarity(float(Fraction(str(rec["ratio"]))),
                                 tuple(float(Fraction(str(c))) for c in trans),
                                 rec.get("isometry"))
            maps.append(sim)
        return cls(maps)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def loads(cls, text: str) -> "IFS":
        return cls.from_dict(json.loads(text))

    @classmethod
    def load(cls, path) -> "IFS":
        with open(path) as fh:
            return cls.loads(fh.read())


def dyadic_ifs(d: int, maps) -> IFS:
    """Build a dyadic IFS from ``(m, offset)`` pairs: x -> x/2^m + offset/2^m."""
    sims = []
    for m, offset in maps:
        if isinstance(offset, int):
            offset = (offset,) * d
        sims.append(Similarity(Fraction(1, 2 ** m), tuple(Fraction(p, 2 ** m) for p in offset)))
    return IFS(sims)


def similarity_dimension(ifs: IFS, tol: float = DEFAULT_TOL) -> float:
    """Unique s >= 0 with sum_i ratio_i^s = 1, by bisection.

    s -> sum ratio_i^s is strictly decreasing, so the root is bracketed by
    [0, log N / log(1/L_max)].
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    r = ifs.ratios
    if len(r) == 1:
        return 0.0

    def f(s):
        return float(np.sum(r ** s)) - 1.0

    hi = math.log(len(r)) / math.log(1.0 / ifs.L_max)
    if f(hi) >= -tol:
        # equal ratios: the root is the bracket end itself, up to rounding
        return hi
    # |f'| <= log(1/L_min) near the root, so this xtol gives |f(s)| <= tol.
    xtol = tol / (2.0 * math.log(1.0 / ifs.L_min))
    s = bisect(f, 0.0, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=500)
    if abs(f(s)) > tol:  # pragma: no cover - guarded by the xtol choice
        raise RuntimeError(f"bisection stalled at s={s} with residual {f(s)}")
    return s


def _threshold_exponent(delta) -> int:
    """Smallest integer e with 2^-e < delta (exact for floats and Fractions)."""
    delta = Fraction(delta)
    e = max(0, math.floor(-math.log2(delta)) - 2)
    while Fraction(1, 2 ** e) >= delta:
        e += 1
    return e


def _depth_cap(ifs: IFS, delta) -> int:
    return math.ceil(math.log(float(delta)) / math.log(ifs.L_max)) + 1


def _walk(ifs: IFS, delta, emit_stopping: bool) -> list:
    """Depth-first walk over words with lip >= delta, children in index order.

    Returns the stopping words (children falling below delta) when
    ``emit_stopping`` is set, otherwise the non-empty visited words.  Preorder
    traversal yields both lists in lexicographic order.
    """
    n = len(ifs)
    cap = _depth_cap(ifs, delta)
    if ifs.mode == "dyadic":
        # exact: lip(w) < delta  <=>  sum of exponents >= thr
        steps = ifs.exponents
        thr = _threshold_exponent(delta)
        root = 0

        def child_val(v, i):
            return v + steps[i]

        def below(v):
            return v >= thr
    else:
        steps = [float(m.ratio) for m in ifs.maps]
        dlt = float(delta)
        root = 1.0

        def child_val(v, i):
            return v * steps[i]

        def below(v):
            return v < dlt

    out = []

    def visit(word, val):
        if len(word) > cap:
            raise RuntimeError(f"stopping search exceeded depth cap {cap}")
        for i in range(n):
            child = word + (i,)
            cval = child_val(val, i)
            if below(cval):
                if emit_stopping:
                    out.append(child)
            else:
                if not emit_stopping:
                    out.append(child)
                visit(child, cval)

    visit((), root)
    return out


def delta_stopping(ifs: IFS, delta) -> list:
    """The delta-stopping {w : lip(w) < delta <= lip(w^-)}, sorted."""
    if not 0 < delta <= 1:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    return _walk(ifs, delta, emit_stopping=True)


def words_lip_at_least(ifs: IFS, delta) -> list:
    """All non-empty words w with lip(w) >= delta, sorted."""
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return _walk(ifs, delta, emit_stopping=False)


def tail_sum(ifs: IFS, t: float) -> float:
    """b_t = sum over non-empty words of lip(w)^t = r / (1 - r), r = sum ratio_i^t."""
    r = float(np.sum(ifs.ratios ** t))
    if r >= 1.0:
        raise DivergenceError(f"sum of lip(w)^t diverges for t = {t} <= s = {ifs.s}")
    return r / (1.0 - r)


def check_cosc(ifs: IFS) -> bool:
    """Certify SOSC/COSC with U = (0,1)^d for axis-aligned homotheties.

    True iff the open images S_i((0,1)^d) are pairwise disjoint (they are
    always inside U since every image of [0,1]^d is).
    """
    if any(m.isometry is not None for m in ifs.maps):
        raise UnsupportedConfigurationError(
            "COSC certification is implemented only for axis-aligned homotheties")
    boxes = [(m.translation, m.ratio) for m in ifs.maps]
    for a in range(len(boxes)):
        ta, ra = boxes[a]
        for b in range(a + 1, len(boxes)):
            tb, rb = boxes[b]
            if all(x < y + rb and y < x + ra for x, y in zip(ta, tb)):
                return False
    return True
