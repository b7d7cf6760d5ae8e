"""Truncated orbital sets of dyadic IFSs with a condensation set.

With Lipschitz cutoff 2^-J the truncated orbital set is

    C  u  U{ S_w(C) : lip(w) >= 2^-J }  u  U{ S_w([0,1]^d) : w in I(2^-J) }.

Splitting words by their first letter gives the recursion used here,

    Orb(J) = C  u  U_i S_i(Orb(J - m_i))      (m_i <= J)
                u  U_i S_i([0,1]^d)           (m_i > J),

which is exact on the dyadic grid and never enumerates words.
"""

from dataclasses import dataclass

import numpy as np

from .cubes import DyadicCubeSet, image_cubes, union
from .exceptions import MaterializationError, UnsupportedConfigurationError
from .ifs import IFS

MAX_MATERIALIZED_LOG2 = 26


def _check_dyadic(ifs: IFS):
    if ifs.mode != "dyadic":
        raise UnsupportedConfigurationError("orbital sets are only built for dyadic IFSs")


def _guard(d: int, level: int):
    if d * level > MAX_MATERIALIZED_LOG2:
        raise MaterializationError(
            f"level {level} in d = {d} may hold 2^{d * level} cubes, above the "
            f"2^{MAX_MATERIALIZED_LOG2} guard")


def _ancestor(sim, k: int) -> np.ndarray:
    """Level-k cube containing S([0,1]^d), for k <= m."""
    return (np.array(sim.offset, dtype=np.int64) >> (sim.exponent - k))[None, :]


def _projected(ifs: IFS, base, J: int, k: int, memo: dict) -> DyadicCubeSet:
    """Level-k projection of the depth-J construction, memoized on (J, k).

    ``base(k)`` supplies the level-k cubes of the set being adjoined (C for
    the orbital set, None for the homogeneous attractor).
    """
    key = (J, k)
    if key in memo:
        return memo[key]
    d = ifs.d
    parts = []
    b = base(k)
    if b is not None:
        parts.append(b)
    if k == 0:
        parts.append(DyadicCubeSet(d, 0, np.zeros((1, d), dtype=np.int64)))
    else:
        for sim in ifs.maps:
            m = sim.exponent
            if k >= m and J >= m:
                parts.append(image_cubes(sim, _projected(ifs, base, J - m, k - m, memo), k))
            else:
                parts.append(DyadicCubeSet(d, k, _ancestor(sim, k)))
    out = union(parts)
    memo[key] = out
    return out


def _word_counts(exps, J: int) -> tuple:
    """(#non-empty words with lip >= 2^-J, #words in the stopping I(2^-J))."""
    at_least = [0] * (J + 1)   # including the empty word
    stop = [0] * (J + 1)
    for j in range(J + 1):
        at_least[j] = 1 + sum(at_least[j - m] for m in exps if m <= j)
        stop[j] = sum(stop[j - m] if m <= j else 1 for m in exps)
    return at_least[J] - 1, stop[J]


@dataclass
class OrbitalApprox:
    ifs: IFS
    condensation: DyadicCubeSet
    depth: int
    cubes: DyadicCubeSet
    words_used: int
    stopping_words: int

    @property
    def lip_cutoff(self) -> float:
        return 2.0 ** -self.depth


def build_orbital(ifs: IFS, condensation: DyadicCubeSet, K: int, max_level=None) -> OrbitalApprox:
    """Truncated orbital set with Lipschitz cutoff 2^-K.

    The cube set is materialized down to ``max_level`` (default K); a
    smaller value returns the exact projection of the depth-K construction.
    """
    _check_dyadic(ifs)
    if condensation.d != ifs.d:
        raise ValueError("condensation and IFS dimensions differ")
    if max_level is None:
        max_level = K
    if not 0 <= max_level <= K:
        raise ValueError("need 0 <= max_level <= K")
    if condensation.depth < max_level:
        raise ValueError(f"condensation depth {condensation.depth} < {max_level}")
    _guard(ifs.d, max_level)
    memo = {}
    cubes = _projected(ifs, condensation.truncate, K, max_level, memo)
    used, stopping = _word_counts(ifs.exponents, K)
    return OrbitalApprox(ifs, condensation, K, cubes, used, stopping)


def homogeneous_cubes(ifs: IFS, J: int, k: int) -> DyadicCubeSet:
    """Level-k cubes met by U{ S_w([0,1]^d) : w in I(2^-J) }."""
    _check_dyadic(ifs)
    _guard(ifs.d, k)
    return _projected(ifs, lambda _k: None, J, k, {})


def _contains(big: np.ndarray, small: np.ndarray) -> bool:
    idx = np.searchsorted(big, small)
    idx = np.minimum(idx, len(big) - 1)
    return bool(np.all(big[idx] == small))


def verify_structure(ifs: IFS, condensation: DyadicCubeSet, K: int, margin: int) -> bool:
    """Finite-depth check that F_empty lies in the closure of the orbital set.

    Every level-k cube (k <= K) met by the homogeneous approximation at
    cutoff 2^-(k + margin) must also be met by the orbital set built with
    cutoff 2^-(K + margin).
    """
    if condensation is None:
        raise ValueError("the condensation set must be non-empty")
    if margin < 0:
        raise ValueError("margin must be non-negative")
    orb = build_orbital(ifs, condensation, K + margin, max_level=K).cubes
    for k in range(K + 1):
        hom = homogeneous_cubes(ifs, k + margin, k)
        if not _contains(orb.level(k), hom.level(k)):
            return False
    return True


def to_pgm(cubes: DyadicCubeSet, k=None) -> bytes:
    """Binary PGM raster of the level-k cubes (d = 2), black on white, y up."""
    if cubes.d != 2:
        raise UnsupportedConfigurationError("rasters are only produced for d = 2")
    k = cubes.depth if k is None else k
    _guard(2, k)
    n = 2 ** k
    img = np.full((n, n), 255, dtype=np.uint8)
    c = cubes.coords(k)
    img[n - 1 - c[:, 1], c[:, 0]] = 0
    return f"P5\n{n} {n}\n255\n".encode() + img.tobytes()


def to_svg(cubes: DyadicCubeSet, k=None, size: int = 512, max_cubes: int = 1 << 16) -> str:
    """SVG with one filled square per level-k cube (d = 2)."""
    if cubes.d != 2:
        raise UnsupportedConfigurationError("rasters are only produced for d = 2")
    k = cubes.depth if k is None else k
    c = cubes.coords(k)
    if len(c) > max_cubes:
        raise MaterializationError(f"{len(c)} cubes is too many for SVG; use to_pgm")
    n = 2 ** k
    w = size / n
    rects = [f'<rect x="{x * w:.6g}" y="{(n - 1 - y) * w:.6g}" width="{w:.6g}" height="{w:.6g}"/>'
             for x, y in c]
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
            f'viewBox="0 0 {size} {size}">\n'
            f'<rect width="{size}" height="{size}" fill="white"/>\n<g fill="black">\n'
            + "\n".join(rects) + "\n</g>\n</svg>\n")
