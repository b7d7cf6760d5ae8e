"""Dyadic cube trees, grid box counts and covering profiles.

A level-k cube with integer coordinates (i_1, ..., i_d), 0 <= i_j < 2^k, is
stored as its Morton key: the bits of the coordinates interleaved, most
significant first.  The parent of a key is ``key >> d``, the image under a
dyadic similarity is a fixed bit prefix, and both preserve sorted order, so
every level is a sorted, duplicate-free int64 array maintained by merges.
"""

import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import UnsupportedConfigurationError

MAX_KEY_BITS = 62
DEFAULT_WINDOW = (0.01, 1.0)


def encode(coords: np.ndarray, k: int) -> np.ndarray:
    """Morton keys of level-k cube coordinates, shape (n, d) -> (n,)."""
    coords = np.asarray(coords, dtype=np.int64)
    d = coords.shape[1]
    keys = np.zeros(len(coords), dtype=np.int64)
    for bit in range(k - 1, -1, -1):
        for j in range(d):
            keys = (keys << 1) | ((coords[:, j] >> bit) & 1)
    return keys


def decode(keys: np.ndarray, k: int, d: int) -> np.ndarray:
    keys = np.asarray(keys, dtype=np.int64)
    out = np.zeros((len(keys), d), dtype=np.int64)
    for bit in range(k):
        for j in range(d):
            out[:, j] |= ((keys >> (bit * d + d - 1 - j)) & 1) << bit
    return out


def _dedupe_sorted(keys: np.ndarray) -> np.ndarray:
    if len(keys) < 2:
        return keys
    keep = np.empty(len(keys), dtype=bool)
    keep[0] = True
    np.not_equal(keys[1:], keys[:-1], out=keep[1:])
    return keys[keep]


def merge_keys(arrays) -> np.ndarray:
    """Sorted union of sorted key arrays."""
    arrays = [a for a in arrays if len(a)]
    if len(arrays) == 1:
        return arrays[0]
    # timsort merges the pre-sorted runs in near-linear time
    return _dedupe_sorted(np.sort(np.concatenate(arrays), kind="stable"))


def _check_bits(d: int, k: int):
    if d * k > MAX_KEY_BITS:
        raise UnsupportedConfigurationError(
            f"d * depth = {d * k} exceeds the {MAX_KEY_BITS}-bit cube key limit")


class DyadicCubeSet:
    """A prefix-closed tree of dyadic cubes at levels 0..depth.

    Built from the cubes at the deepest level; the coarser levels are their
    ancestors, so prefix-closure and "every cube has a child" hold by
    construction.  Instances are treated as immutable.
    """

    def __init__(self, d: int, depth: int, leaves, presorted: bool = False):
        if d < 1 or depth < 0:
            raise ValueError("need d >= 1 and depth >= 0")
        _check_bits(d, depth)
        leaves = np.asarray(leaves, dtype=np.int64)
        if leaves.ndim == 2:
            if leaves.shape[1] != d:
                raise ValueError(f"coordinates must have {d} columns")
            if len(leaves) and (leaves.min() < 0 or leaves.max() >= 2 ** depth):
                raise ValueError(f"coordinates must lie in [0, 2^{depth})")
            leaves = encode(leaves, depth)
            presorted = False
        if not presorted:
            leaves = np.unique(leaves)
        if len(leaves) == 0:
            raise ValueError("a cube set must be non-empty")
        if leaves[0] < 0 or leaves[-1] >= 2 ** (d * depth):
            raise ValueError("cube key out of range")
        self.d = d
        self.depth = depth
        self._levels = {depth: leaves}

    def __repr__(self):
        return f"DyadicCubeSet(d={self.d}, depth={self.depth}, leaves={len(self.leaves)})"

    def __eq__(self, other):
        if not isinstance(other, DyadicCubeSet):
            return NotImplemented
        return (self.d == other.d and self.depth == other.depth
                and np.array_equal(self.leaves, other.leaves))

    @property
    def leaves(self) -> np.ndarray:
        return self._levels[self.depth]

    def level(self, k: int) -> np.ndarray:
        """Sorted keys of the level-k cubes."""
        if not 0 <= k <= self.depth:
            raise ValueError(f"level {k} outside 0..{self.depth}")
        if k not in self._levels:
            finer = min(j for j in self._levels if j > k)
            self._levels[k] = _dedupe_sorted(self._levels[finer] >> (self.d * (finer - k)))
        return self._levels[k]

    def coords(self, k: int) -> np.ndarray:
        return decode(self.level(k), k, self.d)

    def truncate(self, k: int) -> "DyadicCubeSet":
        return DyadicCubeSet(self.d, k, self.level(k), presorted=True)

    # constructors ------------------------------------------------------

    @classmethod
    def full(cls, d: int, depth: int) -> "DyadicCubeSet":
        return cls(d, depth, np.arange(2 ** (d * depth), dtype=np.int64), presorted=True)

    @classmethod
    def point(cls, x, depth: int) -> "DyadicCubeSet":
        """Single-branch set: the cube [i 2^-K, (i+1) 2^-K] with i = floor(x 2^K), clipped."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        n = 2 ** depth
        coords = np.minimum(np.floor(x * n).astype(np.int64), n - 1)
        return cls(len(x), depth, coords[None, :])

    # text format -------------------------------------------------------

    def dumps(self) -> str:
        lines = [f"{self.d} {self.depth}"]
        c = self.coords(self.depth)
        c = c[np.lexsort(c.T[::-1])]
        lines += [" ".join(map(str, row)) for row in c]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "DyadicCubeSet":
        rows = [ln.split() for ln in text.splitlines() if ln.strip()]
        if not rows or len(rows[0]) != 2:
            raise ValueError("cube-set file must start with a 'd K' header")
        d, depth = int(rows[0][0]), int(rows[0][1])
        body = np.array([[int(v) for v in r] for r in rows[1:]], dtype=np.int64)
        if body.size == 0:
            raise ValueError("cube-set file lists no cubes")
        return cls(d, depth, body.reshape(-1, d))

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.dumps())

    @classmethod
    def load(cls, path) -> "DyadicCubeSet":
        with open(path) as fh:
            return cls.loads(fh.read())


@dataclass(frozen=True)
class CoveringProfile:
    """log2 M_{2^-k}(C) for k = 0..depth.

    ``logM`` is an int64 array for synthetic (exact) profiles and float64 for
    measured ones.
    """

    d: int
    logM: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.logM)
        if arr.dtype.kind in "iu":
            arr = arr.astype(np.int64)
        else:
            arr = arr.astype(np.float64)
        if arr.ndim != 1 or len(arr) < 1:
            raise ValueError("logM must be a non-empty 1-d array")
        if arr[0] != 0:
            raise ValueError("logM[0] must be 0 (one root cube)")
        step = np.diff(arr)
        slack = 0 if arr.dtype.kind == "i" else 1e-9
        if np.any(step < -slack) or np.any(step > self.d + slack):
            raise ValueError("profile violates logM[k] <= logM[k+1] <= logM[k] + d")
        arr.setflags(write=False)
        object.__setattr__(self, "logM", arr)

    @property
    def exact(self) -> bool:
        return np.asarray(self.logM).dtype.kind in "iu"

    @property
    def depth(self) -> int:
        return len(self.logM) - 1

    def __eq__(self, other):
        if not isinstance(other, CoveringProfile):
            return NotImplemented
        return self.d == other.d and np.array_equal(self.logM, other.logM)

    def __hash__(self):
        return hash((self.d, self.logM.tobytes()))

    def dumps(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "log2M"])
        for k, v in enumerate(self.logM):
            w.writerow([k, int(v) if self.exact else repr(float(v))])
        return buf.getvalue()

    @classmethod
    def loads(cls, text: str, d: int) -> "CoveringProfile":
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        if [h.strip() for h in header] != ["k", "log2M"]:
            raise ValueError("profile CSV must have header 'k,log2M'")
        rows = [r for r in reader if r]
        ks = [int(r[0]) for r in rows]
        if ks != list(range(len(ks))):
            raise ValueError("profile rows must list k = 0, 1, 2, ... in order")
        raw = [r[1].strip() for r in rows]
        try:
            vals = np.array([int(v) for v in raw], dtype=np.int64)
        except ValueError:
            vals = np.array([float(v) for v in raw], dtype=np.float64)
        return cls(d, vals)

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.dumps())

    @classmethod
    def load(cls, path, d: int) -> "CoveringProfile":
        with open(path) as fh:
            return cls.loads(fh.read(), d)


def count_boxes(cubes: DyadicCubeSet, k: int) -> int:
    """M_{2^-k}: number of level-k cubes of the set."""
    if not 0 <= k <= cubes.depth:
        raise ValueError(f"level {k} outside 0..{cubes.depth}; no extrapolation")
    return int(len(cubes.level(k)))


def profile_of(cubes: DyadicCubeSet) -> CoveringProfile:
    counts = np.array([count_boxes(cubes, k) for k in range(cubes.depth + 1)])
    log2 = np.log2(counts)
    # exact whenever every count is a power of two
    if np.all(counts & (counts - 1) == 0):
        log2 = np.array([int(c).bit_length() - 1 for c in counts], dtype=np.int64)
    return CoveringProfile(cubes.d, log2)


def window_levels(depth: int, window=DEFAULT_WINDOW) -> range:
    """Levels k >= 1 with a*depth <= k <= b*depth."""
    a, b = window
    if not (0 < a < b <= 1):
        raise ValueError(f"window must satisfy 0 < a < b <= 1, got {window}")
    lo, hi = max(1, math.ceil(a * depth - 1e-9)), math.floor(b * depth + 1e-9)
    if lo > hi:
        raise ValueError(f"window {window} contains no level at depth {depth}")
    return range(lo, hi + 1)


def dim_estimates(profile: CoveringProfile, window=DEFAULT_WINDOW) -> tuple:
    """(min, max) of logM[k]/k over the window levels: finite-depth box dimensions."""
    ks = window_levels(profile.depth, window)
    ratios = np.asarray(profile.logM[ks.start:ks.stop], dtype=float) / np.arange(ks.start, ks.stop)
    return float(ratios.min()), float(ratios.max())


def image_cubes(sim, cubes: DyadicCubeSet, out_depth: int) -> DyadicCubeSet:
    """Cube set of S(C) for a dyadic similarity S (ratio 2^-m), exact on the grid."""
    if not getattr(sim, "is_dyadic", False):
        raise UnsupportedConfigurationError("image_cubes needs a dyadic similarity")
    if sim.d != cubes.d:
        raise ValueError("dimension mismatch between map and cube set")
    m = sim.exponent
    if out_depth > cubes.depth + m:
        raise ValueError(f"out_depth {out_depth} exceeds depth + m = {cubes.depth + m}")
    offset = np.array(sim.offset, dtype=np.int64)[None, :]
    if out_depth >= m:
        k = out_depth - m
        prefix = int(encode(offset, m)[0]) << (cubes.d * k)
        return DyadicCubeSet(cubes.d, out_depth, cubes.level(k) | prefix, presorted=True)
    return DyadicCubeSet(cubes.d, out_depth, offset >> (m - out_depth))


def union(sets: Sequence[DyadicCubeSet]) -> DyadicCubeSet:
    """Level-wise union; the result has the smallest depth among the inputs."""
    sets = list(sets)
    if not sets:
        raise ValueError("union of no sets")
    d = sets[0].d
    if any(s.d != d for s in sets):
        raise ValueError("dimension mismatch in union")
    depth = min(s.depth for s in sets)
    keys = merge_keys([s.level(depth) for s in sets])
    return DyadicCubeSet(d, depth, keys, presorted=True)
