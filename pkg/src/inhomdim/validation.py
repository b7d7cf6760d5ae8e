"""Input coercion shared by the estimators and the CLI."""

import numpy as np

from .cubes import CoveringProfile, DyadicCubeSet, profile_of


def check_profile(X, d=None) -> CoveringProfile:
    """Coerce X into a :class:`CoveringProfile`.

    Accepts a profile, a cube set, a schedule (anything with ``N2`` and
    ``d``) or a 1-d array of log2 counts together with ``d``.
    """
    if isinstance(X, CoveringProfile):
        if d is not None and X.d != d:
            raise ValueError(f"profile has d = {X.d}, expected {d}")
        return X
    if isinstance(X, DyadicCubeSet):
        return profile_of(X)
    if hasattr(X, "N2") and hasattr(X, "d"):
        from .condensation import profile_from_schedule
        return profile_from_schedule(X)
    if d is None:
        raise ValueError("an array of log2 counts needs the ambient dimension d")
    arr = np.asarray(X)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d array of log2 counts, got shape {arr.shape}")
    if arr.dtype.kind == "f" and np.all(arr == np.round(arr)):
        arr = arr.astype(np.int64)
    return CoveringProfile(int(d), arr)


def check_window(window) -> tuple:
    a, b = (float(v) for v in window)
    if not 0 < a < b <= 1:
        raise ValueError(f"window must satisfy 0 < a < b <= 1, got {window}")
    return a, b


def check_t_values(T) -> np.ndarray:
    t = np.atleast_1d(np.asarray(T, dtype=float)).ravel()
    if t.size == 0:
        raise ValueError("need at least one t value")
    if np.any(t < 0) or not np.all(np.isfinite(t)):
        raise ValueError("t values must be finite and non-negative")
    return t
