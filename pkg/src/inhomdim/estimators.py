"""scikit-learn style front ends for the dimension and CRE estimators."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .bounds import ProfileSource, best_bounds
from .cre import cre_curve, cre_liminf, slack
from .cubes import DEFAULT_WINDOW, dim_estimates, window_levels
from .validation import check_profile, check_t_values, check_window


class BoxCountingDimension(BaseEstimator):
    """Finite-depth lower/upper box dimension from dyadic grid counts.

    Parameters
    ----------
    window : (float, float), default=(0.01, 1.0)
        Fractions of the depth delimiting the levels k used in min/max of
        log2 M_{2^-k} / k.
    d : int, optional
        Ambient dimension, only needed when fitting a raw array of log2 counts.

    Attributes
    ----------
    profile_ : CoveringProfile
    lower_, upper_ : float
    """

    def __init__(self, window=DEFAULT_WINDOW, d=None):
        self.window = window
        self.d = d

    def fit(self, X, y=None):
        window = check_window(self.window)
        self.profile_ = check_profile(X, self.d)
        self.lower_, self.upper_ = dim_estimates(self.profile_, window)
        return self

    def fit_predict(self, X, y=None):
        return np.array(self.fit(X).estimates_)

    @property
    def estimates_(self):
        check_is_fitted(self, "profile_")
        return self.lower_, self.upper_


class CoveringRegularityExponent(TransformerMixin, BaseEstimator):
    """Discrete t-CRE of a set, queried by ``transform`` at arbitrary t.

    ``fit`` stores the covering profile; ``transform(T)`` returns the window
    minimum of p_hat_t for each t in T.
    """

    def __init__(self, window=DEFAULT_WINDOW, d=None):
        self.window = window
        self.d = d

    def fit(self, X, y=None):
        window = check_window(self.window)
        self.profile_ = check_profile(X, self.d)
        ks = window_levels(self.profile_.depth, window)
        self.k_min_, self.k_max_ = ks.start, ks.stop - 1
        self.slack_ = slack(self.k_min_)
        self.lower_, self.upper_ = dim_estimates(self.profile_, window)
        return self

    def transform(self, T):
        check_is_fitted(self, "profile_")
        t = check_t_values(T)
        return np.array([cre_liminf(self.profile_, v, self.window) for v in t])

    def curves(self, T):
        check_is_fitted(self, "profile_")
        return cre_curve(self.profile_, check_t_values(T), self.window)


class DimensionBounds(BaseEstimator):
    """Best lower/upper bounds on the lower box dimension of F_C.

    ``s`` is the similarity dimension of the IFS; the condensation set is
    passed to ``fit``.  See :func:`inhomdim.bounds.best_bounds`.
    """

    def __init__(self, s=1.0, window=DEFAULT_WINDOW, t_range=None, grid_n=1000,
                 sosc=True, cosc=None, d=None):
        self.s = s
        self.window = window
        self.t_range = t_range
        self.grid_n = grid_n
        self.sosc = sosc
        self.cosc = cosc
        self.d = d

    def fit(self, X, y=None):
        profile = check_profile(X, self.d)
        source = ProfileSource(profile, check_window(self.window))
        self.report_ = best_bounds(self.s, source, self.t_range, self.grid_n,
                                   sosc=self.sosc, cosc=self.cosc)
        self.supL_ = self.report_.supL
        self.infU_ = self.report_.infU
        return self
