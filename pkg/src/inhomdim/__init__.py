"""Box dimensions of inhomogeneous self-similar sets from dyadic covering profiles."""

from .bounds import (AnalyticSource, BoundsReport, ProfileSource, analytic_p, best_bounds,
                     lower_bound_L, theorem_main_bounds, trivial_bounds, upper_bound_U)
from .condensation import (ALL, ONE, MethodSchedule, OscillationParams, profile_from_schedule,
                           realize_cubeset, schedule_oscillating, schedule_sparse,
                           window_trigger_holds)
from .cre import CRECurve, check_keylem, cre_at, cre_curve, cre_levels, cre_liminf, slack
from .cubes import (DEFAULT_WINDOW, CoveringProfile, DyadicCubeSet, count_boxes, dim_estimates,
                    image_cubes, profile_of, union)
from .estimators import BoxCountingDimension, CoveringRegularityExponent, DimensionBounds
from .exceptions import (DivergenceError, MaterializationError, UnreachableThresholdError,
                         UnsupportedConfigurationError)
from .ifs import (IFS, Similarity, check_cosc, delta_stopping, dyadic_ifs, similarity_dimension,
                  tail_sum, words_lip_at_least)
from .orbital import OrbitalApprox, build_orbital, homogeneous_cubes, verify_structure

__version__ = "0.1.0"
