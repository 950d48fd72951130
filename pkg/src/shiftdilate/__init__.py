"""shiftdilate: approximation by finite sums of shifted dilates of a window.

The package realizes a constructive density scheme on uniform grids:
any reasonable target can be approximated, in a family of translation
and modulation invariant norms, by finitely many translates of a single
compressed window, with a certified per-stage error decomposition.
"""

from .bupu import (Bupu, DiscreteMeasure, adjointness_residual,
                   build_regular_bupu, discretize, measure_norm,
                   spline_quasi_interp)
from .convolution import (convolve, convolve_measure, discretized_conv_error,
                          mollify_error)
from .errors import (BudgetInfeasible, FunctionSpecError, GridMismatch,
                     NormSpecError, OffGridShift, ShiftDilateError,
                     SignalsNotSubmultiplicative, SupportOverflowWarning,
                     TruncationInfeasible, WindowZeroMean)
from .funcspec import FunctionSpec, parse
from .operators import (TFPoint, dilate_compress, empirical_opnorm, modulate,
                        tf_shift, translate)
from .pipeline import (Approximant, ApproximationReport, approximate,
                       select_bupu, select_rho, truncate_to_test)
from .sampling import (Grid, GridFunction, fourier, hermitian_inner, inner,
                       integral, lp_norm, sample, tail_mass, weighted_lp_norm)
from .spaces import (Katsnelson, Modulation, NormSum, Shubin, WeightedLp,
                     embed_check_L2, fourier_invariance_defect, norm, norm_id,
                     parse_norm, stft, weight_max_equiv_check)
from .weights import (InequalityReport, Weight, c1_constant, check_moderate,
                      check_submultiplicative, eval_weight)

__version__ = "0.1.0"

__all__ = [
    "Approximant", "ApproximationReport", "BudgetInfeasible", "Bupu",
    "DiscreteMeasure", "FunctionSpec", "FunctionSpecError", "Grid",
    "GridFunction", "GridMismatch", "InequalityReport", "Katsnelson",
    "Modulation", "NormSpecError", "NormSum", "OffGridShift",
    "ShiftDilateError", "Shubin", "SignalsNotSubmultiplicative",
    "SupportOverflowWarning", "TFPoint", "TruncationInfeasible",
    "WeightedLp", "Weight", "WindowZeroMean", "adjointness_residual",
    "approximate", "build_regular_bupu", "c1_constant", "check_moderate",
    "check_submultiplicative", "convolve", "convolve_measure",
    "dilate_compress", "discretize", "discretized_conv_error",
    "embed_check_L2", "empirical_opnorm", "eval_weight", "fourier",
    "fourier_invariance_defect", "hermitian_inner", "inner", "integral",
    "lp_norm", "measure_norm", "modulate", "mollify_error", "norm",
    "norm_id", "parse", "parse_norm", "sample", "select_bupu", "select_rho",
    "spline_quasi_interp", "stft", "tail_mass", "tf_shift", "translate",
    "truncate_to_test", "weight_max_equiv_check", "weighted_lp_norm",
]
