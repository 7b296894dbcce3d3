"""mgltk: desk-scale numerical verification of binary-entropy convexity
claims and the entropy-inverse inequality for binary symmetric channels.

Hot kernels run on a compiled core when available, with a numpy fallback
selected at import (see ``mgltk.kernels.backend_name``).
"""

__version__ = "0.1.0"

from .kernels import backend_name
from .errors import (ConvergenceError, DomainError, HypothesisViolationError,
                     SingularityError)
from .entropy import (LN2, LogBase, binary_entropy, binary_entropy_inverse,
                      convolve, entropy_first_derivative,
                      entropy_second_derivative, entropy_values,
                      entropy_inverse_values, max_entropy)
from .curves import (ConstantCurve, EntropyCurve, EntropyInverseCurve,
                     FlooredCurve, MglComposite, PiecewiseLinearCurve,
                     SmoothCurve, inverse_convexity_criterion,
                     invert_increasing, onesided_convexity_margin,
                     smooth_convexity_margin, weighted_log_ratio)
from .convexity import (ConvexityReport, GridSpec, VERDICT_CONCAVE,
                        VERDICT_CONVEX, VERDICT_INCONCLUSIVE, VERDICT_NEITHER,
                        format_scan_report, p_interval_scan,
                        right_derivative_monotonicity_check,
                        second_difference_scan, theorem1_scan)
from .mgl import (JointDistribution, MglBatchSummary, MglTrialResult,
                  VIOLATION_TOL, conditional_entropy_input,
                  conditional_entropy_output, mgl_gap, verify_mgl_batch)
from .application import (InequalityScanResult, SplitEntropyCurve,
                          SplitEntropyInverseCurve, claim1_grid,
                          claim1_verify, figure1_rows, inequality_lhs,
                          inequality_rhs, inequality_scan, write_figure1)
