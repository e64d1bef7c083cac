"""Multiple orthogonal polynomials on the geometric q-lattice: weights,
moment solvers, matrix difference structure, and large-degree asymptotics."""

from .qcore import (BranchAmbiguity, ConstraintViolation, DegenerateParams,
                    DivergentMoment, IntegerAlpha, LatticeProximity,
                    MissingSample, NoConvergence, NonDecayingSummand,
                    Params, PoleProximity, PrecisionConfig,
                    PrecisionExhausted, QLatticeError, SingularSystem,
                    WeightSpec, ZeroArgument, config_for, digits_for,
                    g_eval, h_eval, jackson_integral, qpoch_finite,
                    qpoch_infinite, to_mp, truncation_index, weight_eval,
                    weight_table)
from .mop import (GammaNorms, Polynomial, RecurrenceCoeffs, YMatrix,
                  cauchy_transform, gamma_norms, moment, moments,
                  orthogonality_residual, solve_pair, stepline_recurrence,
                  y_eval)
from .qdiff import (LaxClosedForm, LaxMatrix, SeriesSolution,
                    cauchy_column_residual, dn_at_zero, dn_closed_form,
                    dn_from_y, normalized_cauchy, scalar_residual, u_series)
from .asymptotics import (MN_CONTESTED, MN_RECOMPUTED, MN_REFERENCE,
                          LimitEstimate,
                          TransferReport, c1_crosscheck, f1_eval, g1_sum,
                          gamma_scaling, lambda_direct, lambda_transfer,
                          omega1, pnn0_limit, scaled_poly, small_t_transfer,
                          u_zero_near, universality_compare, vanishing_check)

__version__ = "0.1.0"
