"""Thermodynamic formalism on the full shift over Z minus {0}.

Equilibrium states of finite-range potentials, the homoclinic cocycle,
conjugating homeomorphisms as rewrite pieces, Gibbs/Bowen/invariance checks
and the convolution *-algebra with KMS verification.
"""
from .algebra import (AlgebraElement, allclose, canonicalize, convolve, evaluate_at, evaluate_F,
                      identity, involution, kms_boundary_residual, kms_residual, positivity_check,
                      random_element, sigma_t, state)
from .cocycle import (HomoclinicPair, RewritePiece, bar_move_conjugator, cocycle_V, compose,
                      invert, kappa, parse_pair, refine_for_cocycle, refine_piece,
                      symmetric_conjugator, vartheta)
from .errors import (CapExceededError, ContextError, ConvergenceError, DegenerateError, GapError,
                     InconsistentError, KmsGibbsError, NotationError)
from .potential import FiniteRangePotential
from .symbolic import (EMPTY, FULL, Cylinder, Window, format_cylinder, intersect, parse_cylinder,
                       refine, shift_cylinder)
from .thermo import (FiniteVolumeMeasure, MarkovEquilibrium, PerronData, birkhoff_sum,
                     cylinder_measure, entropy_and_integral, finite_volume_measure, normalize,
                     perron, transfer_matrix, window_measures)
from .verify import (GibbsReport, bar_ratio_scan, bowen_bounds, bowen_envelope, bowen_scan,
                     gibbs_residual, gibbs_residual_weighted, gibbs_scan, invariance_check, k_bound,
                     solve_gibbs_system)

__version__ = "0.1.0"
