"""formlab: exact verification of differential-form identities and
Steklov-type boundary spectra on Euclidean balls.

The library layers are, bottom up:

  exterior     pointwise exterior algebra on multi-index bases
  polynomials  sparse exact-rational multivariate polynomials
  polyform     polynomial differential forms and the flat calculus
  quadrature   exact moments over spheres and balls, stochastic oracle
  ball         boundary calculus on the sphere, weight functions
  identities   integral identity checks and proof-chain replays
  harmonic     homogeneous harmonic form spaces by rational elimination
  spectral     boundary operator assembly, eigensolves, certification
  curvature    chart-based Weitzenboeck / Bochner / curvature checks
  cli          batch runner with reports, CSV tables and exit codes
"""

from .exterior import ConstantForm, LinearEndomorphism, MultiIndex, multi_indices
from .polynomials import Polynomial
from .polyform import PolyForm, PolyVectorField, gradient_action
from .quadrature import (ExactScalar, RadialDensity, integrate_ball,
                         integrate_sphere, mc_oracle, sphere_average)
from .ball import (BallDomain, BoundaryForm, WeightFunction, b_term,
                   b_term_alternate, canonical_weight, normal_part, shape_lift)
from .identities import (IdentityReport, pointwise_hessian_estimate,
                         replay_proof_chain, verify_function_reilly,
                         verify_pohozhaev, verify_stokes,
                         verify_unweighted_reilly, verify_weighted_reilly)
from .harmonic import BasisCache, FormSpaceBasis, sphere_reduce
from .spectral import (ExtensionProblem, SpectrumReport, assemble_operator,
                       ball_reference_eigenvalue, certify_eigenvalue,
                       check_bounds, extend, scaling_check)
from .curvature import (ChartMetric, bochner_residual, curvature_at,
                        gallot_meyer_check, weitzenbock_at)

__version__ = "0.1.0"

__all__ = [
    "BallDomain", "BasisCache", "BoundaryForm", "ChartMetric", "ConstantForm",
    "ExactScalar", "ExtensionProblem", "FormSpaceBasis", "IdentityReport",
    "LinearEndomorphism", "MultiIndex", "PolyForm", "PolyVectorField",
    "Polynomial", "RadialDensity", "SpectrumReport", "WeightFunction",
    "assemble_operator", "b_term", "b_term_alternate",
    "ball_reference_eigenvalue", "bochner_residual", "canonical_weight",
    "certify_eigenvalue", "check_bounds", "curvature_at", "extend",
    "gallot_meyer_check", "gradient_action", "integrate_ball",
    "integrate_sphere", "mc_oracle", "multi_indices", "normal_part",
    "pointwise_hessian_estimate", "replay_proof_chain", "scaling_check",
    "shape_lift", "sphere_average", "sphere_reduce", "verify_function_reilly",
    "verify_pohozhaev", "verify_stokes", "verify_unweighted_reilly",
    "verify_weighted_reilly", "weitzenbock_at",
]
