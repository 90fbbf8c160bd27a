"""Gradient blow-up exponents for the insulated conductivity problem.

The package computes the first nonzero eigenvalue lambda_1 of the weighted
Laplace-Beltrami problem -div(a grad u) = lambda a u on S^(n-2), where the
weight a(xi) is the quadratic form of the relative curvature matrix of two
nearly touching insulating inclusions, and converts it through

    alpha(lambda_1) = positive root of alpha^2 + (n-1) alpha - lambda_1

into the power laws governing the electric field concentration: |grad u|
grows like |x'|^(alpha-1) in the distance to the touching axis and like
eps^((alpha-1)/2) in the inclusion gap.  Alongside the spectral solvers
(n=3 circle reduction, n=4 spherical harmonics) it ships the degenerate
model equation on the disk whose solutions exhibit exactly this decay, the
perturbation series about the isotropic weight, and the variable-coefficient
normal-form reduction.
"""

from .anisotropy import (
    AnisotropyMatrix,
    BoundsRecord,
    ExponentReport,
    SolverMeta,
    WeightFunction,
    alpha_of_lambda,
    analytic_bounds,
    normalize,
)
from .circle import (
    CirclePair,
    CircleSpectralResult,
    DirichletSLProblem,
    eigenfunction_on_circle,
    lambda1_lambda2_circle,
    solve_dirichlet_mu1,
)
from .disk import (
    DecayFit,
    PolarField,
    PolarGrid,
    measure_decay,
    solve_weighted_disk,
    weighted_circle_average,
)
from .errors import (
    ConvergenceFailure,
    DegenerateWeight,
    DimensionMismatch,
    EllipticityViolation,
    EmptyRange,
    InputError,
    InsufficientRings,
    InsulexpError,
    NegativeLambda,
    NoConvergence,
    NonPositiveEntry,
    NotConverged,
    NotPositiveDefinite,
    NumericalError,
    QuadratureFailure,
    SingularResolvent,
    SizeMismatch,
    SolverDiverged,
    UnsupportedDimension,
    WrongDimension,
)
from .perturbation import (
    Lambda1Prediction,
    PerturbationSetup,
    SeriesCoefficients,
    first_order_coefficient,
    perturbation_setup,
    predict_lambda1,
    second_order_coefficient,
    series_coefficients,
)
from .reduction import (
    AffineCoefficientField,
    ReductionResult,
    SelfMapReport,
    field_from_dict,
    field_to_dict,
    fixed_point_x0,
    load_field,
    matrix_sqrt_spd,
    self_map_check,
    transformed_field,
)
from .report import build_exponent_report, report_to_dict
from .sphere import (
    GalerkinBasis,
    SphereSpectralResult,
    assemble_pencil,
    build_basis,
    project_onto_basis,
    solve_lambda1_sphere,
    weight_at_nodes,
    weighted_inner_product,
)

__version__ = "0.1.0"

__all__ = [
    "AnisotropyMatrix",
    "WeightFunction",
    "BoundsRecord",
    "SolverMeta",
    "ExponentReport",
    "normalize",
    "alpha_of_lambda",
    "analytic_bounds",
    "DirichletSLProblem",
    "CircleSpectralResult",
    "CirclePair",
    "solve_dirichlet_mu1",
    "lambda1_lambda2_circle",
    "eigenfunction_on_circle",
    "GalerkinBasis",
    "SphereSpectralResult",
    "build_basis",
    "assemble_pencil",
    "weight_at_nodes",
    "project_onto_basis",
    "solve_lambda1_sphere",
    "weighted_inner_product",
    "PerturbationSetup",
    "SeriesCoefficients",
    "Lambda1Prediction",
    "perturbation_setup",
    "first_order_coefficient",
    "second_order_coefficient",
    "series_coefficients",
    "predict_lambda1",
    "PolarGrid",
    "PolarField",
    "DecayFit",
    "solve_weighted_disk",
    "weighted_circle_average",
    "measure_decay",
    "AffineCoefficientField",
    "ReductionResult",
    "SelfMapReport",
    "matrix_sqrt_spd",
    "fixed_point_x0",
    "self_map_check",
    "transformed_field",
    "field_from_dict",
    "field_to_dict",
    "load_field",
    "build_exponent_report",
    "report_to_dict",
    "InsulexpError",
    "InputError",
    "NumericalError",
    "ConvergenceFailure",
    "DegenerateWeight",
    "DimensionMismatch",
    "EllipticityViolation",
    "EmptyRange",
    "InsufficientRings",
    "NegativeLambda",
    "NoConvergence",
    "NonPositiveEntry",
    "NotConverged",
    "NotPositiveDefinite",
    "QuadratureFailure",
    "SingularResolvent",
    "SizeMismatch",
    "SolverDiverged",
    "UnsupportedDimension",
    "WrongDimension",
]
