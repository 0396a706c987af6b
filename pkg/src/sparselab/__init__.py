"""Two-weight norm experiments for sparse dyadic operators on [0, 1).

The package computes weight characteristics, certified operator-norm
estimates, local testing constants, and the power-weight sweeps that
exhibit the sharp growth exponents, all in exact dyadic arithmetic over
finite interval families.
"""

from .ascent import AscentResult, CubeObjective, maximize
from .dyadic import (
    ROOT,
    AtomPartition,
    DyadicInterval,
    Relation,
    SparseFamily,
    atoms_of,
    carleson_constant,
    chain_family,
    packing_certified,
    relate,
    subdivide,
    uniform_partition,
)
from .errors import (
    BaselineViolationError,
    DegenerateInstanceError,
    InstanceParseError,
    ParameterError,
    SparselabError,
)
from .functions import StepFunction
from .instances import RandomInstance, make_instance, random_family, random_weight
from .sharpness import (
    SharpnessConfig,
    SlopeFit,
    SweepRow,
    default_eps_grid,
    dual_quantities,
    expected_slope,
    fit_slope,
    primal_quantities,
    sweep,
)
from .sparse import (
    OpNormEstimate,
    apply_sparse,
    estimate_opnorm,
    indicator_lower_bound,
    lp_norm,
    oracle_opnorm,
    rayleigh_objective,
    rhs_branch,
    theorem_rhs,
)
from .stopping import StoppingFamily, build_principal_cubes, principal_sum_bound
from .suites import SuiteResult, SuiteRow, run_suite
from .testing import (
    ComparabilityReport,
    MeasureEstimateQuery,
    PositiveDyadicOperator,
    check_lemma32,
    check_lemma41,
    check_lemma43,
    check_prop31,
    lsu_check,
    lsu_testing_sums,
    testing_T,
    testing_Tstar,
    verify_thm42,
)
from .weights import (
    LEBESGUE,
    CharacteristicReport,
    ExponentConfig,
    FeasibilityReport,
    PiecewiseWeight,
    PowerWeight,
    ainfty,
    average,
    classical_ap,
    dyadic_maximal,
    feasibility,
    one_weight_apq,
    two_weight_char,
    weighted_average,
    weighted_integral,
)

__version__ = "0.1.0"

__all__ = [
    "AscentResult",
    "AtomPartition",
    "BaselineViolationError",
    "CharacteristicReport",
    "ComparabilityReport",
    "CubeObjective",
    "DegenerateInstanceError",
    "DyadicInterval",
    "ExponentConfig",
    "FeasibilityReport",
    "InstanceParseError",
    "LEBESGUE",
    "MeasureEstimateQuery",
    "OpNormEstimate",
    "ParameterError",
    "PiecewiseWeight",
    "PositiveDyadicOperator",
    "PowerWeight",
    "ROOT",
    "RandomInstance",
    "Relation",
    "SharpnessConfig",
    "SlopeFit",
    "SparseFamily",
    "SparselabError",
    "StepFunction",
    "StoppingFamily",
    "SuiteResult",
    "SuiteRow",
    "SweepRow",
    "ainfty",
    "apply_sparse",
    "atoms_of",
    "average",
    "build_principal_cubes",
    "carleson_constant",
    "chain_family",
    "check_lemma32",
    "check_lemma41",
    "check_lemma43",
    "check_prop31",
    "classical_ap",
    "default_eps_grid",
    "dual_quantities",
    "dyadic_maximal",
    "estimate_opnorm",
    "expected_slope",
    "feasibility",
    "fit_slope",
    "indicator_lower_bound",
    "lp_norm",
    "lsu_check",
    "lsu_testing_sums",
    "make_instance",
    "maximize",
    "one_weight_apq",
    "oracle_opnorm",
    "packing_certified",
    "primal_quantities",
    "principal_sum_bound",
    "random_family",
    "random_weight",
    "rayleigh_objective",
    "relate",
    "rhs_branch",
    "run_suite",
    "subdivide",
    "sweep",
    "testing_T",
    "testing_Tstar",
    "theorem_rhs",
    "two_weight_char",
    "uniform_partition",
    "verify_thm42",
    "weighted_average",
    "weighted_integral",
]
