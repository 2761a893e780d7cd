"""Distribution-input ReLU networks and two-stage distribution regression.

The package evaluates fully connected ReLU networks whose input is a
probability measure on the closed unit ball: an initial group of layers is
applied atom by atom, the activations are averaged against the measure, and
the remaining layers act on the averaged vector.  On top of that evaluation
routine it provides

* exact Wasserstein distances between empirical measures,
* a ReLU spline quasi-interpolant on a uniform mesh,
* ridge decompositions of multivariate polynomials,
* explicit network constructions that approximate functionals of measures
  with certified error bounds,
* capacity constants, covering-number bounds and learning-rate schedules,
* a two-stage sampled-data regression pipeline with projected-gradient
  empirical risk minimisation and an error decomposition.
"""

__version__ = "0.1.0"

from .measures import (
    CapacityError,
    DistributionSpec,
    EmpiricalMeasure,
    TransportPlan,
    Witness,
    kr_lower_bound,
    optimal_plan,
    sample_measure,
    wasserstein,
)
from .spline import Mesh, SplineCoefficients, diff_operator, quasi_interpolant
from .polyridge import Polynomial, RidgeDecomposition, decompose, n_q, poly_sup_norm
from .network import (
    DistributionNet,
    HypothesisSpaceSpec,
    forward,
    forward_batch,
    in_hypothesis_space,
    lipschitz_certificate,
    param_norms,
    plain_forward,
    project_M,
    uniform_bound,
)
from .scalarfns import SCALAR_FUNCTIONS, ScalarFunction, scalar_function
from .construct import (
    TARGETS,
    BoundCertificate,
    ConstructionReport,
    TargetFunctional,
    build_for_target,
    build_laplace,
    build_poly,
    build_radial,
    build_ridge,
    certify_bounds,
    get_target,
    measure_suite,
    reports_to_csv,
)
from .theory import (
    CoveringBound,
    RateSchedule,
    TheoryConstants,
    covering_bound,
    h2_covering_bound,
    oracle_rhs,
    rate_schedule,
)
from .regression import (
    ErrorDecomposition,
    MetaDistribution,
    TrainResult,
    TwoStageDataset,
    decompose_error,
    empirical_error,
    erm_train,
    generate,
    load_dataset,
    save_dataset,
)

__all__ = [
    "CapacityError",
    "DistributionSpec",
    "EmpiricalMeasure",
    "TransportPlan",
    "Witness",
    "kr_lower_bound",
    "optimal_plan",
    "sample_measure",
    "wasserstein",
    "Mesh",
    "SplineCoefficients",
    "diff_operator",
    "quasi_interpolant",
    "Polynomial",
    "RidgeDecomposition",
    "decompose",
    "n_q",
    "poly_sup_norm",
    "DistributionNet",
    "HypothesisSpaceSpec",
    "forward",
    "forward_batch",
    "plain_forward",
    "param_norms",
    "in_hypothesis_space",
    "project_M",
    "lipschitz_certificate",
    "uniform_bound",
    "SCALAR_FUNCTIONS",
    "ScalarFunction",
    "scalar_function",
    "TARGETS",
    "TargetFunctional",
    "BoundCertificate",
    "ConstructionReport",
    "build_ridge",
    "build_laplace",
    "build_poly",
    "build_radial",
    "build_for_target",
    "certify_bounds",
    "get_target",
    "measure_suite",
    "reports_to_csv",
    "TheoryConstants",
    "CoveringBound",
    "RateSchedule",
    "covering_bound",
    "h2_covering_bound",
    "oracle_rhs",
    "rate_schedule",
    "MetaDistribution",
    "TwoStageDataset",
    "TrainResult",
    "ErrorDecomposition",
    "generate",
    "save_dataset",
    "load_dataset",
    "erm_train",
    "empirical_error",
    "decompose_error",
]
