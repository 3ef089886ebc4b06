"""Two-setting steering quantification for two-qubit states.

Public surface: state construction and validation (qstate), the steering
functional and its measurement map (steer_functional), grid+refine global
optimization (optimizer), closed forms for X-states and named families
(analytic), CHSH and the steering/nonlocality region (bell_chsh), and
steering radius / ellipsoid geometry (geometry).
"""
from __future__ import annotations

from ._version import __version__
from .analytic import (
    XDerived,
    ZeroStateClass,
    ZeroVerdict,
    classify_zero_state,
    delta_values,
    family_steerability,
    family_steering_result,
    steerability_x_analytic,
    x_derived,
)
from .bell_chsh import (
    RegionSample,
    RegionScanConfig,
    bell_diagonal_steerability,
    chsh_max,
    corollary_bounds,
    bound_saturation_residuals,
    region_scan,
)
from .errors import (
    DegenerateWeight,
    DomainError,
    NonFiniteObjective,
    NotHermitian,
    NotPositive,
    ParamOutOfDomain,
    SharpBiasedDegenerate,
    SteeredStateSingular,
    SteerkitError,
    TraceNotOne,
    UnknownFamily,
    UnphysicalAssemblage,
    ValidationError,
)
from .geometry import (
    EllipsoidResult,
    RadiusResult,
    RadiusSearchPoint,
    hidden_state_bloch,
    steering_ellipsoid,
    steering_radius,
)
from .optimizer import (
    Method,
    OptimizerConfig,
    SteeringResult,
    maximize_steerability,
    minimize_max,
)
from .qstate import (
    CanonicalState,
    DensityMatrix,
    FAMILY_NAMES,
    PauliRepresentation,
    XStateParams,
    canonicalize,
    detect_x_params,
    family_x_params,
    from_pauli,
    load_state_file,
    make_family,
    parse_state_obj,
    swap_parties,
    to_pauli,
    validate_density,
)
from .steer_functional import (
    AssemblageObservable,
    Direction,
    MeasurementDirection,
    SteeringMap,
    assemblage,
    compute_map,
    is_jointly_measurable,
    steering_objective,
    unsharp_f,
)
from .tolerances import DEFAULT, SENTINEL, Tolerances

__all__ = [
    "__version__",
    # qstate
    "DensityMatrix",
    "PauliRepresentation",
    "CanonicalState",
    "XStateParams",
    "FAMILY_NAMES",
    "validate_density",
    "to_pauli",
    "from_pauli",
    "canonicalize",
    "swap_parties",
    "make_family",
    "family_x_params",
    "detect_x_params",
    "parse_state_obj",
    "load_state_file",
    # steering functional
    "Direction",
    "MeasurementDirection",
    "SteeringMap",
    "AssemblageObservable",
    "compute_map",
    "assemblage",
    "unsharp_f",
    "steering_objective",
    "is_jointly_measurable",
    # optimizer
    "OptimizerConfig",
    "Method",
    "SteeringResult",
    "maximize_steerability",
    "minimize_max",
    # analytic
    "XDerived",
    "ZeroVerdict",
    "ZeroStateClass",
    "x_derived",
    "delta_values",
    "steerability_x_analytic",
    "classify_zero_state",
    "family_steerability",
    "family_steering_result",
    # bell / region
    "RegionSample",
    "RegionScanConfig",
    "chsh_max",
    "bell_diagonal_steerability",
    "corollary_bounds",
    "bound_saturation_residuals",
    "region_scan",
    # geometry
    "RadiusSearchPoint",
    "RadiusResult",
    "EllipsoidResult",
    "hidden_state_bloch",
    "steering_radius",
    "steering_ellipsoid",
    # tolerances / errors
    "Tolerances",
    "DEFAULT",
    "SENTINEL",
    "SteerkitError",
    "ValidationError",
    "NotHermitian",
    "TraceNotOne",
    "NotPositive",
    "UnknownFamily",
    "ParamOutOfDomain",
    "SteeredStateSingular",
    "UnphysicalAssemblage",
    "DomainError",
    "SharpBiasedDegenerate",
    "NonFiniteObjective",
    "DegenerateWeight",
]
