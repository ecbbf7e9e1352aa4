"""Linear transports along paths.

Numerical engine for linear transports in vector bundle charts: transport
integration along piecewise-smooth paths, torsion and curvature operators
with their component formulas, small-loop holonomy, Bianchi-type identities,
and a two-sided flatness test with flat-frame construction.  The compiled
core also drives the JSON-configured experiment runner used by the ``geo``
command line tool.
"""

from ._core import (
    BianchiFirstSides,
    CoefficientProvider,
    ConfigError,
    DoubleTransportDefect,
    Family,
    FlatnessVerdict,
    FrameField,
    FrameMap,
    HolonomyEstimate,
    Interval,
    ModelSetup,
    MultiFamily,
    NotFlatError,
    NumericError,
    OrderFit,
    Path,
    RegionGrid,
    TransportMatrix,
    check_antisymmetry,
    check_bianchi_first,
    check_bianchi_second,
    check_four_point,
    coefficients_from_transport,
    construct_flat_frame,
    convergence_order,
    coordinate_family,
    curvature_matrix,
    curvature_matrix_analytic,
    default_steps,
    double_transport_defect,
    expansion_check,
    experiment_names,
    extract_col_path,
    extract_pair_family,
    extract_row_path,
    flatness_verdict,
    holonomy_curvature_estimate,
    loop_holonomy,
    make_frame,
    make_frame_map_transport,
    make_model,
    model_names,
    path_independence_defect,
    pentagon_defect,
    route_catalogue,
    run_config,
    run_config_csv,
    torsion_components,
    torsion_operator,
    transport_from_frame_map,
    transport_matrix,
    transport_vector,
)

__version__ = "0.1.0"

__all__ = [
    "BianchiFirstSides",
    "CoefficientProvider",
    "ConfigError",
    "DoubleTransportDefect",
    "Family",
    "FlatnessVerdict",
    "FrameField",
    "FrameMap",
    "HolonomyEstimate",
    "Interval",
    "ModelSetup",
    "MultiFamily",
    "NotFlatError",
    "NumericError",
    "OrderFit",
    "Path",
    "RegionGrid",
    "TransportMatrix",
    "check_antisymmetry",
    "check_bianchi_first",
    "check_bianchi_second",
    "check_four_point",
    "coefficients_from_transport",
    "construct_flat_frame",
    "convergence_order",
    "coordinate_family",
    "curvature_matrix",
    "curvature_matrix_analytic",
    "default_steps",
    "double_transport_defect",
    "expansion_check",
    "experiment_names",
    "extract_col_path",
    "extract_pair_family",
    "extract_row_path",
    "flatness_verdict",
    "holonomy_curvature_estimate",
    "loop_holonomy",
    "make_frame",
    "make_frame_map_transport",
    "make_model",
    "model_names",
    "path_independence_defect",
    "pentagon_defect",
    "route_catalogue",
    "run_config",
    "run_config_csv",
    "torsion_components",
    "torsion_operator",
    "transport_from_frame_map",
    "transport_matrix",
    "transport_vector",
]
