"""Exact computations for an omega-categorical Hrushovski construction on graphs.

Graphs, predimension and closure, free amalgams and eventual closures,
independence-theorem diagrams, and the measure equations whose elimination
forces the edge measure to zero.
"""
from .amalgam import (
    AmalgamDiagram,
    EventualClosure,
    check_eventual_closure,
    enumerate_zero_extensions,
    eventual_closures,
    free_amalgam,
    has_no_proper_eventual_closure,
    one_point_extensions,
    verify_free_amalgamation_property,
)
from .errors import (
    GraphFormatError,
    NonTriangularSystemError,
    PreconditionError,
    UnsupportedConfigError,
    WindowError,
    ZeroDenominatorError,
)
from .graph import (
    CanonicalForm,
    Graph,
    are_isomorphic,
    canonical_form,
    count_automorphisms_fixing,
    distance,
    induced_subgraph,
    parse_graph,
)
from .itd import (
    ITDiagram,
    check_itd_closure,
    enumerate_proper_itds,
    sitd_growth_check,
    validate_itd,
    validate_proper_itd,
)
from .measure import (
    MeasureEquation,
    MeasurePolynomial,
    MeasureVariable,
    NonMeasurabilityCertificate,
    TypedGraph,
    derive_amalgam_equation,
    derive_path_vertex_equation,
    derive_triangle_equation,
    prove_nonmeasurability,
    reduce_system,
    type_measure_expression,
)
from .predim import (
    GoodFunction,
    Tail,
    closure,
    compare_f,
    dimension,
    in_class,
    is_d_closed,
    is_self_sufficient,
    max_size_at_predim,
    predimension,
)

__version__ = "0.1.0"
