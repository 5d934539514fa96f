"""Relative Cayley graphs of finite groups.

Construction, exact invariants, theorem-as-predicate evaluation, and an
audit harness that compares predictions against brute-force oracles.
"""
from __future__ import annotations

from .audit import (
    ALL_CHECKS,
    AUDITED_CHECKS,
    DEFAULT_CATALOG,
    AuditRecord,
    AuditReport,
    Limits,
    MismatchEntry,
    catalog_up_to,
    run_audit,
    shrink_counterexample,
)
from .errors import (
    CapacityError,
    ConnectionSetError,
    GroupMismatchError,
    GroupSpecError,
    ImproperSubgroupError,
    InternalConsistencyError,
    PreconditionError,
    RelCayError,
    UnknownCheckError,
)
from .graphs import (
    ConnectionSet,
    InducedCayleyGraph,
    RelCayGraph,
    build_relcay,
    connection_set_count,
    enumerate_connection_sets,
    inverse_orbits,
)
from .group_core import (
    ElementSet,
    GroupTable,
    Subgroup,
    coset_partition,
    default_max_order,
    element_order,
    enumerate_subgroups,
    generated_subgroup,
    make_group,
    product_set,
)
from .oracles import (
    InvariantReport,
    StructureFlags,
    chromatic_number,
    diameter_components,
    edge_chromatic_number,
    invariant_report,
    max_clique,
    max_independent_set,
    max_matching,
    min_dominating_set,
    min_edge_cover,
    min_vertex_cover,
    structure_flags,
)
from .theorems import (
    AlphaBetaPredictions,
    ChromaticPredictions,
    CliquePredictions,
    ConnectivityPredictions,
    EdgeColoring,
    ForbiddenPrediction,
    PredictionSet,
    ValencyPredictions,
    build_class_one_coloring,
    is_aba_subgroup,
    predict_alpha_beta,
    predict_all,
    predict_chromatic,
    predict_clique,
    predict_connectivity,
    predict_forbidden,
    predict_valencies,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # groups
    "GroupTable",
    "ElementSet",
    "Subgroup",
    "make_group",
    "default_max_order",
    "enumerate_subgroups",
    "generated_subgroup",
    "coset_partition",
    "product_set",
    "element_order",
    # graphs
    "ConnectionSet",
    "RelCayGraph",
    "InducedCayleyGraph",
    "build_relcay",
    "inverse_orbits",
    "enumerate_connection_sets",
    "connection_set_count",
    # oracles
    "InvariantReport",
    "StructureFlags",
    "invariant_report",
    "structure_flags",
    "max_clique",
    "max_independent_set",
    "max_matching",
    "min_dominating_set",
    "min_vertex_cover",
    "min_edge_cover",
    "chromatic_number",
    "edge_chromatic_number",
    "diameter_components",
    # theorems
    "PredictionSet",
    "ValencyPredictions",
    "ConnectivityPredictions",
    "CliquePredictions",
    "AlphaBetaPredictions",
    "ChromaticPredictions",
    "ForbiddenPrediction",
    "EdgeColoring",
    "predict_all",
    "predict_valencies",
    "predict_connectivity",
    "predict_clique",
    "predict_alpha_beta",
    "predict_chromatic",
    "predict_forbidden",
    "build_class_one_coloring",
    "is_aba_subgroup",
    # audit
    "Limits",
    "AuditRecord",
    "MismatchEntry",
    "AuditReport",
    "ALL_CHECKS",
    "AUDITED_CHECKS",
    "DEFAULT_CATALOG",
    "catalog_up_to",
    "run_audit",
    "shrink_counterexample",
    # errors
    "RelCayError",
    "GroupSpecError",
    "CapacityError",
    "GroupMismatchError",
    "ImproperSubgroupError",
    "ConnectionSetError",
    "PreconditionError",
    "InternalConsistencyError",
    "UnknownCheckError",
]
