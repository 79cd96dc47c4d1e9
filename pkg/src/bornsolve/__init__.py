"""Exact finite Born expansions for multilevel systems with acyclic transition graphs.

When the transition graph of the transfer operator T = G0(E) V has no
directed cycle, T is nilpotent and the Neumann series of (I - T)^(-1)
closes after depth + 1 terms, where depth is the longest directed-path
length of the graph.  Scattered states, resolvents and transition
matrices then come out exactly, with no smallness condition on T; for
operators that are not nilpotent, the truncation tools report and bound
the residual instead.
"""

from .bench import BenchResult, random_dag_operator, run_benchmark
from .errors import (
    BornsolveError,
    DimensionError,
    NotNilpotentError,
    ResonanceError,
    SingularError,
    SpecFormatError,
    TooManyPathsError,
    TopologyError,
    UnboundedEnumerationError,
)
from .graph import (
    AcyclicityReport,
    TransitionGraph,
    WeightedPath,
    analyze_acyclicity,
    enumerate_paths,
    extract_graph,
    path_sum_entry,
)
from .operators import (
    NORM_KINDS,
    ZERO_THRESHOLD,
    SparseOperator,
    as_state_vector,
    basis_state,
    build_transfer_operator,
    free_resolvent_diagonal,
    matmul,
    matvec,
    operator_norm,
    power,
    vector_norm,
)
from .scenarios import (
    DARK_THRESHOLD,
    InterferenceReport,
    build_cascade,
    build_diamond,
    build_double_diamond,
    classify_interference,
)
from .solver import (
    AcyclicSystem,
    BornExpansion,
    born_approximation,
    det_check,
    det_i_minus_t,
    direct_solve_oracle,
    finite_neumann_inverse,
    full_resolvent,
    make_system,
    solve_exact,
    t_matrix,
)
from .specfile import (
    CouplingRecord,
    SystemSpec,
    load_spec,
    parse_spec,
    serialize_spec,
    spec_to_operator,
)
from .truncation import (
    QUASI_NILPOTENT_DEFECT,
    TruncationReport,
    exact_remainder,
    nilpotency_defect,
    remainder_bound,
)

__version__ = "0.1.0"

__all__ = [
    "AcyclicityReport",
    "AcyclicSystem",
    "BenchResult",
    "BornExpansion",
    "BornsolveError",
    "CouplingRecord",
    "DARK_THRESHOLD",
    "DimensionError",
    "InterferenceReport",
    "NORM_KINDS",
    "NotNilpotentError",
    "QUASI_NILPOTENT_DEFECT",
    "ResonanceError",
    "SingularError",
    "SparseOperator",
    "SpecFormatError",
    "SystemSpec",
    "TooManyPathsError",
    "TopologyError",
    "TransitionGraph",
    "TruncationReport",
    "UnboundedEnumerationError",
    "WeightedPath",
    "ZERO_THRESHOLD",
    "analyze_acyclicity",
    "as_state_vector",
    "basis_state",
    "born_approximation",
    "build_cascade",
    "build_diamond",
    "build_double_diamond",
    "build_transfer_operator",
    "classify_interference",
    "det_check",
    "det_i_minus_t",
    "direct_solve_oracle",
    "enumerate_paths",
    "exact_remainder",
    "extract_graph",
    "finite_neumann_inverse",
    "free_resolvent_diagonal",
    "full_resolvent",
    "load_spec",
    "make_system",
    "matmul",
    "matvec",
    "nilpotency_defect",
    "operator_norm",
    "parse_spec",
    "path_sum_entry",
    "power",
    "random_dag_operator",
    "remainder_bound",
    "run_benchmark",
    "serialize_spec",
    "solve_exact",
    "spec_to_operator",
    "t_matrix",
    "vector_norm",
]
