"""Variance-based uncertainty bounds for two, three and four observables."""

from .bounds import (
    BoundKind,
    BoundReport,
    evaluate,
    quad_sum,
    robertson,
    rss3,
    triple_product,
    triple_sum,
)
from .kernels import BACKEND
from .matcore import (
    DimensionMismatchError,
    InvariantError,
    Observable,
    PAULI_1,
    PAULI_2,
    PAULI_3,
    State,
    basis_state,
    center,
    commutator,
    expectation,
    random_observable,
    random_state,
    tensor,
    variance,
)
from .roperator import (
    AncillaParams,
    BlockOperator,
    ancilla_state,
    build_r3,
    build_r4,
    gram,
    optimal_ancilla,
    pauli_decomposition_check,
    structural_check,
    trace_functional,
)
from .saturation import (
    SearchConfig,
    SearchResult,
    TightInstance,
    reduce_h4_identity,
    robertson_via_r,
    scaling_trick,
    search_min_ratio,
    tight3_pauli,
    tight4_family,
)

__version__ = "0.1.0"
