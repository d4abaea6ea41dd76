"""Normal linear realizations of block codes over prime fields.

Build realizations ("codes on graphs"), compute their behaviors and duals,
test trim/proper and observability/controllability, and reduce them locally.
"""

from .analysis import (
    AnalysisReport,
    SupportSubgraph,
    TailBitingPartition,
    all_proper,
    all_trim,
    analyze,
    controllability_defect_via_dual,
    cycle_order,
    is_branch_trim,
    is_controllable,
    is_observable,
    is_proper,
    is_state_trim,
    is_trim,
    dimension_count_check,
    repetition_support_realization,
    starts_and_stops,
    state_ports,
    support_pattern,
    tail_biting_partition,
    unobservable_space,
    unobservable_support,
)
from .builders import (
    SpannedGenerator,
    duality_check_generator_pc,
    generator_realization,
    parity_check_realization,
    product_trellis,
)
from .code import BlockStructure, LinearCode, cross_section, dual_code, project
from .duality import b_perp, dualize
from .errors import CodeGraphError, DocumentError, InvalidRealizationError, PreconditionError
from .io import dumps_canonical, export_dot, from_document, parse, serialize, to_document
from .linalg import (
    MatrixGF,
    PrimeField,
    complete_basis,
    kernel_basis,
    orthogonal_complement,
    rank,
    row_space_equal,
    rref,
)
from .realization import (
    Behavior,
    ConstraintCode,
    Realization,
    StateVar,
    SymbolVar,
    build_realization,
    drop_trivial_states,
    full_behavior,
    graph_topology,
    normalize,
    realized_code,
    validate,
)
from .reduction import (
    ReductionStep,
    controllability_merge,
    merge_at,
    minimize_cycle_free,
    observability_trim,
    reduce_trim_proper,
    state_profile,
    state_space_oracle,
    trim_at,
)

__version__ = "0.1.0"
