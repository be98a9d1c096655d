"""Worst-case constant-time decrease-key heap with auditing tools."""

from .audit import (
    AuditReport,
    check_rank_bound,
    check_structure,
    exhaustive_minimal_tree_size,
    minimal_tree_size,
    rank_bound_certificate,
    recompute_phi,
)
from .core_store import Handle
from .errors import (
    AuditFailure,
    ContractError,
    DeadHandleError,
    HeapError,
    KeyOrderError,
    TraceFormatError,
)
from .harness import (
    DiffVerdict,
    OracleHeap,
    TraceOp,
    emit_stats,
    format_trace,
    generate_trace,
    oracle_apply,
    parse_trace,
    run_differential,
)
from .bench import BenchVerdict, dijkstra_bench, generate_graph
from .heap import (
    AMORTIZED,
    AUDIT_BOUNDARY,
    AUDIT_LEVELS,
    AUDIT_OFF,
    AUDIT_PARANOID,
    STRATEGIES,
    WC1,
    WC2,
    Heap,
    Stats,
    make_heap,
    rank_bound,
)

__version__ = "0.1.0"

__all__ = [
    "AMORTIZED",
    "AUDIT_BOUNDARY",
    "AUDIT_LEVELS",
    "AUDIT_OFF",
    "AUDIT_PARANOID",
    "AuditFailure",
    "AuditReport",
    "BenchVerdict",
    "ContractError",
    "DeadHandleError",
    "DiffVerdict",
    "Handle",
    "Heap",
    "HeapError",
    "KeyOrderError",
    "OracleHeap",
    "STRATEGIES",
    "Stats",
    "TraceFormatError",
    "TraceOp",
    "WC1",
    "WC2",
    "check_rank_bound",
    "check_structure",
    "dijkstra_bench",
    "emit_stats",
    "exhaustive_minimal_tree_size",
    "format_trace",
    "generate_graph",
    "generate_trace",
    "make_heap",
    "minimal_tree_size",
    "oracle_apply",
    "parse_trace",
    "rank_bound",
    "rank_bound_certificate",
    "recompute_phi",
    "run_differential",
]
