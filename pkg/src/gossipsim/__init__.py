"""Deterministic simulator for permutation-driven synchronous gossip.

``n + 1`` processors must each broadcast a private value to all others
over a crossbar, in lockstep, with blocking sends and receives.  Every
processor follows the same program shape — receive ``i`` messages, send
to everyone else in the order of a per-processor permutation, receive
the rest — and the choice of permutation family swings the total run
time between quadratic and linear in the system size.  This package
simulates such runs exactly, extracts their statistics, and validates
the simulation against closed-form results and golden run tables.
"""

from .engine import (
    Action,
    ActionKind,
    DeadlockError,
    GossipError,
    RunStats,
    RunTable,
    RunawayError,
    SimConfig,
    measure,
    simulate,
    simulate_optimized,
    simulate_sessions,
    verify_run,
)
from .fsa import (
    FsaProgram,
    Permutation,
    ProcessorId,
    StateKind,
    StateTemplate,
    compose_fsa,
    identity_permutation,
    parse_permutations,
    permutation_set,
    pipelined_permutation,
    random_permutation,
    validate_permutation,
)
from .metrics import (
    IdentityExpectations,
    Metrics,
    PipelinedExpectations,
    UtilizationString,
    compute_metrics,
    four_slot_columns,
    identity_expectations,
    identity_four_slot_count,
    identity_run_length,
    is_palindrome,
    pipelined_expectations,
    pipelined_run_length,
    session_completions,
    steady_steps_per_gossip,
    steady_window,
    utilization_string,
    window_efficiency,
)
from .validate import (
    SweepRecord,
    check_propositions,
    conjecture_scan,
    golden_tables,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "Action",
    "ActionKind",
    "DeadlockError",
    "FsaProgram",
    "GossipError",
    "IdentityExpectations",
    "Metrics",
    "Permutation",
    "PipelinedExpectations",
    "ProcessorId",
    "RunStats",
    "RunTable",
    "RunawayError",
    "SimConfig",
    "StateKind",
    "StateTemplate",
    "SweepRecord",
    "UtilizationString",
    "check_propositions",
    "compose_fsa",
    "compute_metrics",
    "conjecture_scan",
    "four_slot_columns",
    "golden_tables",
    "identity_expectations",
    "identity_four_slot_count",
    "identity_permutation",
    "identity_run_length",
    "is_palindrome",
    "measure",
    "parse_permutations",
    "permutation_set",
    "pipelined_expectations",
    "pipelined_permutation",
    "pipelined_run_length",
    "random_permutation",
    "session_completions",
    "simulate",
    "simulate_optimized",
    "simulate_sessions",
    "steady_steps_per_gossip",
    "steady_window",
    "sweep",
    "utilization_string",
    "validate_permutation",
    "verify_run",
    "window_efficiency",
]
