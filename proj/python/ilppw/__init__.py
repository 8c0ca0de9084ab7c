"""Integer linear program feasibility via solution graphs and the ILP automaton."""

from ._ilppw import (
    BudgetExceeded,
    IlpError,
    Instance,
    OverflowError,
    ParseError,
    accepts,
    check_feasible,
    decompose,
    emit_boolean_program,
    enumerate_solutions,
    graph_dot,
    run_boolean_program,
    schedule,
    schedule_word,
    validate_dot,
    verify,
)

__all__ = [
    "BudgetExceeded",
    "IlpError",
    "Instance",
    "OverflowError",
    "ParseError",
    "accepts",
    "check_feasible",
    "decompose",
    "emit_boolean_program",
    "enumerate_solutions",
    "graph_dot",
    "run_boolean_program",
    "schedule",
    "schedule_word",
    "validate_dot",
    "verify",
]
