"""Python bindings for the reoptbench C++ core."""

from ._core import (
    Error,
    Instance,
    Row,
    Sense,
    SolveOutcome,
    SolveStatus,
    Variable,
    VarKind,
    bit_equal,
    changed_components,
    check_feasibility,
    enumerate_solve,
    final_scores,
    gap,
    generate_series,
    inf,
    instance_score,
    instance_weight,
    load_run,
    objective_value,
    parse_mps,
    persist_run,
    rank_instance,
    read_mps_file,
    read_solution_file,
    reltime,
    run_series,
    score_run,
    similarity,
    validate,
    write_mps,
    write_mps_file,
    write_series,
)

__all__ = [name for name in dir() if not name.startswith("_")]
