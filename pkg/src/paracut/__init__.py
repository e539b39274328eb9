"""paracut: exact ratio optimization on graphs via warm-started parametric cuts.

Certified densest-subgraph maximization and seeded-conductance
minimization, a reusable warm-startable min-cut solver, full breakpoint
envelopes, and greedy peeling baselines.
"""

from .errors import (
    CapacityOverflowError,
    ContractViolationError,
    DegenerateInputError,
    GraphFormatError,
    ValidationError,
)
from .graph import (
    InputGraph,
    NodeSubset,
    boundary_weight,
    conductance_star_value,
    density,
    internal_weight,
    load_edge_list,
    load_node_weights,
    subset_node_weight,
)
from .ipc import (
    RatioResult,
    TraceStep,
    brute_force_best_ratio,
    ipc_maximize,
    ipc_minimize,
    solve_lambda_problem,
    verify_certificate,
    write_trace_csv,
)
from .mincut import (
    MAXIMAL,
    MINIMAL,
    CutSolution,
    SolverState,
    continue_solve,
    maxflow_value,
    solve_mincut,
)
from .network import (
    InstantiatedNetwork,
    ParametricNetwork,
    build_conductance_network,
    build_dsp_network,
    build_s_excess_network,
    instantiate,
    to_dimacs,
)
from .parametric import (
    Breakpoint,
    Envelope,
    fully_parametric,
    leftmost_breakpoint,
    simple_parametric,
    write_envelope_csv,
)
from .peeling import PeelTrace, charikar_greedy, greedy_pp, peel_once

__version__ = "0.1.0"

__all__ = [
    "Breakpoint",
    "CapacityOverflowError",
    "ContractViolationError",
    "CutSolution",
    "DegenerateInputError",
    "Envelope",
    "GraphFormatError",
    "InputGraph",
    "InstantiatedNetwork",
    "MAXIMAL",
    "MINIMAL",
    "NodeSubset",
    "ParametricNetwork",
    "PeelTrace",
    "RatioResult",
    "SolverState",
    "TraceStep",
    "ValidationError",
    "boundary_weight",
    "brute_force_best_ratio",
    "build_conductance_network",
    "build_dsp_network",
    "build_s_excess_network",
    "charikar_greedy",
    "conductance_star_value",
    "continue_solve",
    "density",
    "fully_parametric",
    "greedy_pp",
    "instantiate",
    "internal_weight",
    "ipc_maximize",
    "ipc_minimize",
    "leftmost_breakpoint",
    "load_edge_list",
    "load_node_weights",
    "maxflow_value",
    "peel_once",
    "simple_parametric",
    "solve_lambda_problem",
    "solve_mincut",
    "subset_node_weight",
    "to_dimacs",
    "verify_certificate",
    "write_envelope_csv",
    "write_trace_csv",
]
