"""Incremental ratio optimization over parametric cuts.

The driver starts from the full candidate set, repeatedly solves the
linearized subproblem ``max/min f(S) − λ·g(S)`` at the current ratio λ via
a warm-started min-cut, and moves to the strictly better set it returns.
When no strict improvement exists the current set's ratio is certified
optimal.  Each visited λ is a breakpoint of the full envelope, but only a
handful of them are ever touched.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import CapacityOverflowError, DegenerateInputError, ValidationError
from .graph import (
    InputGraph,
    NodeSubset,
    boundary_weight,
    internal_weight,
    subset_node_weight,
)
from .mincut import MAXIMAL, SolverState, solve_mincut
from .network import (
    SOURCE_DECREASING,
    InstantiatedNetwork,
    ParametricNetwork,
    build_conductance_network,
    build_dsp_network,
    instantiate,
)

MAXIMIZE = "max"
MINIMIZE = "min"

BRUTE_FORCE_NODE_LIMIT = 20


@dataclass
class TraceStep:
    lam: Fraction
    improve: Fraction
    set_size: int


@dataclass
class RatioResult:
    """Outcome of a ratio optimization run."""

    optimal_set: NodeSubset
    ratio: Fraction
    trace: list[TraceStep] = field(default_factory=list)
    certified: bool = False
    wall_time: float = 0.0
    cut_solve_count: int = 0

    @property
    def lambdas_explored(self) -> int:
        return len(self.trace)


def solve_lambda_problem(
    net: ParametricNetwork, lam
) -> tuple[int, NodeSubset]:
    """One cold linearized subproblem at rational λ.

    Returns ``improve`` as an integer at scale ``Q`` (λ = P/Q) along with a
    maximal optimizing set (indices local to the network).  For a
    density-style network this is ``Q · max_S [C(S,S) − λ·q(S)]``; for a
    conductance-style network ``Q · min_S [C(S,S̄) − λ·q(S)]``.  A ratio
    strictly better than λ exists iff improve is positive (max) or negative
    (min).
    """
    inst = instantiate(net, lam)
    sol, state = solve_mincut(inst, sweep="up", kind=MAXIMAL)
    gap = inst.total_source_capacity - sol.cut_value
    if net.direction == SOURCE_DECREASING:
        return gap, sol.source_set
    return -gap, sol.source_set


class _Sweep:
    """Warm-started λ-problem evaluations along one monotone direction."""

    def __init__(self, net: ParametricNetwork, direction: str):
        self.net = net
        self.sweep = direction
        self.state: SolverState | None = None
        self.solve_count = 0

    def improve_at(self, lam: Fraction) -> tuple[int, NodeSubset]:
        """Sense-adjusted improve (scaled by λ's denominator) and its argset."""
        inst = instantiate(self.net, lam)
        if self.state is None:
            _, self.state = solve_mincut(inst, sweep=self.sweep)
        else:
            try:
                self.state.update(inst)
            except CapacityOverflowError:
                # exact common-scale warm start left the integer budget;
                # a cold solve at the new λ is always valid
                _, self.state = solve_mincut(inst, sweep=self.sweep)
        self.solve_count += 1
        gap = inst.total_source_capacity - self.state.cut_value(inst.scale)
        if self.net.direction != SOURCE_DECREASING:
            gap = -gap
        return gap, self.state.source_set(MAXIMAL)


def ipc_maximize(
    graph: InputGraph,
    start_set: NodeSubset | None = None,
    start_lambda=None,
) -> RatioResult:
    """Certified maximum of C(S,S) / q(S) over nonempty subsets.

    Starts from the whole node set at its own density (overridable) and
    walks up the breakpoint sequence; the exact optimal ratio together with
    a maximizing set is returned once no strictly denser set exists.
    """
    t0 = time.perf_counter()
    if graph.m == 0:
        raise DegenerateInputError("graph has no edges; every density is zero")
    net = build_dsp_network(graph)
    current = start_set if start_set is not None else NodeSubset.full(graph.n)
    if len(current) == 0:
        raise ValidationError("starting set must be nonempty")
    if start_lambda is not None:
        lam = Fraction(start_lambda)
    else:
        lam = Fraction(internal_weight(graph, current), subset_node_weight(graph, current))
    sweep = _Sweep(net, "up")
    trace: list[TraceStep] = []
    for _ in range(graph.n + 2):
        improve_scaled, argset = sweep.improve_at(lam)
        trace.append(
            TraceStep(lam, Fraction(improve_scaled, lam.denominator), len(current))
        )
        if improve_scaled <= 0:
            return RatioResult(
                current, lam, trace, True, time.perf_counter() - t0, sweep.solve_count
            )
        current = argset
        new_lam = Fraction(
            internal_weight(graph, current), subset_node_weight(graph, current)
        )
        if not new_lam > lam:
            raise AssertionError("positive improvement must raise the ratio")
        lam = new_lam
    raise AssertionError("exceeded the n-iteration bound; solver inconsistency")


def ipc_minimize(graph: InputGraph, seed: NodeSubset) -> RatioResult:
    """Certified minimum of C(S,S̄) / q(S) over nonempty S avoiding ``seed``.

    The candidate set V₀ is the seed's complement; iteration starts from V₀
    at its own ratio and walks down until no strictly smaller ratio exists.
    Returned sets are graph-level subsets.
    """
    t0 = time.perf_counter()
    candidates = seed.complement()
    if len(candidates) == 0:
        raise DegenerateInputError("seed set covers the whole graph")
    net = build_conductance_network(graph, seed)
    members = net.node_ids

    def to_graph(local: NodeSubset) -> NodeSubset:
        return NodeSubset.from_indices(graph.n, members[local.indices()])

    current_local = NodeSubset.full(net.n)
    cut0 = boundary_weight(graph, candidates)
    lam = Fraction(cut0, subset_node_weight(graph, candidates))
    sweep = _Sweep(net, "down")
    trace: list[TraceStep] = []
    for _ in range(net.n + 2):
        improve_scaled, argset = sweep.improve_at(lam)
        improve = Fraction(improve_scaled, lam.denominator)
        trace.append(TraceStep(lam, improve, len(current_local)))
        if improve_scaled >= 0:
            return RatioResult(
                to_graph(current_local),
                lam,
                trace,
                True,
                time.perf_counter() - t0,
                sweep.solve_count,
            )
        current_local = argset
        cur_graph = to_graph(current_local)
        new_lam = Fraction(
            boundary_weight(graph, cur_graph), subset_node_weight(graph, cur_graph)
        )
        if not new_lam < lam:
            raise AssertionError("negative improvement must lower the ratio")
        lam = new_lam
    raise AssertionError("exceeded the iteration bound; solver inconsistency")


def verify_certificate(
    graph: InputGraph,
    subset: NodeSubset,
    sense: str,
    seed: NodeSubset | None = None,
) -> bool:
    """Independent optimality check for a claimed optimal set.

    Recomputes the set's ratio, solves a single cold λ-problem at it, and
    confirms no strict improvement exists.  Shares no state with the
    incremental driver.
    """
    if sense == MAXIMIZE:
        lam = Fraction(internal_weight(graph, subset), subset_node_weight(graph, subset))
        improve, _ = solve_lambda_problem(build_dsp_network(graph), lam)
        return improve <= 0
    if sense == MINIMIZE:
        if seed is None:
            raise ValidationError("minimization certificates need the seed set")
        if not subset.issubset(seed.complement()):
            raise ValidationError("subset must avoid the seed set")
        lam = Fraction(boundary_weight(graph, subset), subset_node_weight(graph, subset))
        improve, _ = solve_lambda_problem(build_conductance_network(graph, seed), lam)
        return improve >= 0
    raise ValueError("sense must be 'max' or 'min'")


def brute_force_best_ratio(
    graph: InputGraph, sense: str, seed: NodeSubset | None = None
) -> RatioResult:
    """Exhaustive testing oracle over all admissible nonempty subsets.

    Exact rational comparison throughout; ties break toward the larger set,
    then the lexicographically smallest bitmask.  Guarded to n ≤ 20.
    """
    t0 = time.perf_counter()
    n = graph.n
    if n > BRUTE_FORCE_NODE_LIMIT:
        raise ValidationError(f"brute force is guarded to n <= {BRUTE_FORCE_NODE_LIMIT}")
    if sense not in (MAXIMIZE, MINIMIZE):
        raise ValueError("sense must be 'max' or 'min'")

    masks = np.arange(1, 1 << n, dtype=np.int64)
    inside = np.zeros(masks.size, dtype=np.int64)
    for u, v, w in zip(graph.u, graph.v, graph.w):
        inside += w * ((masks >> u) & (masks >> v) & 1)
    qsum = np.zeros(masks.size, dtype=np.int64)
    dsum = np.zeros(masks.size, dtype=np.int64)
    for i in range(n):
        bit = (masks >> i) & 1
        qsum += graph.q[i] * bit
        dsum += graph.degrees[i] * bit

    if sense == MAXIMIZE:
        num = inside
        better_sign = 1
        admissible = np.ones(masks.size, dtype=bool)
    else:
        if seed is None:
            raise ValidationError("minimization needs a seed set")
        num = dsum - 2 * inside  # C(S, S̄)
        better_sign = -1
        admissible = (masks & seed.mask) == 0
        if not admissible.any():
            raise DegenerateInputError("no admissible subsets outside the seed set")

    best_mask = None
    best = None  # (num, den) of the incumbent
    for mask, a, b in zip(masks[admissible], num[admissible], qsum[admissible]):
        a, b, mask = int(a), int(b), int(mask)
        if best is None:
            best, best_mask = (a, b), mask
            continue
        diff = better_sign * (a * best[1] - best[0] * b)
        if diff > 0:
            best, best_mask = (a, b), mask
        elif diff == 0:
            size_new, size_old = mask.bit_count(), best_mask.bit_count()
            if size_new > size_old or (size_new == size_old and mask < best_mask):
                best, best_mask = (a, b), mask
    subset = NodeSubset(n, best_mask)
    return RatioResult(
        subset,
        Fraction(best[0], best[1]),
        [],
        True,
        time.perf_counter() - t0,
        0,
    )


def write_trace_csv(result: RatioResult, stream, precision: int = 4) -> None:
    """Iteration trace: k, exact and decimal λ, improve value, set size."""
    writer = csv.writer(stream)
    writer.writerow(["k", "lambda_exact", "lambda_decimal", "improve", "set_size"])
    for k, step in enumerate(result.trace):
        writer.writerow(
            [
                k,
                f"{step.lam.numerator}/{step.lam.denominator}",
                f"{float(step.lam):.{precision}f}",
                str(step.improve),
                step.set_size,
            ]
        )
