"""s,t minimum cut with retained state for monotone re-solves.

The solver keeps a preflow and node labels between calls.  After a
terminal-capacity update that moves monotonically in the sweep direction
declared at creation, :func:`continue_solve` re-solves from the retained
state; labels never decrease across such a sweep, results match cold
solves exactly, and source sets are nested.

Internally the solver always works in the orientation where its
source-adjacent capacities grow along the sweep; networks whose declared
direction disagrees with the sweep are held reversed (arcs flipped,
terminals swapped), and extracted source sets are complemented back.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from . import _kernels
from .errors import CapacityOverflowError, ContractViolationError
from .graph import NodeSubset
from .network import INT_BUDGET, SOURCE_DECREASING, InstantiatedNetwork

MAXIMAL = "maximal"
MINIMAL = "minimal"


@dataclass
class CutSolution:
    """A minimum s,t cut over the network's internal nodes."""

    source_set: NodeSubset
    cut_value: int
    lam: Fraction
    kind: str  # MAXIMAL or MINIMAL

    @property
    def size(self) -> int:
        return len(self.source_set)


class _Topology:
    """Immutable solver-side arc structure, cached per network and orientation."""

    def __init__(self, parent, reversed_: bool):
        n = parent.n
        N = n + 2
        s, t = n, n + 1
        tails = parent.arc_tail
        heads = parent.arc_head
        if reversed_:
            tails, heads = heads, tails

        na = tails.size
        total_arcs = 2 * na + 4 * n
        arc_tail = np.empty(total_arcs, dtype=np.int64)
        arc_head = np.empty(total_arcs, dtype=np.int64)
        # internal pairs at 2k / 2k+1
        arc_tail[0 : 2 * na : 2] = tails
        arc_head[0 : 2 * na : 2] = heads
        arc_tail[1 : 2 * na : 2] = heads
        arc_head[1 : 2 * na : 2] = tails
        # per node: source pair then sink pair
        ids = np.arange(n, dtype=np.int64)
        self.src_fwd = 2 * na + 4 * ids
        self.snk_fwd = 2 * na + 4 * ids + 2
        arc_tail[self.src_fwd] = s
        arc_head[self.src_fwd] = ids
        arc_tail[self.src_fwd + 1] = ids
        arc_head[self.src_fwd + 1] = s
        arc_tail[self.snk_fwd] = ids
        arc_head[self.snk_fwd] = t
        arc_tail[self.snk_fwd + 1] = t
        arc_head[self.snk_fwd + 1] = ids

        self.adj_arcs = np.ascontiguousarray(np.argsort(arc_tail, kind="stable"))
        counts = np.bincount(arc_tail, minlength=N)
        self.adj_start = np.zeros(N + 1, dtype=np.int64)
        np.cumsum(counts, out=self.adj_start[1:])
        self.arc_head = arc_head
        self.num_internal = na
        self.total_arcs = total_arcs


def _topology(parent, reversed_: bool) -> _Topology:
    cache = getattr(parent, "_solver_topology", None)
    if cache is None:
        cache = {}
        parent._solver_topology = cache
    if reversed_ not in cache:
        cache[reversed_] = _Topology(parent, reversed_)
    return cache[reversed_]


class SolverState:
    """Retained per-run solver structure (single owner, not shareable)."""

    def __init__(self, inst: InstantiatedNetwork, sweep: str = "up"):
        if sweep not in ("up", "down"):
            raise ValueError("sweep must be 'up' or 'down'")
        parent = inst.parent
        self.network = parent
        self.sweep = sweep
        self.reversed = (parent.direction == SOURCE_DECREASING) == (sweep == "up")
        self.n = parent.n
        self.N = parent.n + 2
        self.s = parent.n
        self.t = parent.n + 1
        self.solve_count = 0

        topo = _topology(parent, self.reversed)
        self.adj_start = topo.adj_start
        self.adj_arcs = topo.adj_arcs
        self.arc_head = topo.arc_head
        self.src_fwd = topo.src_fwd
        self.snk_fwd = topo.snk_fwd
        self._internal_cap_unscaled = int(parent.arc_cap.sum())

        self.res = np.zeros(topo.total_arcs, dtype=np.int64)
        self.res[0 : 2 * topo.num_internal : 2] = inst.arc_cap
        self.excess = np.zeros(self.N, dtype=np.int64)
        self.dist = np.zeros(self.N, dtype=np.int64)
        self.cur = np.zeros(self.N, dtype=np.int64)
        self._bhead = np.zeros(self.N + 1, dtype=np.int64)
        self._bnext = np.zeros(self.N, dtype=np.int64)
        self._lab_head = np.zeros(self.N + 1, dtype=np.int64)
        self._lab_next = np.zeros(self.N, dtype=np.int64)
        self._lab_prev = np.zeros(self.N, dtype=np.int64)

        self.lam = inst.lam
        self.scale = inst.scale
        self.report_scale = inst.scale
        self._src_cap = np.zeros(self.n, dtype=np.int64)
        self._snk_cap = np.zeros(self.n, dtype=np.int64)
        self._install_terminal_caps(
            self._solver_source_caps(inst).copy(), self._solver_sink_caps(inst).copy()
        )
        _kernels.global_relabel(
            self.adj_start, self.adj_arcs, self.arc_head, self.res,
            self.dist, self.N, self.s, self.t,
        )
        self._run()

    # -- internals ---------------------------------------------------------

    def _solver_source_caps(self, inst):
        return inst.snk_cap if self.reversed else inst.src_cap

    def _solver_sink_caps(self, inst):
        return inst.src_cap if self.reversed else inst.snk_cap

    def _install_terminal_caps(self, new_src, new_snk):
        """Saturate source arcs and clamp sink flows to the new capacities."""
        sf = self.src_fwd
        f_old = self.res[sf + 1]
        delta = new_src - f_old
        self.res[sf] = 0
        self.res[sf + 1] = new_src
        self.excess[: self.n] += delta
        self.excess[self.s] -= int(delta.sum())

        tf = self.snk_fwd
        f_old = self.res[tf + 1]
        pulled = np.maximum(f_old - new_snk, 0)
        self.res[tf + 1] = f_old - pulled
        self.res[tf] = new_snk - (f_old - pulled)
        self.excess[: self.n] += pulled
        self.excess[self.t] -= int(pulled.sum())

        self._src_cap = new_src
        self._snk_cap = new_snk

    def _run(self):
        _kernels.discharge_all(
            self.adj_start, self.adj_arcs, self.arc_head, self.res,
            self.dist, self.excess, self.cur, self._bhead, self._bnext,
            self._lab_head, self._lab_next, self._lab_prev,
            self.N, self.s, self.t,
        )
        self.solve_count += 1

    def _rescale(self, mult: int):
        if mult == 1:
            return
        total = self._internal_cap_unscaled * self.scale
        total += int(self._src_cap.sum()) + int(self._snk_cap.sum())
        if total * mult >= INT_BUDGET:
            raise CapacityOverflowError(
                "warm-start rescale exceeds the 62-bit solver budget; "
                "re-solve cold at the new parameter value"
            )
        self.res *= mult
        self.excess *= mult
        self._src_cap = self._src_cap * mult
        self._snk_cap = self._snk_cap * mult
        self.scale *= mult

    def update(self, inst: InstantiatedNetwork):
        """Monotone terminal-capacity update followed by a re-solve."""
        if inst.parent is not self.network:
            raise ContractViolationError(
                "continuation requires an instantiation of the same network"
            )
        if (inst.lam < self.lam) if self.sweep == "up" else (inst.lam > self.lam):
            raise ContractViolationError(
                f"sweep direction is '{self.sweep}' but lambda moved from "
                f"{self.lam} to {inst.lam}"
            )
        common = lcm(self.scale, inst.scale)
        self._rescale(common // self.scale)
        mult = common // inst.scale
        new_src = self._solver_source_caps(inst) * mult
        new_snk = self._solver_sink_caps(inst) * mult
        if mult > 1 and int(new_src.sum()) + int(new_snk.sum()) >= INT_BUDGET:
            raise CapacityOverflowError(
                "warm-start rescale exceeds the 62-bit solver budget; "
                "re-solve cold at the new parameter value"
            )
        if np.any(new_src < self._src_cap) or np.any(new_snk > self._snk_cap):
            raise ContractViolationError(
                "terminal capacities must move monotonically in the sweep direction"
            )
        self._install_terminal_caps(new_src, new_snk)
        self.lam = inst.lam
        self.report_scale = inst.scale
        self._run()
        return self

    # -- extraction ----------------------------------------------------------

    def _solver_min_flags(self):
        reach = _kernels.reach_from_sources(
            self.adj_start, self.adj_arcs, self.arc_head, self.res,
            self.excess, self.s, self.t, self.N,
        )
        return reach[: self.n].astype(bool)

    def _solver_max_flags(self):
        reach = _kernels.reach_to_sink(
            self.adj_start, self.adj_arcs, self.arc_head, self.res, self.t, self.N
        )
        return ~reach[: self.n].astype(bool)

    def source_set(self, kind: str = MAXIMAL) -> NodeSubset:
        """Extremal min-cut source set in the network's own orientation."""
        if kind == MAXIMAL:
            flags = ~self._solver_min_flags() if self.reversed else self._solver_max_flags()
        elif kind == MINIMAL:
            flags = ~self._solver_max_flags() if self.reversed else self._solver_min_flags()
        else:
            raise ValueError("kind must be 'maximal' or 'minimal'")
        return NodeSubset.from_bool_array(flags)

    def cut_value(self, scale: int | None = None) -> int:
        """Min-cut value, reported at ``scale`` (default: the scale of the
        most recently installed instantiation)."""
        if scale is None:
            scale = self.report_scale
        value = int(self.excess[self.t])
        factor, rem = divmod(self.scale, scale)
        if rem or value % factor:
            raise ValueError(f"cut value is not representable at scale {scale}")
        return value // factor

    def solution(self, kind: str = MAXIMAL) -> CutSolution:
        return CutSolution(self.source_set(kind), self.cut_value(), self.lam, kind)


def solve_mincut(
    inst: InstantiatedNetwork, sweep: str = "up", kind: str = MAXIMAL
) -> tuple[CutSolution, SolverState]:
    """Cold minimum s,t cut.

    Returns the solution (maximal source set unless ``kind='minimal'``) and
    the state usable for monotone continuation in the ``sweep`` direction.
    """
    state = SolverState(inst, sweep)
    return state.solution(kind), state


def continue_solve(
    state: SolverState, inst: InstantiatedNetwork, kind: str = MAXIMAL
) -> tuple[CutSolution, SolverState]:
    """Re-solve after a monotone terminal-capacity update.

    The result is identical to a cold solve of ``inst``; across a sweep the
    returned source sets are nested.  Raises
    :class:`~paracut.errors.ContractViolationError` on a non-monotone update
    and :class:`~paracut.errors.CapacityOverflowError` when the exact
    common-scale representation would leave the integer budget (callers may
    then fall back to a cold solve).
    """
    state.update(inst)
    return state.solution(kind), state


def maxflow_value(state: SolverState) -> int:
    """Value of the maximum flow (== min-cut value) at the current λ scale.

    Flow recovery is lazy: the retained assignment is a maximum preflow
    whose value into t already equals the min-cut capacity, which is all
    the ratio solvers need.
    """
    return state.cut_value()
