"""Construction of s,t flow networks whose terminal capacities vary with λ.

Two problem-specific builders are provided (subgraph density maximization
and seeded-conductance minimization), plus the generic node-weighted
"s-excess" form.  Terminal capacities are clipped linear functions
``max(0, a + b·λ)``; instantiating at a rational ``λ = P/Q`` multiplies
every capacity by ``Q`` so the network is purely integral and min-cut
source sets are unchanged.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import CapacityOverflowError, ValidationError
from .graph import InputGraph, NodeSubset

# Scaled capacities, their sums, and flow excesses must stay below this
# (the solver works in int64).
INT_BUDGET = 1 << 62

#: direction tags: how source-side capacities move as λ grows
SOURCE_DECREASING = "source-caps-nonincreasing"
SOURCE_INCREASING = "source-caps-nondecreasing"


class ParametricNetwork:
    """An s,t-network over ``n`` internal nodes with λ-linear terminal arcs.

    ``source_coeffs`` and ``sink_coeffs`` are ``(a, b)`` integer column
    pairs; the terminal capacity of node ``i`` at parameter λ is
    ``max(0, a[i] + b[i]·λ)``.  Internal arc capacities are constant.
    ``node_ids`` maps network node indices back to ids of the originating
    graph (identity for the density network, V₀ members for conductance).
    """

    def __init__(
        self,
        n,
        arc_tail,
        arc_head,
        arc_cap,
        src_a,
        src_b,
        snk_a,
        snk_b,
        direction,
        node_ids=None,
    ):
        self.n = int(n)
        self.arc_tail = np.ascontiguousarray(arc_tail, dtype=np.int64)
        self.arc_head = np.ascontiguousarray(arc_head, dtype=np.int64)
        self.arc_cap = np.ascontiguousarray(arc_cap, dtype=np.int64)
        self.src_a = np.ascontiguousarray(src_a, dtype=np.int64)
        self.src_b = np.ascontiguousarray(src_b, dtype=np.int64)
        self.snk_a = np.ascontiguousarray(snk_a, dtype=np.int64)
        self.snk_b = np.ascontiguousarray(snk_b, dtype=np.int64)
        self.direction = direction
        if node_ids is None:
            node_ids = np.arange(self.n, dtype=np.int64)
        self.node_ids = np.ascontiguousarray(node_ids, dtype=np.int64)
        if np.any(self.arc_cap < 0):
            raise ValidationError("internal arc capacities must be nonnegative")
        if np.any((self.arc_tail < 0) | (self.arc_tail >= self.n)):
            raise ValidationError("arc tail out of range")
        if np.any((self.arc_head < 0) | (self.arc_head >= self.n)):
            raise ValidationError("arc head out of range")

    @property
    def num_arcs(self) -> int:
        """Total arc count including the 2n materialized terminal arcs."""
        return int(self.arc_tail.size) + 2 * self.n

    def source_capacity(self, i: int, lam: Fraction) -> Fraction:
        return max(Fraction(0), self.src_a[i] + self.src_b[i] * Fraction(lam))

    def sink_capacity(self, i: int, lam: Fraction) -> Fraction:
        return max(Fraction(0), self.snk_a[i] + self.snk_b[i] * Fraction(lam))

    def __repr__(self) -> str:
        return (
            f"ParametricNetwork(n={self.n}, arcs={self.num_arcs}, "
            f"direction={self.direction})"
        )


class InstantiatedNetwork:
    """The network at a fixed rational λ = P/Q with integer capacities.

    All capacities carry the uniform factor ``Q``; min-cut source sets are
    invariant under that scaling, and cut values are ``Q`` times their
    unscaled counterparts.
    """

    def __init__(self, parent: ParametricNetwork, lam: Fraction, scale_mult: int = 1):
        lam = Fraction(lam)
        self.parent = parent
        self.lam = lam
        self.scale = lam.denominator * scale_mult
        p = lam.numerator * scale_mult
        q = self.scale

        # Python-int bound check before any int64 arithmetic can wrap.
        bound = 0
        for a_arr, b_arr in ((parent.src_a, parent.src_b), (parent.snk_a, parent.snk_b)):
            amax = int(np.abs(a_arr).max(initial=0))
            bmax = int(np.abs(b_arr).max(initial=0))
            bound = max(bound, q * amax + abs(p) * bmax)
        cap_bound = q * int(parent.arc_cap.max(initial=0))
        if max(bound, cap_bound) >= INT_BUDGET:
            raise CapacityOverflowError(
                "scaled capacities exceed the 62-bit solver budget; "
                "reduce weight magnitudes or pre-scale the input"
            )

        self.src_cap = np.maximum(0, q * parent.src_a + p * parent.src_b)
        self.snk_cap = np.maximum(0, q * parent.snk_a + p * parent.snk_b)
        self.arc_cap = q * parent.arc_cap

        total = (
            int(self.src_cap.sum()) + int(self.snk_cap.sum()) + int(self.arc_cap.sum())
        )
        if total >= INT_BUDGET:
            raise CapacityOverflowError(
                "total scaled capacity exceeds the 62-bit solver budget; "
                "reduce weight magnitudes or pre-scale the input"
            )
        self.total_capacity = total
        self.total_source_capacity = int(self.src_cap.sum())

    @property
    def n(self) -> int:
        return self.parent.n

    def cut_value(self, source_set: NodeSubset) -> int:
        """Scaled capacity of the cut ({s} ∪ S, rest), recomputed from data."""
        sel = source_set.to_bool_array()
        val = int(self.src_cap[~sel].sum()) + int(self.snk_cap[sel].sum())
        crossing = sel[self.parent.arc_tail] & ~sel[self.parent.arc_head]
        return val + int(self.arc_cap[crossing].sum())

    def __repr__(self) -> str:
        return f"InstantiatedNetwork(lambda={self.lam}, scale={self.scale})"


def build_dsp_network(graph: InputGraph) -> ParametricNetwork:
    """Parametric network whose min-cut source set maximizes C(S,S) − λ·q(S).

    One internal arc per edge, directed from the lower to the higher node
    id, capacity w.  Node i carries a source arc ``max(0, d⁺_i − λ·q_i)``
    and a sink arc ``max(0, λ·q_i − d⁺_i)`` where d⁺ is the weighted
    out-degree under that orientation.  Source capacities shrink as λ grows.
    """
    d_plus = graph.out_degrees
    return ParametricNetwork(
        graph.n,
        graph.u,
        graph.v,
        graph.w,
        src_a=d_plus,
        src_b=-graph.q,
        snk_a=-d_plus,
        snk_b=graph.q,
        direction=SOURCE_DECREASING,
    )


def build_conductance_network(graph: InputGraph, seed: NodeSubset) -> ParametricNetwork:
    """Parametric network whose min-cut source set minimizes C(S,S̄) − λ·q(S).

    Seed nodes are shrunk into the sink.  The network spans V₀ (the
    non-seed nodes): each V₀-internal edge becomes two opposite arcs of
    capacity w, node i gets a source arc λ·q_i and a constant sink arc
    totalling i's edge weight into the seed.  Source capacities grow with λ.
    """
    if len(seed) == 0 or len(seed) == graph.n:
        raise ValidationError("seed set must be nonempty and a strict subset")
    candidates = seed.complement()
    keep = candidates.to_bool_array()
    members = np.nonzero(keep)[0]
    newid = np.full(graph.n, -1, dtype=np.int64)
    newid[members] = np.arange(members.size)

    u_in = keep[graph.u]
    v_in = keep[graph.v]
    internal = u_in & v_in
    iu = newid[graph.u[internal]]
    iv = newid[graph.v[internal]]
    iw = graph.w[internal]

    # edges with exactly one endpoint in V0 feed that endpoint's sink arc
    sink_const = np.zeros(members.size, dtype=np.int64)
    half = u_in & ~v_in
    np.add.at(sink_const, newid[graph.u[half]], graph.w[half])
    half = v_in & ~u_in
    np.add.at(sink_const, newid[graph.v[half]], graph.w[half])

    zeros = np.zeros(members.size, dtype=np.int64)
    return ParametricNetwork(
        members.size,
        np.concatenate((iu, iv)),
        np.concatenate((iv, iu)),
        np.concatenate((iw, iw)),
        src_a=zeros,
        src_b=graph.q[members],
        snk_a=sink_const,
        snk_b=zeros,
        direction=SOURCE_INCREASING,
        node_ids=members,
    )


def build_s_excess_network(node_weights, constraint_arcs) -> ParametricNetwork:
    """λ-independent network for max Σ wᵢxᵢ − Σ uᵢⱼzᵢⱼ s.t. xᵢ − xⱼ ≤ zᵢⱼ.

    Positive-weight nodes hang off the source, negative-weight nodes off
    the sink; each constraint contributes one internal arc.  Pass
    ``math.inf`` (or None) as an arc capacity for hard x_i ≤ x_j couplings.
    The min-cut source set is the maximum s-excess set.
    """
    weights = [int(x) for x in node_weights]
    n = len(weights)
    pos_total = sum(x for x in weights if x > 0)
    tails, heads, caps = [], [], []
    for i, j, cap in constraint_arcs:
        if cap is None or (isinstance(cap, float) and math.isinf(cap)):
            cap = pos_total + 1  # effectively uncuttable
        if cap < 0:
            raise ValidationError("constraint arc capacities must be nonnegative")
        tails.append(int(i))
        heads.append(int(j))
        caps.append(int(cap))
    w_arr = np.asarray(weights, dtype=np.int64)
    zeros = np.zeros(n, dtype=np.int64)
    return ParametricNetwork(
        n,
        np.asarray(tails, dtype=np.int64),
        np.asarray(heads, dtype=np.int64),
        np.asarray(caps, dtype=np.int64),
        src_a=np.maximum(w_arr, 0),
        src_b=zeros,
        snk_a=np.maximum(-w_arr, 0),
        snk_b=zeros,
        direction=SOURCE_INCREASING,
    )


def instantiate(net: ParametricNetwork, lam) -> InstantiatedNetwork:
    """Realize the network at rational λ with exact integer capacities."""
    return InstantiatedNetwork(net, Fraction(lam))


def to_dimacs(inst: InstantiatedNetwork, stream) -> None:
    """Dump an instantiated network in DIMACS max-flow format.

    Nodes are 1-based: internal nodes 1..n, source n+1, sink n+2.  All
    materialized arcs are written, zero-capacity terminal arcs included, so
    third-party solvers see the exact instance the solver operates on.
    """
    n = inst.n
    s, t = n + 1, n + 2
    parent = inst.parent
    lines = [f"p max {n + 2} {parent.num_arcs}", f"n {s} s", f"n {t} t"]
    for i in range(n):
        lines.append(f"a {s} {i + 1} {int(inst.src_cap[i])}")
        lines.append(f"a {i + 1} {t} {int(inst.snk_cap[i])}")
    for a in range(parent.arc_tail.size):
        lines.append(
            f"a {int(parent.arc_tail[a]) + 1} {int(parent.arc_head[a]) + 1} "
            f"{int(inst.arc_cap[a])}"
        )
    stream.write("\n".join(lines) + "\n")
