"""Greedy peeling baselines: single-pass peeling and iterated load peeling.

A pass repeatedly removes the node minimizing (load + current weighted
degree) / q, tracking the best-density suffix; with zero loads this is the
classic minimum-degree peel (a 2-approximation for the densest subgraph).
The iterated variant accumulates each node's peel-time degree into its load
and keeps the best suffix seen across passes.

All density comparisons are exact (integer cross-multiplication); ties in
the peel order break toward the smallest node id.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numba import njit

from .errors import CapacityOverflowError, ValidationError
from .graph import InputGraph, NodeSubset


@njit(cache=True)
def _peel_pass(indptr, nbrs, ews, q, loads, order):
    """One full peel; mutates ``loads``; returns (bestE, bestQ, best_k)."""
    n = indptr.size - 1
    deg = np.zeros(n, np.int64)
    total = 0
    for v in range(n):
        acc = 0
        for idx in range(indptr[v], indptr[v + 1]):
            acc += ews[idx]
        deg[v] = acc
        total += acc
    e_left = total // 2
    q_left = 0
    for v in range(n):
        q_left += q[v]

    cap = n + nbrs.size + 8
    hnum = np.empty(cap, np.int64)
    hden = np.empty(cap, np.int64)
    hnode = np.empty(cap, np.int64)
    hsize = 0

    def _less(i, j):
        a = hnum[i] * hden[j]
        b = hnum[j] * hden[i]
        if a != b:
            return a < b
        return hnode[i] < hnode[j]

    def _push(num, den, node):
        nonlocal hsize
        pos = hsize
        hnum[pos] = num
        hden[pos] = den
        hnode[pos] = node
        hsize += 1
        while pos > 0:
            par = (pos - 1) // 2
            if _less(pos, par):
                hnum[pos], hnum[par] = hnum[par], hnum[pos]
                hden[pos], hden[par] = hden[par], hden[pos]
                hnode[pos], hnode[par] = hnode[par], hnode[pos]
                pos = par
            else:
                break

    def _pop():
        nonlocal hsize
        num = hnum[0]
        den = hden[0]
        node = hnode[0]
        hsize -= 1
        if hsize > 0:
            hnum[0] = hnum[hsize]
            hden[0] = hden[hsize]
            hnode[0] = hnode[hsize]
            pos = 0
            while True:
                lo = 2 * pos + 1
                hi = lo + 1
                small = pos
                if lo < hsize and _less(lo, small):
                    small = lo
                if hi < hsize and _less(hi, small):
                    small = hi
                if small == pos:
                    break
                hnum[pos], hnum[small] = hnum[small], hnum[pos]
                hden[pos], hden[small] = hden[small], hden[pos]
                hnode[pos], hnode[small] = hnode[small], hnode[pos]
                pos = small
        return num, den, node

    alive = np.ones(n, np.uint8)
    for v in range(n):
        _push(loads[v] + deg[v], q[v], v)

    best_e = e_left
    best_q = q_left
    best_k = 0
    for k in range(n):
        while True:
            num, den, v = _pop()
            if alive[v] == 1 and num == loads[v] + deg[v] and den == q[v]:
                break
        order[k] = v
        loads[v] += deg[v]
        alive[v] = 0
        e_left -= deg[v]
        q_left -= q[v]
        for idx in range(indptr[v], indptr[v + 1]):
            u = nbrs[idx]
            if alive[u] == 1:
                deg[u] -= ews[idx]
                _push(loads[u] + deg[u], q[u], u)
        if k + 1 < n and e_left * best_q > best_e * q_left:
            best_e = e_left
            best_q = q_left
            best_k = k + 1
    return best_e, best_q, best_k


@dataclass
class PeelTrace:
    """Removal order of one pass plus its best suffix."""

    order: np.ndarray
    best_density: Fraction
    best_index: int
    loads: np.ndarray

    def best_suffix(self) -> NodeSubset:
        return NodeSubset.from_indices(self.order.size, self.order[self.best_index :])


def _check_budget(graph: InputGraph, loads) -> None:
    max_key = int(loads.max()) + int(graph.degrees.max())
    if max_key * int(graph.q.max()) >= 1 << 62 or (
        graph.total_edge_weight * graph.total_node_weight >= 1 << 62
    ):
        raise CapacityOverflowError(
            "peel keys exceed the 62-bit budget; reduce weight magnitudes"
        )


def peel_once(graph: InputGraph, loads=None) -> PeelTrace:
    """One peeling pass with the given starting loads (default all zero)."""
    if loads is None:
        loads = np.zeros(graph.n, dtype=np.int64)
    else:
        loads = np.ascontiguousarray(loads, dtype=np.int64)
        if loads.size != graph.n or np.any(loads < 0):
            raise ValidationError("loads must be nonnegative, one per node")
    _check_budget(graph, loads)
    indptr, nbrs, ews = graph.adjacency()
    order = np.empty(graph.n, dtype=np.int64)
    best_e, best_q, best_k = _peel_pass(indptr, nbrs, ews, graph.q, loads, order)
    return PeelTrace(order, Fraction(best_e, best_q), int(best_k), loads)


def charikar_greedy(graph: InputGraph) -> tuple[NodeSubset, Fraction]:
    """Minimum-degree peeling; returns the best suffix and its exact density.

    The result is guaranteed to be at least half the optimal density.
    """
    trace = peel_once(graph)
    return trace.best_suffix(), trace.best_density


def greedy_pp(
    graph: InputGraph, iterations: int
) -> tuple[NodeSubset, Fraction, list[Fraction]]:
    """Iterated load-based peeling.

    Runs ``iterations`` passes, carrying per-node loads between them, and
    returns the best suffix over all passes, its density, and the running
    best density after each pass.  One iteration reproduces
    :func:`charikar_greedy` exactly, ties included.
    """
    if iterations < 1:
        raise ValidationError("iterations must be >= 1")
    loads = np.zeros(graph.n, dtype=np.int64)
    best_density = None
    best_set = None
    history: list[Fraction] = []
    for _ in range(iterations):
        trace = peel_once(graph, loads)
        loads = trace.loads
        if best_density is None or trace.best_density > best_density:
            best_density = trace.best_density
            best_set = trace.best_suffix()
        history.append(best_density)
    return best_set, best_density, history
