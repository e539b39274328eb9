"""Numba kernels for the preflow min-cut solver.

Arcs are stored as interleaved pairs: arc ``a`` and ``a ^ 1`` are mutual
reverses, and ``res`` holds residual capacities (so flow on ``a`` equals
``res[a ^ 1]`` for a forward arc).  Labels live in ``0..N`` where ``N`` is
the node count including terminals; a node at label ``N`` is frozen on the
source side and is never discharged again.

Non-frozen nodes are threaded through per-label doubly-linked lists so a
gap event only touches the nodes it freezes; active nodes additionally sit
in per-label LIFO buckets scanned highest-first.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def global_relabel(adj_start, adj_arcs, arc_head, res, dist, N, s, t):
    """Raise labels to exact residual distances to t (N when unreachable).

    Labels are always lower bounds on the true distance, so this never
    lowers a label and stays valid for warm-started sweeps.
    """
    queue = np.empty(N, np.int64)
    seen = np.zeros(N, np.uint8)
    seen[t] = 1
    queue[0] = t
    qh = 0
    qt = 1
    dist[t] = 0
    while qh < qt:
        w = queue[qh]
        qh += 1
        dw = dist[w]
        for idx in range(adj_start[w], adj_start[w + 1]):
            b = adj_arcs[idx]
            u = arc_head[b]
            if u != s and seen[u] == 0 and res[b ^ 1] > 0:
                seen[u] = 1
                dist[u] = dw + 1
                queue[qt] = u
                qt += 1
    for v in range(N):
        if v != t and seen[v] == 0:
            dist[v] = N
    dist[s] = N


@njit(cache=True)
def _rebuild(bhead, bnext, lab_head, lab_next, lab_prev, cur, adj_start, dist, excess, N, s, t):
    """Re-thread label lists and active buckets from current labels/excesses."""
    for l in range(N + 1):
        bhead[l] = -1
        lab_head[l] = -1
    highest = -1
    top = 0
    for v in range(N):
        cur[v] = adj_start[v]
        if v == s or v == t:
            continue
        d = dist[v]
        if d < N:
            lab_prev[v] = -1
            lab_next[v] = lab_head[d]
            if lab_head[d] != -1:
                lab_prev[lab_head[d]] = v
            lab_head[d] = v
            if d > top:
                top = d
            if excess[v] > 0:
                bnext[v] = bhead[d]
                bhead[d] = v
                if d > highest:
                    highest = d
    return highest, top


@njit(cache=True)
def discharge_all(adj_start, adj_arcs, arc_head, res, dist, excess, cur,
                  bhead, bnext, lab_head, lab_next, lab_prev, N, s, t):
    """Highest-label phase-1 discharge with gap and global relabeling.

    On return every non-terminal node with positive excess has label N;
    ``excess[t]`` then equals the min-cut value.
    """
    relabel_budget = 2 * adj_arcs.size + 4 * N  # work between global updates
    highest, top = _rebuild(bhead, bnext, lab_head, lab_next, lab_prev,
                            cur, adj_start, dist, excess, N, s, t)
    work = 0

    while highest >= 0:
        v = bhead[highest]
        if v == -1:
            highest -= 1
            continue
        bhead[highest] = bnext[v]
        if dist[v] != highest or excess[v] <= 0 or dist[v] >= N:
            continue  # stale entry (relabeled or gap-frozen since queued)

        while excess[v] > 0 and dist[v] < N:
            if cur[v] < adj_start[v + 1]:
                a = adj_arcs[cur[v]]
                w = arc_head[a]
                if res[a] > 0 and dist[v] == dist[w] + 1:
                    delta = excess[v]
                    if res[a] < delta:
                        delta = res[a]
                    res[a] -= delta
                    res[a ^ 1] += delta
                    excess[v] -= delta
                    if excess[w] == 0 and w != s and w != t and dist[w] < N:
                        bnext[w] = bhead[dist[w]]
                        bhead[dist[w]] = w
                    excess[w] += delta
                    work += 1
                else:
                    cur[v] += 1
            else:
                # relabel: unlink from the old label list first
                old = dist[v]
                nxt = lab_next[v]
                prv = lab_prev[v]
                if prv != -1:
                    lab_next[prv] = nxt
                else:
                    lab_head[old] = nxt
                if nxt != -1:
                    lab_prev[nxt] = prv

                dmin = N
                for idx in range(adj_start[v], adj_start[v + 1]):
                    a = adj_arcs[idx]
                    if res[a] > 0:
                        dw = dist[arc_head[a]]
                        if dw < dmin:
                            dmin = dw
                newd = dmin + 1
                if newd > N:
                    newd = N
                dist[v] = newd
                cur[v] = adj_start[v]
                work += adj_start[v + 1] - adj_start[v]
                if newd < N:
                    lab_prev[v] = -1
                    lab_next[v] = lab_head[newd]
                    if lab_head[newd] != -1:
                        lab_prev[lab_head[newd]] = v
                    lab_head[newd] = v
                    if newd > top:
                        top = newd

                if lab_head[old] == -1 and old > 0:
                    # gap: freeze everything above the now-empty level
                    for l in range(old + 1, top + 1):
                        u = lab_head[l]
                        while u != -1:
                            dist[u] = N
                            u = lab_next[u]
                        lab_head[l] = -1
                    top = old - 1
                if dist[v] < N and dist[v] > highest:
                    highest = dist[v]
            if work >= relabel_budget:
                work = 0
                global_relabel(adj_start, adj_arcs, arc_head, res, dist, N, s, t)
                highest, top = _rebuild(bhead, bnext, lab_head, lab_next, lab_prev,
                                        cur, adj_start, dist, excess, N, s, t)
                break  # v's label may have changed; re-pick from buckets


@njit(cache=True)
def reach_to_sink(adj_start, adj_arcs, arc_head, res, t, N):
    """Nodes with a residual path to t (the sink side of the maximal cut)."""
    reach = np.zeros(N, np.uint8)
    queue = np.empty(N, np.int64)
    reach[t] = 1
    queue[0] = t
    qh = 0
    qt = 1
    while qh < qt:
        w = queue[qh]
        qh += 1
        for idx in range(adj_start[w], adj_start[w + 1]):
            b = adj_arcs[idx]
            u = arc_head[b]
            if reach[u] == 0 and res[b ^ 1] > 0:
                reach[u] = 1
                queue[qt] = u
                qt += 1
    return reach


@njit(cache=True)
def reach_from_sources(adj_start, adj_arcs, arc_head, res, excess, s, t, N):
    """Residual closure of {s} plus all excess-holding nodes.

    Trapped excess belongs to the source side of every min cut, so this
    closure is the minimal source-side min cut even for a preflow.
    """
    reach = np.zeros(N, np.uint8)
    queue = np.empty(N, np.int64)
    qt = 0
    reach[s] = 1
    queue[qt] = s
    qt += 1
    for v in range(N):
        if v != s and v != t and excess[v] > 0 and reach[v] == 0:
            reach[v] = 1
            queue[qt] = v
            qt += 1
    qh = 0
    while qh < qt:
        u = queue[qh]
        qh += 1
        for idx in range(adj_start[u], adj_start[u + 1]):
            a = adj_arcs[idx]
            w = arc_head[a]
            if reach[w] == 0 and res[a] > 0:
                reach[w] = 1
                queue[qt] = w
                qt += 1
    return reach
