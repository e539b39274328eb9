from fractions import Fraction

import numpy as np
import pytest

from paracut.errors import ContractViolationError
from paracut.graph import NodeSubset
from paracut.mincut import continue_solve, maxflow_value, solve_mincut
from paracut.network import (
    SOURCE_INCREASING,
    InstantiatedNetwork,
    ParametricNetwork,
    build_dsp_network,
    instantiate,
)

from conftest import make_graph, random_graph


def constant_network(n, arcs, src, snk):
    zeros = np.zeros(n, dtype=np.int64)
    return ParametricNetwork(
        n,
        np.array([a[0] for a in arcs], dtype=np.int64),
        np.array([a[1] for a in arcs], dtype=np.int64),
        np.array([a[2] for a in arcs], dtype=np.int64),
        src_a=np.asarray(src, dtype=np.int64),
        src_b=zeros,
        snk_a=np.asarray(snk, dtype=np.int64),
        snk_b=zeros,
        direction=SOURCE_INCREASING,
    )


def brute_force_cuts(n, arcs, src, snk):
    """Min cut value plus the maximal and minimal optimal source sets."""
    values = {}
    for mask in range(1 << n):
        val = 0
        for i in range(n):
            val += snk[i] if (mask >> i) & 1 else src[i]
        for a, b, c in arcs:
            if (mask >> a) & 1 and not (mask >> b) & 1:
                val += c
        values[mask] = val
    best = min(values.values())
    optimal = [m for m, v in values.items() if v == best]
    union, inter = 0, (1 << n) - 1
    for m in optimal:
        union |= m
        inter &= m
    assert union in optimal and inter in optimal  # lattice closure sanity
    return best, union, inter


class TestSingleSolve:
    def test_chain(self):
        net = constant_network(2, [(0, 1, 1)], src=[2, 0], snk=[0, 3])
        sol, state = solve_mincut(instantiate(net, 0))
        assert sol.cut_value == 1
        assert sorted(sol.source_set) == [0]
        assert maxflow_value(state) == 1
        assert sorted(state.source_set("minimal")) == [0]

    def test_zero_capacity_network(self):
        net = constant_network(3, [(0, 1, 2)], src=[0, 0, 0], snk=[0, 0, 0])
        sol, state = solve_mincut(instantiate(net, 0))
        assert sol.cut_value == 0
        assert len(sol.source_set) == 3  # nothing reaches t
        assert len(state.source_set("minimal")) == 0

    def test_k3_tie_returns_maximal(self, k3):
        inst = instantiate(build_dsp_network(k3), 1)
        sol, state = solve_mincut(inst)
        assert len(sol.source_set) == 3  # V and the empty set tie; maximal wins
        assert len(state.source_set("minimal")) == 0
        assert sol.cut_value == inst.cut_value(sol.source_set)

    def test_random_vs_enumeration(self):
        rng = np.random.default_rng(202)
        for trial in range(200):
            n = int(rng.integers(2, 9))
            na = int(rng.integers(0, 2 * n + 1))
            arcs = []
            for _ in range(na):
                a, b = rng.integers(0, n, 2)
                if a != b:
                    arcs.append((int(a), int(b), int(rng.integers(0, 17))))
            src = rng.integers(0, 17, n).tolist()
            snk = rng.integers(0, 17, n).tolist()
            net = constant_network(n, arcs, src, snk)
            sol, state = solve_mincut(instantiate(net, 0))
            best, union, inter = brute_force_cuts(n, arcs, src, snk)
            assert sol.cut_value == best
            assert sol.source_set.mask == union
            assert state.source_set("minimal").mask == inter
            assert maxflow_value(state) == best

    def test_determinism(self):
        rng = np.random.default_rng(203)
        g = random_graph(rng, 30, 0.2, wmax=6)
        inst = instantiate(build_dsp_network(g), Fraction(3, 2))
        a = solve_mincut(inst)[0]
        b = solve_mincut(inst)[0]
        assert a.source_set == b.source_set and a.cut_value == b.cut_value


class TestContinuation:
    def test_k4_pendant_sweep(self, k4_pendant):
        net = build_dsp_network(k4_pendant)
        state = None
        expected = [[0, 1, 2, 3, 4], [0, 1, 2, 3], []]
        for lam, want in zip([Fraction(1, 2), Fraction(6, 5), Fraction(8, 5)], expected):
            inst = InstantiatedNetwork(net, lam, scale_mult=10 // lam.denominator)
            if state is None:
                sol, state = solve_mincut(inst, sweep="up")
            else:
                sol, state = continue_solve(state, inst)
            assert sorted(sol.source_set) == want

    def test_idempotent_update(self, k3):
        net = build_dsp_network(k3)
        inst = instantiate(net, Fraction(1, 2))
        sol1, state = solve_mincut(inst, sweep="up")
        sol2, state = continue_solve(state, instantiate(net, Fraction(1, 2)))
        assert sol1.source_set == sol2.source_set
        assert sol1.cut_value == sol2.cut_value

    def test_no_threshold_crossing_keeps_set(self, k4_pendant):
        net = build_dsp_network(k4_pendant)
        sol1, state = solve_mincut(instantiate(net, Fraction(11, 10)), sweep="up")
        sol2, _ = continue_solve(state, instantiate(net, Fraction(23, 20)))
        assert sol1.source_set == sol2.source_set

    def test_non_monotone_rejected(self, k3):
        net = build_dsp_network(k3)
        _, state = solve_mincut(instantiate(net, 1), sweep="up")
        with pytest.raises(ContractViolationError):
            continue_solve(state, instantiate(net, Fraction(1, 2)))

    def test_foreign_network_rejected(self, k3, p3):
        _, state = solve_mincut(instantiate(build_dsp_network(k3), 1), sweep="up")
        with pytest.raises(ContractViolationError):
            continue_solve(state, instantiate(build_dsp_network(p3), 2))

    def test_mixed_denominator_rescale(self, k4_pendant):
        # warm path exercises the exact lcm rescale of retained flow
        net = build_dsp_network(k4_pendant)
        lams = [Fraction(1, 3), Fraction(1, 2), Fraction(6, 5), Fraction(10, 7)]
        state = None
        for lam in lams:
            inst = instantiate(net, lam)
            if state is None:
                sol, state = solve_mincut(inst, sweep="up")
            else:
                sol, state = continue_solve(state, inst)
            cold = solve_mincut(inst)[0]
            assert sol.source_set == cold.source_set
            assert sol.cut_value == cold.cut_value

    def test_warm_matches_cold_and_nested(self):
        rng = np.random.default_rng(204)
        for trial in range(120):
            g = random_graph(rng, int(rng.integers(2, 10)), 0.5, wmax=5, qmax=3)
            net = build_dsp_network(g)
            lams = sorted({Fraction(int(x), 12) for x in rng.integers(0, 60, 5)})
            state, prev = None, None
            for lam in lams:
                inst = instantiate(net, lam)
                if state is None:
                    sol, state = solve_mincut(inst, sweep="up")
                else:
                    sol, state = continue_solve(state, inst)
                cold, cold_state = solve_mincut(inst)
                assert sol.cut_value == cold.cut_value
                assert sol.source_set == cold.source_set
                assert state.source_set("minimal") == cold_state.source_set("minimal")
                assert maxflow_value(state) == sol.cut_value
                assert inst.cut_value(sol.source_set) == sol.cut_value
                if prev is not None:
                    assert sol.source_set.issubset(prev)
                prev = sol.source_set

    def test_labels_never_decrease(self, k4_pendant):
        net = build_dsp_network(k4_pendant)
        state = None
        prev_dist = None
        for x in range(0, 40, 3):
            inst = InstantiatedNetwork(net, Fraction(x, 20), scale_mult=1)
            if state is None:
                _, state = solve_mincut(inst, sweep="up")
            else:
                continue_solve(state, inst)
            if prev_dist is not None:
                assert np.all(state.dist >= prev_dist)
            prev_dist = state.dist.copy()
