import io
from fractions import Fraction

import numpy as np
import pytest

from paracut.errors import ContractViolationError, ValidationError
from paracut.graph import NodeSubset
from paracut.ipc import ipc_maximize
from paracut.mincut import solve_mincut
from paracut.network import (
    build_conductance_network,
    build_dsp_network,
    instantiate,
)
from paracut.parametric import (
    CONCAVE_MAX,
    fully_parametric,
    leftmost_breakpoint,
    simple_parametric,
    write_envelope_csv,
)

from conftest import random_graph


class TestSimpleParametric:
    def test_k4_pendant_sets(self, k4_pendant):
        sols = simple_parametric(
            build_dsp_network(k4_pendant),
            [Fraction(1, 2), Fraction(6, 5), Fraction(8, 5)],
        )
        assert [sorted(s.source_set) for s in sols] == [
            [0, 1, 2, 3, 4],
            [0, 1, 2, 3],
            [],
        ]

    def test_single_lambda_matches_cold(self, k3):
        net = build_dsp_network(k3)
        [sol] = simple_parametric(net, [Fraction(7, 8)])
        cold = solve_mincut(instantiate(net, Fraction(7, 8)))[0]
        assert sol.source_set == cold.source_set and sol.cut_value == cold.cut_value

    def test_lambda_zero_keeps_positive_degree_nodes(self, p3):
        [sol] = simple_parametric(build_dsp_network(p3), [0])
        assert set(p3.u.tolist() + p3.v.tolist()) <= set(sol.source_set)

    def test_non_ascending_rejected(self, k3):
        with pytest.raises(ContractViolationError):
            simple_parametric(build_dsp_network(k3), [1, 1])

    def test_nestedness(self):
        rng = np.random.default_rng(77)
        for _ in range(30):
            g = random_graph(rng, int(rng.integers(2, 9)), 0.5, wmax=4)
            lams = sorted({Fraction(int(x), 8) for x in rng.integers(0, 40, 4)})
            sols = simple_parametric(build_dsp_network(g), lams)
            for earlier, later in zip(sols, sols[1:]):
                assert later.source_set.issubset(earlier.source_set)


class TestFullyParametric:
    def test_k4_pendant_envelope(self, k4_pendant):
        env = fully_parametric(build_dsp_network(k4_pendant), 0, 3)
        assert env.sense == CONCAVE_MAX
        assert [bp.lam for bp in env.breakpoints] == [Fraction(1), Fraction(3, 2)]
        assert env.hull_points() == [(5, 7), (4, 6), (0, 0)]
        assert sorted(env.breakpoints[0].source_set) == [0, 1, 2, 3, 4]
        assert sorted(env.breakpoints[1].source_set) == [0, 1, 2, 3]

    def test_k3_single_breakpoint(self, k3):
        env = fully_parametric(build_dsp_network(k3), 0, 2)
        assert [bp.lam for bp in env.breakpoints] == [Fraction(1)]

    def test_breakpoint_at_right_end_included(self, k3):
        env = fully_parametric(build_dsp_network(k3), 0, 1)
        assert [bp.lam for bp in env.breakpoints] == [Fraction(1)]

    def test_breakpoint_at_left_end_excluded(self, k3):
        env = fully_parametric(build_dsp_network(k3), 1, 2)
        assert env.breakpoints == []

    def test_needs_proper_interval(self, k3):
        with pytest.raises(ValidationError):
            fully_parametric(build_dsp_network(k3), 1, 1)

    def test_leftmost_examples(self, k3, k4_pendant):
        env = fully_parametric(build_dsp_network(k4_pendant), 0, 3)
        bp = leftmost_breakpoint(env)
        assert bp.lam == Fraction(3, 2) and sorted(bp.source_set) == [0, 1, 2, 3]
        env3 = fully_parametric(build_dsp_network(k3), 0, 2)
        bp3 = leftmost_breakpoint(env3)
        assert bp3.lam == 1 and sorted(bp3.source_set) == [0, 1, 2]

    def test_hull_slopes_are_breakpoint_lambdas(self):
        rng = np.random.default_rng(78)
        for _ in range(40):
            g = random_graph(rng, int(rng.integers(3, 10)), 0.5, wmax=5, qmax=3)
            hi = max(Fraction(int(d), 2 * int(q)) for d, q in zip(g.degrees, g.q))
            env = fully_parametric(build_dsp_network(g), 0, hi if hi > 0 else 1)
            pts = env.hull_points()
            assert len(pts) == len(env.breakpoints) + 1
            for bp, (p1, p2) in zip(env.breakpoints, zip(pts, pts[1:])):
                db, df = p1[0] - p2[0], p1[1] - p2[1]
                assert db > 0  # budgets strictly decrease along a concave hull
                assert Fraction(df, db) == bp.lam
            # slopes strictly decrease toward the left
            slopes = [bp.lam for bp in env.breakpoints]
            assert all(a < b for a, b in zip(slopes, slopes[1:]))

    def test_breakpoint_sets_nested(self):
        rng = np.random.default_rng(79)
        for _ in range(30):
            g = random_graph(rng, int(rng.integers(3, 10)), 0.6, wmax=4)
            hi = max(Fraction(int(d), 2) for d in g.degrees)
            env = fully_parametric(build_dsp_network(g), 0, hi if hi > 0 else 1)
            for a, b in zip(env.breakpoints, env.breakpoints[1:]):
                assert b.source_set.issubset(a.source_set)
                assert len(b.source_set) < len(a.source_set)

    def test_breakpoint_lambdas_are_exact(self, k4_pendant):
        # resolving just left/right of a breakpoint changes the source set
        g = k4_pendant
        net = build_dsp_network(g)
        env = fully_parametric(net, 0, 3)
        eps = Fraction(1, 2 * g.total_node_weight**2)
        for bp in env.breakpoints:
            below = solve_mincut(instantiate(net, bp.lam - eps))[0]
            above = solve_mincut(instantiate(net, bp.lam + eps))[0]
            assert below.source_set != above.source_set

    def test_conductance_envelope_leftmost(self, star):
        g = star.with_degree_weights()
        seed = NodeSubset.from_indices(4, [3])
        env = fully_parametric(build_conductance_network(g, seed), 0, 1)
        bp = leftmost_breakpoint(env)
        assert bp.lam == Fraction(1, 5)
        assert bp.budget == 5 and bp.benefit == 1

    def test_matches_ipc_on_random_graphs(self):
        rng = np.random.default_rng(80)
        for _ in range(60):
            g = random_graph(rng, int(rng.integers(2, 11)), 0.5, wmax=6, qmax=3)
            hi = max(Fraction(int(d), 2 * int(q)) for d, q in zip(g.degrees, g.q))
            env = fully_parametric(build_dsp_network(g), 0, hi if hi > 0 else 1)
            assert leftmost_breakpoint(env).lam == ipc_maximize(g).ratio


def test_envelope_csv(k4_pendant):
    env = fully_parametric(build_dsp_network(k4_pendant), 0, 3)
    buf = io.StringIO()
    write_envelope_csv(env, buf, precision=4)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "lambda,budget,benefit,set_size,lambda_exact"
    assert lines[1] == "1.0000,5,7,5,1/1"
    assert lines[2] == "1.5000,4,6,4,3/2"
