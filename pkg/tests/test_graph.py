import io
from fractions import Fraction

import numpy as np
import pytest

from paracut.errors import DegenerateInputError, GraphFormatError, ValidationError
from paracut.graph import (
    NodeSubset,
    boundary_weight,
    conductance_star_value,
    density,
    internal_weight,
    load_edge_list,
    load_node_weights,
)

from conftest import make_graph, random_graph, subsets


def load(text, weighted=False):
    return load_edge_list(io.StringIO(text), weighted=weighted)


class TestLoader:
    def test_multiplicity_collapse(self):
        g = load("0 1\n1 0\n1 2\n")
        assert g.n == 3 and g.m == 2
        edges = {(int(u), int(v)): int(w) for u, v, w in zip(g.u, g.v, g.w)}
        assert edges == {(0, 1): 2, (1, 2): 1}

    def test_self_loop_removed_and_remapped(self):
        g = load("5 5\n5 6\n")
        assert g.n == 2 and g.m == 1
        assert g.orig_ids.tolist() == [5, 6]
        assert (int(g.u[0]), int(g.v[0]), int(g.w[0])) == (0, 1, 1)

    def test_weighted_collapse_sums(self):
        g = load("0 1 3\n1 0 4\n0 2 2\n", weighted=True)
        edges = {(int(u), int(v)): int(w) for u, v, w in zip(g.u, g.v, g.w)}
        assert edges == {(0, 1): 7, (0, 2): 2}

    def test_first_occurrence_remap(self):
        g = load("9 4\n4 2\n2 9\n")
        assert g.orig_ids.tolist() == [9, 4, 2]

    def test_comments_and_blank_lines(self):
        g = load("# a comment\n\n0 1\n")
        assert g.m == 1

    def test_malformed_line_reports_number(self):
        with pytest.raises(GraphFormatError) as err:
            load("0 1\nbogus line here extra\n")
        assert "line 2" in str(err.value)

    def test_fractional_weight_rejected(self):
        with pytest.raises(GraphFormatError):
            load("0 1 0.5\n", weighted=True)

    def test_nonpositive_weight_rejected(self):
        with pytest.raises((GraphFormatError, ValidationError)):
            load("0 1 0\n", weighted=True)
        with pytest.raises((GraphFormatError, ValidationError)):
            load("0 1 -2\n", weighted=True)

    def test_empty_graph_rejected(self):
        with pytest.raises(ValidationError):
            load("3 3\n")
        with pytest.raises(ValidationError):
            load("# nothing\n")

    def test_deterministic_reload(self):
        text = "4 7\n7 1\n1 4\n9 1\n"
        a, b = load(text), load(text)
        assert a.orig_ids.tolist() == b.orig_ids.tolist()
        assert a.u.tolist() == b.u.tolist() and a.v.tolist() == b.v.tolist()
        assert a.w.tolist() == b.w.tolist()

    def test_node_weight_file(self):
        g = load("0 1\n1 2\n")
        g2 = load_node_weights(g, io.StringIO("0 5\n2 7\n"))
        assert g2.q.tolist() == [5, 1, 7]
        with pytest.raises(GraphFormatError):
            load_node_weights(g, io.StringIO("99 2\n"))
        with pytest.raises(GraphFormatError):
            load_node_weights(g, io.StringIO("0 0\n"))


class TestSubset:
    def test_bitset_roundtrip(self):
        s = NodeSubset.from_indices(10, [0, 3, 9])
        assert len(s) == 3 and 3 in s and 4 not in s
        assert NodeSubset.from_bool_array(s.to_bool_array()) == s
        assert s.complement() == NodeSubset.from_indices(10, [1, 2, 4, 5, 6, 7, 8])

    def test_subset_relation(self):
        a = NodeSubset.from_indices(5, [1, 2])
        b = NodeSubset.from_indices(5, [1, 2, 4])
        assert a.issubset(b) and not b.issubset(a)


class TestRatios:
    def test_k3_density(self, k3):
        assert density(k3, NodeSubset.full(3)) == 1

    def test_p3_density_is_maximum(self, p3):
        # enumeration oracle over all 7 nonempty subsets
        best = max(density(p3, s) for s in subsets(3))
        assert best == Fraction(2, 3)
        assert density(p3, NodeSubset.full(3)) == best

    def test_empty_subset_rejected(self, k3):
        with pytest.raises(DegenerateInputError):
            density(k3, NodeSubset.empty(3))

    def test_star_conductance_minimum(self, star):
        g = star.with_degree_weights()
        v0 = NodeSubset.from_indices(4, [0, 1, 2])  # seed = leaf 3
        vals = [
            conductance_star_value(g, NodeSubset(4, mask), v0)
            for mask in range(1, 8)  # all nonempty subsets of V0
        ]
        assert min(vals) == Fraction(1, 5)
        assert conductance_star_value(g, v0, v0) == Fraction(1, 5)

    def test_whole_graph_has_zero_boundary(self, star):
        full = NodeSubset.full(4)
        assert conductance_star_value(star, full, full) == 0

    def test_single_leaf(self, star):
        g = star.with_degree_weights()
        v0 = NodeSubset.from_indices(4, [0, 1, 2])
        assert conductance_star_value(g, NodeSubset.from_indices(4, [1]), v0) == 1

    def test_subset_outside_candidates_rejected(self, star):
        v0 = NodeSubset.from_indices(4, [0, 1])
        with pytest.raises(ValidationError):
            conductance_star_value(star, NodeSubset.from_indices(4, [2]), v0)


class TestInvariants:
    def test_degree_sums(self):
        rng = np.random.default_rng(42)
        for _ in range(50):
            g = random_graph(rng, int(rng.integers(2, 12)), 0.5, wmax=6)
            total = g.total_edge_weight
            assert int(g.degrees.sum()) == 2 * total
            assert int(g.out_degrees.sum()) == total

    def test_cut_identity_random_subsets(self):
        # 2*C(S,S) + C(S, S-bar) == d(S)
        rng = np.random.default_rng(43)
        for _ in range(50):
            n = int(rng.integers(2, 12))
            g = random_graph(rng, n, 0.5, wmax=5)
            n = g.n
            s = NodeSubset(n, int(rng.integers(1, 1 << n)))
            dS = int(g.degrees[s.indices()].sum())
            assert 2 * internal_weight(g, s) + boundary_weight(g, s) == dS

    def test_full_density_equals_total_ratio(self):
        rng = np.random.default_rng(44)
        for _ in range(20):
            g = random_graph(rng, int(rng.integers(2, 10)), 0.6, wmax=4, qmax=5)
            assert density(g, NodeSubset.full(g.n)) == Fraction(
                g.total_edge_weight, g.total_node_weight
            )

    def test_induced_subgraph(self):
        g = make_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
        sub = g.induced_subgraph(NodeSubset.from_indices(5, [0, 1, 4]))
        assert sub.n == 3 and sub.m == 2
        assert sub.orig_ids.tolist() == [0, 1, 4]
