"""Undirected weighted graphs with node weights, and exact ratio objectives.

Graphs are loaded from whitespace-separated edge lists (the format used by
the common public network repositories), preprocessed into a canonical
dense-id form, and queried through exact integer/rational arithmetic only.
"""

from __future__ import annotations

import io
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import DegenerateInputError, GraphFormatError, ValidationError


class NodeSubset:
    """An immutable subset of nodes ``0..n-1`` backed by an integer bitmask."""

    __slots__ = ("n", "mask", "_count")

    def __init__(self, n: int, mask: int):
        if mask < 0 or mask >> n:
            raise ValueError("mask has bits outside 0..n-1")
        self.n = int(n)
        self.mask = mask
        self._count = mask.bit_count()

    @classmethod
    def from_indices(cls, n: int, indices) -> "NodeSubset":
        mask = 0
        for i in indices:
            i = int(i)
            if not 0 <= i < n:
                raise ValueError(f"node id {i} outside 0..{n - 1}")
            mask |= 1 << i
        return cls(n, mask)

    @classmethod
    def from_bool_array(cls, arr) -> "NodeSubset":
        arr = np.asarray(arr, dtype=bool)
        packed = np.packbits(arr, bitorder="little").tobytes()
        return cls(arr.size, int.from_bytes(packed, "little"))

    @classmethod
    def full(cls, n: int) -> "NodeSubset":
        return cls(n, (1 << n) - 1)

    @classmethod
    def empty(cls, n: int) -> "NodeSubset":
        return cls(n, 0)

    def to_bool_array(self) -> np.ndarray:
        nbytes = (self.n + 7) // 8
        raw = np.frombuffer(self.mask.to_bytes(nbytes, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.n].astype(bool)

    def indices(self) -> np.ndarray:
        return np.nonzero(self.to_bool_array())[0]

    def complement(self) -> "NodeSubset":
        return NodeSubset(self.n, ((1 << self.n) - 1) ^ self.mask)

    def issubset(self, other: "NodeSubset") -> bool:
        return self.mask & ~other.mask == 0

    def __len__(self) -> int:
        return self._count

    def __contains__(self, i) -> bool:
        return bool((self.mask >> int(i)) & 1)

    def __iter__(self):
        return iter(self.indices().tolist())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, NodeSubset)
            and self.n == other.n
            and self.mask == other.mask
        )

    def __hash__(self) -> int:
        return hash((self.n, self.mask))

    def __and__(self, other: "NodeSubset") -> "NodeSubset":
        return NodeSubset(self.n, self.mask & other.mask)

    def __or__(self, other: "NodeSubset") -> "NodeSubset":
        return NodeSubset(self.n, self.mask | other.mask)

    def __sub__(self, other: "NodeSubset") -> "NodeSubset":
        return NodeSubset(self.n, self.mask & ~other.mask)

    def __repr__(self) -> str:
        ids = self.indices()
        shown = ",".join(map(str, ids[:12]))
        if len(ids) > 12:
            shown += ",..."
        return f"NodeSubset(n={self.n}, size={self._count}, {{{shown}}})"


class InputGraph:
    """Preprocessed undirected weighted graph with positive node weights.

    Edges are stored canonically with ``u < v`` (dense remapped ids), at most
    one edge per pair, all edge weights positive integers.  Instances are
    immutable after construction and safe to share across threads.
    """

    def __init__(self, n, u, v, w, q, orig_ids=None):
        self.n = int(n)
        self.u = np.ascontiguousarray(u, dtype=np.int64)
        self.v = np.ascontiguousarray(v, dtype=np.int64)
        self.w = np.ascontiguousarray(w, dtype=np.int64)
        self.m = int(self.u.size)
        self.q = np.ascontiguousarray(q, dtype=np.int64)
        if orig_ids is None:
            orig_ids = np.arange(self.n, dtype=np.int64)
        self.orig_ids = np.ascontiguousarray(orig_ids, dtype=np.int64)
        self._validate()

        # weighted degree d_i and out-degree d_i^+ under the u<v orientation
        self.degrees = np.zeros(self.n, dtype=np.int64)
        np.add.at(self.degrees, self.u, self.w)
        np.add.at(self.degrees, self.v, self.w)
        self.out_degrees = np.zeros(self.n, dtype=np.int64)
        np.add.at(self.out_degrees, self.u, self.w)
        self._adj = None

    def _validate(self):
        if self.n <= 0:
            raise ValidationError("graph has no nodes")
        if self.m == 0:
            raise ValidationError("graph has no edges")
        if np.any(self.u == self.v):
            raise ValidationError("self-loop present after preprocessing")
        if np.any(self.u > self.v):
            raise ValidationError("edges must be stored with u < v")
        if np.any(self.w <= 0):
            raise ValidationError("edge weights must be positive integers")
        if self.q.size != self.n or np.any(self.q <= 0):
            raise ValidationError("node weights must be positive for all n nodes")
        key = self.u * self.n + self.v
        if np.unique(key).size != self.m:
            raise ValidationError("duplicate edges present after preprocessing")

    # -- derived views ----------------------------------------------------

    @property
    def total_edge_weight(self) -> int:
        return int(self.w.sum())

    @property
    def total_node_weight(self) -> int:
        return int(self.q.sum())

    def adjacency(self):
        """CSR adjacency (indptr, neighbor ids, edge weights), built lazily."""
        if self._adj is None:
            src = np.concatenate((self.u, self.v))
            dst = np.concatenate((self.v, self.u))
            ew2 = np.concatenate((self.w, self.w))
            order = np.argsort(src, kind="stable")
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            np.cumsum(np.bincount(src, minlength=self.n), out=indptr[1:])
            self._adj = (indptr, dst[order], ew2[order])
        return self._adj

    def with_node_weights(self, q) -> "InputGraph":
        """New graph sharing edges but carrying different node weights."""
        return InputGraph(self.n, self.u, self.v, self.w, q, self.orig_ids)

    def with_degree_weights(self) -> "InputGraph":
        """New graph with q_i set to the weighted degree d_i."""
        return self.with_node_weights(self.degrees)

    def original_ids(self, subset: NodeSubset) -> np.ndarray:
        """Original file ids of a subset, for reporting."""
        return self.orig_ids[subset.indices()]

    def connected_components(self):
        """Component label per node (scipy), plus the number of components."""
        from scipy.sparse import coo_matrix
        from scipy.sparse.csgraph import connected_components

        mat = coo_matrix(
            (np.ones(self.m, dtype=np.int8), (self.u, self.v)),
            shape=(self.n, self.n),
        )
        ncomp, labels = connected_components(mat, directed=False)
        return ncomp, labels

    def induced_subgraph(self, keep: NodeSubset) -> "InputGraph":
        """Induced subgraph on ``keep`` with ids densified in ascending order."""
        sel = keep.to_bool_array()
        newid = np.full(self.n, -1, dtype=np.int64)
        kept = np.nonzero(sel)[0]
        newid[kept] = np.arange(kept.size)
        emask = sel[self.u] & sel[self.v]
        return InputGraph(
            kept.size,
            newid[self.u[emask]],
            newid[self.v[emask]],
            self.w[emask],
            self.q[kept],
            self.orig_ids[kept],
        )

    def __repr__(self) -> str:
        return f"InputGraph(n={self.n}, m={self.m}, W={self.total_edge_weight})"


# -- loading ---------------------------------------------------------------


def _parse_fallback(text: str, weighted: bool):
    """Line-by-line parser used when the fast path rejects the input.

    Slower than the pandas path but reports exact line numbers.
    """
    us, vs, ws = [], [], []
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if weighted:
            if len(parts) != 3:
                raise GraphFormatError(
                    f"expected 'u v w', got {len(parts)} fields", line_no
                )
        elif len(parts) not in (2, 3):
            raise GraphFormatError(
                f"expected 'u v' (or 'u v w'), got {len(parts)} fields", line_no
            )
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"non-integer node id in {parts[:2]}", line_no)
        wt = 1
        if weighted:
            try:
                wt = int(parts[2])
            except ValueError:
                raise GraphFormatError(
                    f"non-integer edge weight {parts[2]!r} (pre-scale fractional "
                    "weights to integers)",
                    line_no,
                )
            if wt <= 0:
                raise GraphFormatError(f"nonpositive edge weight {wt}", line_no)
        us.append(a)
        vs.append(b)
        ws.append(wt)
    return np.asarray(us, dtype=np.int64), np.asarray(vs), np.asarray(ws, dtype=np.int64)


def _read_pairs(source, weighted: bool):
    """Arrays (u, v, w) from the raw stream, before any preprocessing."""
    import pandas as pd

    if isinstance(source, (str, Path)):
        text = Path(source).read_text()
    elif isinstance(source, bytes):
        text = source.decode()
    else:
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode()

    try:
        df = pd.read_csv(
            io.StringIO(text),
            sep=r"\s+",
            comment="#",
            header=None,
            dtype=np.int64,
            engine="c",
        )
    except Exception:
        return _parse_fallback(text, weighted)
    ncol = df.shape[1]
    if weighted and ncol != 3 or ncol not in (2, 3):
        return _parse_fallback(text, weighted)  # mixed/short rows: exact diagnosis
    u = df[0].to_numpy()
    v = df[1].to_numpy()
    if weighted:
        w = df[2].to_numpy()
        if np.any(w <= 0):
            bad = int(np.argmax(w <= 0))
            raise GraphFormatError(f"nonpositive edge weight {int(w[bad])}")
    else:
        w = np.ones(u.size, dtype=np.int64)
    return u, v, w


def load_edge_list(source, weighted: bool = False) -> InputGraph:
    """Load and preprocess an edge-list graph.

    Lines are ``u v`` (or ``u v w`` when ``weighted``); ``#`` starts a
    comment.  Preprocessing: self-loops dropped, direction disregarded,
    parallel edges collapsed (multiplicity for unweighted input, weight sum
    for weighted input), node ids remapped densely in first-occurrence
    order.  Node weights default to 1.

    Raises :class:`GraphFormatError` on malformed lines and
    :class:`ValidationError` if no edges survive preprocessing.
    """
    import pandas as pd

    u, v, w = _read_pairs(source, weighted)

    keep = u != v
    u, v, w = u[keep], v[keep], w[keep]
    if u.size == 0:
        raise ValidationError("empty graph: no edges survive preprocessing")

    # dense remap by first occurrence over the surviving (u, v) stream
    stream = np.column_stack((u, v)).ravel()
    codes, uniques = pd.factorize(stream)
    codes = codes.reshape(-1, 2)
    n = uniques.size
    lo = np.minimum(codes[:, 0], codes[:, 1]).astype(np.int64)
    hi = np.maximum(codes[:, 0], codes[:, 1]).astype(np.int64)

    key = lo * n + hi
    order = np.argsort(key, kind="stable")
    key_sorted = key[order]
    uniq_key, start = np.unique(key_sorted, return_index=True)
    wsum = np.add.reduceat(w[order], start)

    return InputGraph(
        n,
        uniq_key // n,
        uniq_key % n,
        wsum,
        np.ones(n, dtype=np.int64),
        np.asarray(uniques, dtype=np.int64),
    )


def load_node_weights(graph: InputGraph, source) -> InputGraph:
    """Apply a per-node weight file (``id q`` per line, original ids).

    Nodes absent from the file keep weight 1.  Unknown ids and nonpositive
    weights are rejected.
    """
    if isinstance(source, (str, Path)):
        text = Path(source).read_text()
    else:
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode()
    lookup = {int(o): i for i, o in enumerate(graph.orig_ids)}
    q = np.ones(graph.n, dtype=np.int64)
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise GraphFormatError("expected 'id q'", line_no)
        try:
            node, weight = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError("non-integer field in node-weight line", line_no)
        if weight <= 0:
            raise GraphFormatError(f"nonpositive node weight {weight}", line_no)
        if node not in lookup:
            raise GraphFormatError(f"unknown node id {node}", line_no)
        q[lookup[node]] = weight
    return graph.with_node_weights(q)


# -- exact ratio objectives -------------------------------------------------


def internal_weight(graph: InputGraph, subset: NodeSubset) -> int:
    """Total weight of edges with both endpoints in ``subset``."""
    sel = subset.to_bool_array()
    inside = sel[graph.u] & sel[graph.v]
    return int(graph.w[inside].sum())


def boundary_weight(graph: InputGraph, subset: NodeSubset) -> int:
    """Total weight of edges with exactly one endpoint in ``subset``."""
    sel = subset.to_bool_array()
    crossing = sel[graph.u] ^ sel[graph.v]
    return int(graph.w[crossing].sum())


def subset_node_weight(graph: InputGraph, subset: NodeSubset) -> int:
    return int(graph.q[subset.indices()].sum())


def density(graph: InputGraph, subset: NodeSubset) -> Fraction:
    """Exact density of a nonempty subset: internal edge weight over q(S)."""
    if len(subset) == 0:
        raise DegenerateInputError("density of the empty set is undefined")
    return Fraction(internal_weight(graph, subset), subset_node_weight(graph, subset))


def conductance_star_value(
    graph: InputGraph, subset: NodeSubset, candidates: NodeSubset
) -> Fraction:
    """Exact seeded-conductance ratio: boundary cut over q(S).

    ``subset`` must be a nonempty subset of ``candidates`` (the nodes not
    claimed by the seed set).  The cut counts every edge from ``subset`` to
    its complement in the whole graph, seed nodes included.
    """
    if len(subset) == 0:
        raise DegenerateInputError("ratio of the empty set is undefined")
    if not subset.issubset(candidates):
        raise ValidationError("subset must stay within the candidate set")
    return Fraction(boundary_weight(graph, subset), subset_node_weight(graph, subset))
