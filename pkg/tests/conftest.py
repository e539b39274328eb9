import os
from pathlib import Path

import numpy as np
import pytest

from paracut.graph import InputGraph, NodeSubset

DATA_DIR = Path(os.environ.get("PARACUT_DATA", Path(__file__).resolve().parent.parent / "data"))


def make_graph(n, edges, q=None):
    """Edges as (u, v) or (u, v, w) tuples."""
    u = np.array([e[0] for e in edges], dtype=np.int64)
    v = np.array([e[1] for e in edges], dtype=np.int64)
    w = np.array([e[2] if len(e) > 2 else 1 for e in edges], dtype=np.int64)
    if q is None:
        q = np.ones(n, dtype=np.int64)
    return InputGraph(n, u, v, w, np.asarray(q, dtype=np.int64))


def random_graph(rng, n, p, wmax=1, qmax=1):
    edges = [
        (i, j, int(rng.integers(1, wmax + 1)))
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < p
    ]
    if not edges:
        edges = [(0, 1, int(rng.integers(1, wmax + 1)))]
        n = max(n, 2)
    q = rng.integers(1, qmax + 1, n) if qmax > 1 else np.ones(n, dtype=np.int64)
    return make_graph(n, edges, q)


def subsets(n):
    """All nonempty node subsets of 0..n-1 (for enumeration oracles)."""
    for mask in range(1, 1 << n):
        yield NodeSubset(n, mask)


@pytest.fixture
def k3():
    return make_graph(3, [(0, 1), (0, 2), (1, 2)])


@pytest.fixture
def p3():
    return make_graph(3, [(0, 1), (1, 2)])


@pytest.fixture
def k4_pendant():
    # K4 on 0..3 with pendant node 4 hanging off node 0
    return make_graph(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4)])


@pytest.fixture
def star():
    # center 0, leaves 1..3
    return make_graph(4, [(0, 1), (0, 2), (0, 3)])


def dataset_path(name: str) -> Path:
    return DATA_DIR / name


def require_dataset(name: str) -> Path:
    path = dataset_path(name)
    if not path.exists():
        pytest.skip(f"dataset {name} not present under {DATA_DIR} (see scripts/fetch_datasets.py)")
    return path
