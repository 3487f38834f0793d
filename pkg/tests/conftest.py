"""Shared fixtures, independent reference implementations and strategies.

The reference helpers here deliberately avoid the package's own path and
cycle enumerators: they go through networkx or plain brute force.
"""

from __future__ import annotations

from itertools import combinations, product

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from grenoble.generators import gen_even_prism, gen_extended, load_corpus
from grenoble.graph import Graph

settings.register_profile(
    "repo",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges())
    return h


def ref_chordless_paths(g: Graph, a: int, b: int) -> set[tuple[int, ...]]:
    """Every simple a-b path of networkx, kept when it has no chord."""
    out = set()
    for p in nx.all_simple_paths(to_nx(g), a, b):
        if all(not g.has_edge(p[i], p[j]) for i in range(len(p)) for j in range(i + 2, len(p))):
            out.add(tuple(p))
    return out


def ref_holes(g: Graph) -> set[frozenset[int]]:
    """Vertex sets of chordless cycles of length >= 4, by brute force over subsets."""
    out = set()
    for k in range(4, g.n + 1):
        for s in combinations(g.vertices, k):
            sub = g.induced(s)
            if all(sub.degree(v) == 2 for v in s) and nx.is_connected(to_nx(sub)):
                out.add(frozenset(s))
    return out


def ref_chromatic(g: Graph) -> int:
    """Smallest k with a proper k-coloring, by trying every assignment."""
    vs = list(g.vertices)
    for k in range(0 if not vs else 1, len(vs) + 1):
        for cols in product(range(k), repeat=len(vs)):
            a = dict(zip(vs, cols))
            if all(a[u] != a[v] for u, v in g.edges()):
                return k
    return 0


def ref_omega(g: Graph) -> int:
    return max((len(c) for c in nx.find_cliques(to_nx(g))), default=0)


def ref_is_even_pair(g: Graph, a: int, b: int) -> bool:
    return all(len(p) % 2 == 1 for p in ref_chordless_paths(g, a, b))


@st.composite
def graphs(draw, min_n: int = 0, max_n: int = 8):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(range(n), [e for e, keep in zip(pairs, mask) if keep])


_PRISM_LENGTHS = [(2, 2, 2), (2, 2, 4), (2, 4, 4), (4, 4, 4), (2, 2, 6)]


@st.composite
def accepted_graphs(draw):
    """Class members: an even prism plus a few random extra vertices."""
    base = gen_even_prism(draw(st.sampled_from(_PRISM_LENGTHS)))
    extra = draw(st.integers(0, 3))
    if extra == 0:
        return base
    g = gen_extended(base, extra, draw(st.sampled_from((0.2, 0.35, 0.5))), draw(st.integers(0, 10**6)), attempts=60)
    return g if g is not None else base


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture
def prism9() -> Graph:
    return gen_even_prism((2, 2, 2))
