"""Immutable simple graphs and the chordless-structure primitives.

Vertices are non-negative integers.  Adjacency is kept twice: as frozensets
for readable set algebra and as integer bitmasks (bit ``v`` set for neighbor
``v``) for the enumeration loops, which dominate running time.
"""

from __future__ import annotations

import hashlib
import os
from collections.abc import Iterable, Iterator

from .errors import BudgetExceeded, InputError

DEFAULT_BUDGET = 10**6

#: Hard cap on input size; every exhaustive routine assumes desk-scale graphs.
MAX_VERTICES = 64


def default_budget() -> int:
    env = os.environ.get("GRENOBLE_BUDGET")
    if env:
        return int(env)
    return DEFAULT_BUDGET


class Budget:
    """Step counter for one enumeration call."""

    __slots__ = ("limit", "what", "used")

    def __init__(self, limit: int | None = None, what: str = "enumeration"):
        self.limit = default_budget() if limit is None else limit
        if self.limit <= 0:
            raise InputError("budget must be positive")
        self.what = what
        self.used = 0

    def step(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise BudgetExceeded(self.what, self.limit)


def _as_budget(budget: Budget | int | None, what: str) -> Budget:
    if isinstance(budget, Budget):
        return budget
    return Budget(budget, what)


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class Graph:
    """A simple undirected graph with stable integer vertex ids."""

    __slots__ = ("_vertices", "_adj", "_nbr", "_vmask", "name", "_m")

    def __init__(
        self,
        vertices: Iterable[int],
        edges: Iterable[tuple[int, int]] = (),
        name: str | None = None,
    ):
        vs = sorted(set(vertices))
        if vs and vs[0] < 0:
            raise InputError("vertex ids must be non-negative")
        adj: dict[int, set[int]] = {v: set() for v in vs}
        for u, v in edges:
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if u not in adj or v not in adj:
                raise InputError(f"edge ({u}, {v}) uses an unknown vertex")
            adj[u].add(v)
            adj[v].add(u)
        self._vertices = tuple(vs)
        self._adj = {v: frozenset(ns) for v, ns in adj.items()}
        self._nbr = {v: mask_of(ns) for v, ns in adj.items()}
        self._vmask = mask_of(vs)
        self._m = sum(len(ns) for ns in adj.values()) // 2
        self.name = name

    @classmethod
    def _from_masks(cls, nbr: dict[int, int], name: str | None = None) -> Graph:
        g = cls.__new__(cls)
        g._vertices = tuple(sorted(nbr))
        g._nbr = dict(nbr)
        g._adj = {v: frozenset(bits(m)) for v, m in nbr.items()}
        g._vmask = mask_of(g._vertices)
        g._m = sum(m.bit_count() for m in nbr.values()) // 2
        g.name = name
        return g

    # -- basic queries ----------------------------------------------------

    @property
    def vertices(self) -> tuple[int, ...]:
        return self._vertices

    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def m(self) -> int:
        return self._m

    @property
    def vertex_mask(self) -> int:
        return self._vmask

    def __len__(self) -> int:
        return len(self._vertices)

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def __iter__(self) -> Iterator[int]:
        return iter(self._vertices)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def nbr_mask(self, v: int) -> int:
        return self._nbr[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in self._vertices for v in sorted(self._adj[u]) if u < v]

    def is_clique(self, vs: Iterable[int] | None = None) -> bool:
        vs = list(self._vertices if vs is None else vs)
        m = mask_of(vs)
        return all((self._nbr[v] | (1 << v)) & m == m for v in vs)

    def is_stable(self, vs: Iterable[int]) -> bool:
        vs = list(vs)
        m = mask_of(vs)
        return all(not self._nbr[v] & m for v in vs)

    def check_vertices(self, vs: Iterable[int]) -> frozenset[int]:
        s = frozenset(vs)
        unknown = s - self._adj.keys()
        if unknown:
            raise InputError(f"unknown vertex ids: {sorted(unknown)}")
        return s

    # -- derived graphs ---------------------------------------------------

    def induced(self, vs: Iterable[int]) -> Graph:
        s = self.check_vertices(vs)
        keep = mask_of(s)
        return Graph._from_masks({v: self._nbr[v] & keep for v in s}, self.name)

    def without(self, vs: Iterable[int]) -> Graph:
        return self.induced(set(self._vertices) - set(vs))

    def complement(self) -> Graph:
        full = self._vmask
        return Graph._from_masks(
            {v: full & ~self._nbr[v] & ~(1 << v) for v in self._vertices},
            None if self.name is None else f"co-{self.name}",
        )

    def with_vertex(self, v: int, nbrs: Iterable[int]) -> Graph:
        if v in self._adj:
            raise InputError(f"vertex {v} already present")
        nbrs = self.check_vertices(nbrs)
        nm = dict(self._nbr)
        for u in nbrs:
            nm[u] |= 1 << v
        nm[v] = mask_of(nbrs)
        return Graph._from_masks(nm, self.name)

    def with_edges(self, edges: Iterable[tuple[int, int]]) -> Graph:
        return Graph(self._vertices, self.edges() + list(edges), self.name)

    def relabeled(self) -> tuple[Graph, dict[int, int]]:
        """Return a copy on ids ``0..n-1`` plus the old-to-new id map."""
        mapping = {v: i for i, v in enumerate(self._vertices)}
        g = Graph(
            range(self.n),
            [(mapping[u], mapping[v]) for u, v in self.edges()],
            self.name,
        )
        return g, mapping

    # -- identity ---------------------------------------------------------

    def _key(self):
        return (self._vertices, tuple(self.edges()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._vertices == other._vertices and self._nbr == other._nbr

    def __hash__(self) -> int:
        return hash(self._key())

    def digest(self) -> str:
        """SHA-256 of the canonical vertex/edge listing (name excluded)."""
        h = hashlib.sha256()
        h.update(" ".join(map(str, self._vertices)).encode())
        h.update(b"|")
        h.update(";".join(f"{u},{v}" for u, v in self.edges()).encode())
        return h.hexdigest()

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<Graph{label} n={self.n} m={self.m}>"


class Path(tuple):
    """A vertex sequence; ``length`` counts edges."""

    __slots__ = ()

    @property
    def length(self) -> int:
        return len(self) - 1

    @property
    def is_odd(self) -> bool:
        return len(self) % 2 == 0

    @property
    def interior(self) -> tuple[int, ...]:
        return tuple(self[1:-1])

    def reversed(self) -> Path:
        return Path(self[::-1])

    def is_path_in(self, g: Graph) -> bool:
        return len(set(self)) == len(self) and all(
            g.has_edge(u, v) for u, v in zip(self, self[1:])
        )

    def is_chordless_in(self, g: Graph) -> bool:
        if not self.is_path_in(g):
            return False
        for i, u in enumerate(self):
            for v in self[i + 2 :]:
                if g.has_edge(u, v):
                    return False
        return True

    def __repr__(self) -> str:
        return "Path(" + "-".join(map(str, self)) + ")"


def induced_subgraph(g: Graph, s: Iterable[int]) -> Graph:
    return g.induced(s)


def is_complete_to(g: Graph, x: int, t: Iterable[int]) -> bool:
    t = g.check_vertices(t)
    if x in t:
        raise InputError(f"vertex {x} belongs to the target set")
    return t <= g.neighbors(x)


def is_anticomplete_to(g: Graph, x: int, t: Iterable[int]) -> bool:
    t = g.check_vertices(t)
    if x in t:
        raise InputError(f"vertex {x} belongs to the target set")
    return not (t & g.neighbors(x))


def iter_chordless_paths(
    g: Graph,
    a: int,
    b: int,
    allowed: int | None = None,
    budget: Budget | int | None = None,
) -> Iterator[tuple[int, ...]]:
    """Yield chordless a-b paths as tuples, interior restricted to ``allowed``.

    ``allowed`` is a vertex bitmask (default: all vertices).  Paths come out in
    lexicographic order of their vertex sequences.
    """
    budget = _as_budget(budget, "chordless paths")
    nbr = g._nbr
    bbit = 1 << b
    if nbr[a] & bbit:
        budget.step()
        yield (a, b)
        return
    if allowed is None:
        allowed = g._vmask
    allowed &= ~(1 << a)
    path = [a]
    stack = [(nbr[a] & allowed, nbr[a] | (1 << a))]
    while stack:
        cand, blocked = stack[-1]
        if not cand:
            stack.pop()
            path.pop()
            continue
        low = cand & -cand
        stack[-1] = (cand ^ low, blocked)
        c = low.bit_length() - 1
        budget.step()
        if nbr[c] & bbit:
            yield (*path, c, b)
            continue
        path.append(c)
        stack.append((nbr[c] & allowed & ~blocked, blocked | nbr[c] | low))


def enumerate_chordless_paths(
    g: Graph, a: int, b: int, budget: Budget | int | None = None
) -> list[Path]:
    """Every chordless path from ``a`` to ``b``, each exactly once."""
    if a == b:
        raise InputError("path ends must differ")
    g.check_vertices((a, b))
    return [Path(p) for p in iter_chordless_paths(g, a, b, budget=budget)]


def iter_chordless_cycles(
    g: Graph,
    min_len: int = 4,
    parity: str = "any",
    budget: Budget | int | None = None,
) -> Iterator[tuple[int, ...]]:
    """Yield holes once each, rooted at their smallest vertex.

    A cycle ``s, u, ..., w`` is reported with ``u < w`` so reflections and
    rotations collapse to one representative.
    """
    if min_len < 4:
        raise InputError("holes have at least four vertices")
    if parity not in ("odd", "even", "any"):
        raise InputError(f"unknown parity {parity!r}")
    budget = _as_budget(budget, "chordless cycles")
    nbr = g._nbr
    for s in g.vertices:
        higher = g._vmask & ~((1 << (s + 1)) - 1)
        ns = nbr[s] & higher
        around = sorted(bits(ns))
        inner = higher & ~nbr[s]
        for i, u in enumerate(around):
            for w in around[i + 1 :]:
                if nbr[u] >> w & 1:
                    continue
                allowed = inner | (1 << w)
                for p in iter_chordless_paths(g, u, w, allowed, budget):
                    k = len(p) + 1
                    if k < min_len:
                        continue
                    if parity == "odd" and k % 2 == 0:
                        continue
                    if parity == "even" and k % 2 == 1:
                        continue
                    yield (s, *p)


def enumerate_chordless_cycles(
    g: Graph,
    min_len: int = 4,
    parity: str = "any",
    budget: Budget | int | None = None,
) -> list[tuple[int, ...]]:
    return list(iter_chordless_cycles(g, min_len, parity, budget))


def connected_components(g: Graph, removed: Iterable[int] = ()) -> list[frozenset[int]]:
    """Components of ``g`` minus ``removed``, ordered by smallest vertex."""
    left = g._vmask & ~mask_of(removed)
    nbr = g._nbr
    out = []
    while left:
        low = left & -left
        comp = low
        frontier = low
        while frontier:
            v = (frontier & -frontier).bit_length() - 1
            frontier &= frontier - 1
            new = nbr[v] & left & ~comp
            comp |= new
            frontier |= new
        left &= ~comp
        out.append(frozenset(bits(comp)))
    return out


def shortest_path(g: Graph, a: int, b: int, allowed: int | None = None) -> Path | None:
    """BFS path from a to b inside ``allowed``; shortest paths are chordless."""
    if allowed is None:
        allowed = g._vmask
    allowed |= (1 << a) | (1 << b)
    parent = {a: a}
    frontier = [a]
    seen = 1 << a
    while frontier:
        nxt = []
        for v in frontier:
            for w in bits(g._nbr[v] & allowed & ~seen):
                seen |= 1 << w
                parent[w] = v
                if w == b:
                    out = [b]
                    while out[-1] != a:
                        out.append(parent[out[-1]])
                    return Path(out[::-1])
                nxt.append(w)
        frontier = nxt
    return None


# -- serialization ----------------------------------------------------------


def read_dimacs(text: str, name: str | None = None) -> Graph:
    """Parse DIMACS ``.col`` text; vertex ``k`` (1-based) becomes id ``k-1``."""
    n = None
    declared_m = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] == "c":
            if name is None and len(tok) > 2 and tok[1] == "name":
                name = " ".join(tok[2:])
            continue
        if tok[0] == "p":
            if n is not None:
                raise InputError(f"line {lineno}: duplicate problem line")
            if len(tok) != 4 or tok[1] not in ("edge", "col"):
                raise InputError(f"line {lineno}: expected 'p edge <n> <m>'")
            try:
                n, declared_m = int(tok[2]), int(tok[3])
            except ValueError as exc:
                raise InputError(f"line {lineno}: bad counts") from exc
            if n < 0 or n > MAX_VERTICES:
                raise InputError(f"line {lineno}: n={n} outside 0..{MAX_VERTICES}")
            continue
        if tok[0] == "e":
            if n is None:
                raise InputError(f"line {lineno}: edge before problem line")
            if len(tok) != 3:
                raise InputError(f"line {lineno}: expected 'e <u> <v>'")
            try:
                u, v = int(tok[1]), int(tok[2])
            except ValueError as exc:
                raise InputError(f"line {lineno}: bad vertex") from exc
            if not (1 <= u <= n and 1 <= v <= n):
                raise InputError(f"line {lineno}: vertex out of range 1..{n}")
            if u == v:
                raise InputError(f"line {lineno}: self-loop")
            edges.append((u - 1, v - 1))
            continue
        raise InputError(f"line {lineno}: unrecognized record {tok[0]!r}")
    if n is None:
        raise InputError("missing problem line")
    g = Graph(range(n), edges, name)
    if declared_m not in (g.m, len(edges)):
        raise InputError(f"problem line declares {declared_m} edges, found {g.m}")
    return g


def write_dimacs(g: Graph) -> str:
    """Serialize to DIMACS; ids are renumbered 1..n in ascending order."""
    index = {v: i + 1 for i, v in enumerate(g.vertices)}
    lines = []
    if g.name:
        lines.append(f"c name {g.name}")
    lines.append(f"p edge {g.n} {g.m}")
    lines.extend(f"e {index[u]} {index[v]}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def load_dimacs(path: str | os.PathLike) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return read_dimacs(fh.read())


def graph_to_json(g: Graph) -> dict:
    return {
        "name": g.name,
        "vertices": list(g.vertices),
        "adjacency": {str(v): sorted(g.neighbors(v)) for v in g.vertices},
    }


def graph_from_json(data: dict) -> Graph:
    vs = data["vertices"]
    edges = [(int(u), w) for u, ws in data["adjacency"].items() for w in ws]
    g = Graph(vs, edges, data.get("name"))
    for u, ws in data["adjacency"].items():
        if sorted(g.neighbors(int(u))) != sorted(ws):
            raise InputError("adjacency lists are not symmetric")
    return g


# -- small named graphs used by tests, generators and the CLI ----------------


def cycle_graph(k: int, start: int = 0) -> Graph:
    vs = range(start, start + k)
    return Graph(vs, [(start + i, start + (i + 1) % k) for i in range(k)], f"C{k}")


def path_graph(k: int) -> Graph:
    return Graph(range(k), [(i, i + 1) for i in range(k - 1)], f"P{k}")


def complete_graph(k: int) -> Graph:
    return Graph(range(k), [(i, j) for i in range(k) for j in range(i + 1, k)], f"K{k}")


def empty_graph(k: int) -> Graph:
    return Graph(range(k), (), f"E{k}")


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(range(10), outer + spokes + inner, "Petersen")


def triangular_prism() -> Graph:
    """K3 x K2: triangles {0,1,2} and {3,4,5}, rungs i -- i+3."""
    return Graph(
        range(6),
        [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (0, 3), (1, 4), (2, 5)],
        "K3xK2",
    )
