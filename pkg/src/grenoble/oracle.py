"""Exponential-time exact solvers used to certify the main algorithm.

Nothing in this module depends on the hyperprism machinery, so its answers
are an independent check on :func:`grenoble.decompose.color`.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from .detectors import is_even_pair
from .errors import InputError
from .graph import Budget, Graph, bits

ORACLE_CAP = 40


@dataclass(frozen=True)
class Coloring:
    """Total map vertex -> color index."""

    assignment: Mapping[int, int]

    @property
    def num_colors(self) -> int:
        return len(set(self.assignment.values()))

    def __getitem__(self, v: int) -> int:
        return self.assignment[v]

    def is_proper(self, g: Graph) -> bool:
        a = self.assignment
        if set(a) != set(g.vertices):
            return False
        return all(a[u] != a[v] for u, v in g.edges())

    def uses_prefix(self) -> bool:
        return set(self.assignment.values()) == set(range(self.num_colors))

    def restricted(self, vs: Iterable[int]) -> Coloring:
        return Coloring({v: self.assignment[v] for v in vs})

    def permuted(self, perm: Mapping[int, int]) -> Coloring:
        return Coloring({v: perm[c] for v, c in self.assignment.items()})

    def normalized(self) -> Coloring:
        """Relabel colors to 0..k-1 in order of first appearance by vertex id."""
        perm: dict[int, int] = {}
        for v in sorted(self.assignment):
            perm.setdefault(self.assignment[v], len(perm))
        return self.permuted(perm)

    def to_json(self) -> dict:
        return {str(v): c for v, c in sorted(self.assignment.items())}


@dataclass(frozen=True)
class CliqueWitness:
    members: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(self.members)))

    @property
    def size(self) -> int:
        return len(self.members)

    def is_clique_of(self, g: Graph) -> bool:
        return all(v in g for v in self.members) and g.is_clique(self.members)


def _check_cap(g: Graph, cap: int) -> None:
    if g.n > cap:
        raise InputError(f"oracle cap exceeded: {g.n} > {cap} vertices")


def max_clique_exact(g: Graph, cap: int = ORACLE_CAP) -> CliqueWitness:
    """A maximum clique; among those, the lexicographically smallest."""
    _check_cap(g, cap)
    nbr = g._nbr
    best: list[tuple[int, ...]] = [()]

    def better(c: tuple[int, ...]) -> bool:
        b = best[0]
        return len(c) > len(b) or (len(c) == len(b) and c < b)

    def expand(r: list[int], p: int, x: int) -> None:
        if not p and not x:
            c = tuple(sorted(r))
            if better(c):
                best[0] = c
            return
        if len(r) + p.bit_count() < len(best[0]):
            return
        pivot = max(bits(p | x), key=lambda u: (nbr[u] & p).bit_count())
        for v in bits(p & ~nbr[pivot]):
            r.append(v)
            expand(r, p & nbr[v], x & nbr[v])
            r.pop()
            p &= ~(1 << v)
            x |= 1 << v

    if g.n:
        expand([], g._vmask, 0)
    return CliqueWitness(best[0])


def greedy_coloring(g: Graph) -> Coloring:
    """First-fit in order of descending degree, then ascending id."""
    order = sorted(g.vertices, key=lambda v: (-g.degree(v), v))
    a: dict[int, int] = {}
    for v in order:
        used = {a[u] for u in g.neighbors(v) if u in a}
        c = 0
        while c in used:
            c += 1
        a[v] = c
    return Coloring(a)


def _k_color(g: Graph, k: int, seed: tuple[int, ...]) -> dict[int, int] | None:
    """DSATUR backtracking for a k-coloring; ``seed`` (a clique) is precolored."""
    nbr = g._nbr
    deg = {v: g.degree(v) for v in g.vertices}
    color: dict[int, int] = {}
    # forbidden[v] = bitmask of colors used by colored neighbors
    forbidden = {v: 0 for v in g.vertices}
    count = {v: {} for v in g.vertices}

    def assign(v: int, c: int) -> None:
        color[v] = c
        for u in bits(nbr[v]):
            cu = count[u]
            cu[c] = cu.get(c, 0) + 1
            forbidden[u] |= 1 << c

    def unassign(v: int) -> None:
        c = color.pop(v)
        for u in bits(nbr[v]):
            cu = count[u]
            cu[c] -= 1
            if not cu[c]:
                del cu[c]
                forbidden[u] &= ~(1 << c)

    for i, v in enumerate(seed):
        assign(v, i)
    full = (1 << k) - 1

    def rec(used: int) -> bool:
        if len(color) == g.n:
            return True
        best_v, best_key = -1, None
        for v in g.vertices:
            if v in color:
                continue
            f = forbidden[v]
            if f & full == full:
                return False
            key = (-f.bit_count(), -deg[v], v)
            if best_key is None or key < best_key:
                best_v, best_key = v, key
        v = best_v
        for c in range(min(k, used + 1)):
            if forbidden[v] >> c & 1:
                continue
            assign(v, c)
            if rec(max(used, c + 1)):
                return True
            unassign(v)
        return False

    return dict(color) if rec(len(seed)) else None


def chromatic_number_exact(g: Graph, cap: int = ORACLE_CAP) -> tuple[int, Coloring]:
    """Optimal coloring by branch and bound between the clique and greedy bounds."""
    _check_cap(g, cap)
    if g.n == 0:
        return 0, Coloring({})
    clique = max_clique_exact(g, cap)
    upper = greedy_coloring(g)
    for k in range(clique.size, upper.num_colors):
        found = _k_color(g, k, clique.members)
        if found is not None:
            c = Coloring(found).normalized()
            return c.num_colors, c
    c = upper.normalized()
    return c.num_colors, c


def verify_coloring(g: Graph, c: Coloring, q: CliqueWitness) -> bool:
    """Proper coloring plus a clique of equal size certifies optimality."""
    return (
        c.is_proper(g)
        and c.uses_prefix()
        and q.is_clique_of(g)
        and c.num_colors == q.size
    )


def find_any_even_pair(
    g: Graph, cap: int = ORACLE_CAP, budget: Budget | int | None = None
) -> tuple[int, int] | None:
    """Lexicographically first non-adjacent pair that is an even pair."""
    _check_cap(g, cap)
    for u in g.vertices:
        for v in g.vertices:
            if v > u and not g.has_edge(u, v) and is_even_pair(g, u, v, budget):
                return (u, v)
    return None
