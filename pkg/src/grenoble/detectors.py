"""Recognition of the class preconditions with explicit witnesses.

Everything here is exhaustive enumeration, which is only sensible under the
desk-scale vertex cap.  Each negative answer carries a witness that
:meth:`Witness.validate` re-checks with nothing but adjacency lookups.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations

from .errors import InputError, NotInClass
from .graph import (
    Budget,
    Graph,
    Path,
    _as_budget,
    bits,
    iter_chordless_cycles,
    iter_chordless_paths,
    mask_of,
)

WITNESS_KINDS = ("square", "odd_hole", "odd_antihole", "odd_prism", "even_prism", "even_pair", "none")


def is_hole(g: Graph, cycle) -> bool:
    """True iff ``cycle`` (cyclic vertex order) is a chordless cycle of length >= 4."""
    k = len(cycle)
    if k < 4 or len(set(cycle)) != k:
        return False
    for i, u in enumerate(cycle):
        for j in range(i + 1, k):
            consecutive = j == i + 1 or (i == 0 and j == k - 1)
            if g.has_edge(u, cycle[j]) != consecutive:
                return False
    return True


@dataclass(frozen=True)
class Prism:
    """Two triangles joined by three chordless paths, ``paths[i]`` from a_i to b_i."""

    triangle_a: tuple[int, int, int]
    triangle_b: tuple[int, int, int]
    paths: tuple[Path, Path, Path]

    @property
    def parity(self) -> str:
        odd = [p.is_odd for p in self.paths]
        if all(odd):
            return "odd"
        if not any(odd):
            return "even"
        return "mixed"

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(v for p in self.paths for v in p)

    def validate(self, g: Graph) -> bool:
        a, b, ps = self.triangle_a, self.triangle_b, self.paths
        if len(ps) != 3 or any(v not in g for v in self.vertices):
            return False
        if len(set(a) | set(b)) != 6 or not g.is_clique(a) or not g.is_clique(b):
            return False
        if sum(len(p) for p in ps) != len(self.vertices):
            return False
        for i, p in enumerate(ps):
            if p[0] != a[i] or p[-1] != b[i] or not p.is_chordless_in(g):
                return False
        for i, j in combinations(range(3), 2):
            allowed = {frozenset((a[i], a[j])), frozenset((b[i], b[j]))}
            for u in ps[i]:
                for v in ps[j]:
                    if g.has_edge(u, v) and frozenset((u, v)) not in allowed:
                        return False
        return True

    def mismatched_hole(self) -> tuple[int, ...]:
        """For a mixed-parity prism, the odd hole formed by two paths of different parity."""
        ps = self.paths
        for i, j in combinations(range(3), 2):
            if ps[i].is_odd != ps[j].is_odd:
                return tuple(ps[i]) + tuple(ps[j][::-1])
        raise InputError("prism paths all have the same parity")

    def to_json(self) -> dict:
        return {
            "triangle_a": list(self.triangle_a),
            "triangle_b": list(self.triangle_b),
            "paths": [list(p) for p in self.paths],
            "parity": self.parity,
        }


@dataclass(frozen=True)
class Witness:
    kind: str
    vertices: tuple[int, ...] = ()
    paths: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        if self.kind not in WITNESS_KINDS:
            raise InputError(f"unknown witness kind {self.kind!r}")

    def validate(self, g: Graph) -> bool:
        """Re-check the witness against ``g`` by direct adjacency tests."""
        vs = self.vertices
        if any(v not in g for v in vs):
            return False
        if self.kind == "square":
            return len(vs) == 4 and is_hole(g, vs)
        if self.kind == "odd_hole":
            return len(vs) >= 5 and len(vs) % 2 == 1 and is_hole(g, vs)
        if self.kind == "odd_antihole":
            return len(vs) >= 5 and len(vs) % 2 == 1 and is_hole(g.complement(), vs)
        if self.kind in ("odd_prism", "even_prism"):
            prism = prism_from_witness(self)
            want = "odd" if self.kind == "odd_prism" else "even"
            return prism.validate(g) and prism.parity == want
        if self.kind == "even_pair":
            return len(vs) == 2 and not g.has_edge(*vs) and is_even_pair(g, *vs)
        return True

    def to_json(self) -> dict:
        out = {"kind": self.kind, "vertices": list(self.vertices)}
        if self.paths:
            out["paths"] = [list(p) for p in self.paths]
        return out

    @classmethod
    def from_json(cls, data: dict) -> Witness:
        return cls(
            data["kind"],
            tuple(data.get("vertices", ())),
            tuple(tuple(p) for p in data.get("paths", ())),
        )


def prism_witness(prism: Prism) -> Witness:
    kind = {"odd": "odd_prism", "even": "even_prism"}[prism.parity]
    return Witness(kind, tuple(prism.triangle_a + prism.triangle_b), tuple(tuple(p) for p in prism.paths))


def prism_from_witness(w: Witness) -> Prism:
    ps = tuple(Path(p) for p in w.paths)
    return Prism(tuple(p[0] for p in ps), tuple(p[-1] for p in ps), ps)


# -- detectors ---------------------------------------------------------------


def find_square(g: Graph) -> Witness | None:
    """First 4-hole ``u-x-w-y`` in lexicographic order of the pair ``u < w``."""
    nbr = g._nbr
    for u in g.vertices:
        for w in g.vertices:
            if w <= u or nbr[u] >> w & 1:
                continue
            common = nbr[u] & nbr[w]
            for x in bits(common):
                far = common & ~nbr[x] & ~((1 << (x + 1)) - 1)
                if far:
                    y = (far & -far).bit_length() - 1
                    return Witness("square", (u, x, w, y))
    return None


def find_odd_hole(g: Graph, budget: Budget | int | None = None) -> Witness | None:
    for cycle in iter_chordless_cycles(g, 5, "odd", _as_budget(budget, "odd hole search")):
        return Witness("odd_hole", cycle)
    return None


def find_odd_antihole(g: Graph, budget: Budget | int | None = None) -> Witness | None:
    for cycle in iter_chordless_cycles(g.complement(), 5, "odd", _as_budget(budget, "odd antihole search")):
        return Witness("odd_antihole", cycle)
    return None


def is_berge(g: Graph, budget: Budget | int | None = None) -> tuple[bool, Witness | None]:
    budget = _as_budget(budget, "Berge check")
    w = find_odd_hole(g, budget) or find_odd_antihole(g, budget)
    return w is None, w


def triangles(g: Graph) -> list[tuple[int, int, int]]:
    nbr = g._nbr
    out = []
    for u in g.vertices:
        up = nbr[u] & ~((1 << (u + 1)) - 1)
        for v in bits(up):
            for w in bits(up & nbr[v] & ~((1 << (v + 1)) - 1)):
                out.append((u, v, w))
    return out


def _parity_ok(p: tuple, parity: str) -> bool:
    if parity == "any":
        return True
    return (len(p) % 2 == 0) == (parity == "odd")


def _iter_prisms(g: Graph, parity: str, budget: Budget):
    """Yield prisms whose three paths all match ``parity`` ('any' admits mixed)."""
    nbr = g._nbr
    full = g._vmask
    tris = triangles(g)
    for ti, ta in enumerate(tris):
        ma = mask_of(ta)
        for tb in tris[ti + 1 :]:
            mb = mask_of(tb)
            if ma & mb:
                continue
            for perm in permutations(tb):
                # only a_i b_i may cross between the triangles
                if any(nbr[ta[i]] & mb & ~(1 << perm[i]) for i in range(3)):
                    continue
                budget.step()
                base = full & ~ma & ~mb
                ends = [nbr[ta[i]] | nbr[perm[i]] for i in range(3)]
                yield from _prism_paths(g, ta, perm, base, ends, parity, budget)


def _prism_paths(g, ta, tb, base, ends, parity, budget):
    nbr = g._nbr

    def interior_block(p):
        m = 0
        for v in p[1:-1]:
            m |= nbr[v] | (1 << v)
        return m

    allowed1 = base & ~ends[1] & ~ends[2]
    for p1 in iter_chordless_paths(g, ta[0], tb[0], allowed1, budget):
        if not _parity_ok(p1, parity):
            continue
        block1 = interior_block(p1)
        allowed2 = base & ~ends[0] & ~ends[2] & ~block1
        for p2 in iter_chordless_paths(g, ta[1], tb[1], allowed2, budget):
            if parity != "any" and not _parity_ok(p2, parity):
                continue
            block2 = block1 | interior_block(p2)
            allowed3 = base & ~ends[0] & ~ends[1] & ~block2
            for p3 in iter_chordless_paths(g, ta[2], tb[2], allowed3, budget):
                if parity != "any" and not _parity_ok(p3, parity):
                    continue
                yield Prism(tuple(ta), tuple(tb), (Path(p1), Path(p2), Path(p3)))


def find_prism(
    g: Graph, parity: str | None = None, budget: Budget | int | None = None
) -> Prism | None:
    """Find a prism; with ``parity=None`` even prisms are preferred.

    In the unrestricted search a prism whose paths disagree in parity means
    the graph has an odd hole; that hole is raised as :class:`NotInClass`.
    """
    budget = _as_budget(budget, "prism search")
    if parity in ("even", "odd"):
        return next(_iter_prisms(g, parity, budget), None)
    if parity is not None:
        raise InputError(f"unknown parity {parity!r}")
    found = next(_iter_prisms(g, "even", budget), None)
    if found is not None:
        return found
    found = next(_iter_prisms(g, "any", budget), None)
    if found is not None and found.parity == "mixed":
        raise NotInClass(Witness("odd_hole", found.mismatched_hole()))
    return found


def is_even_pair(g: Graph, a: int, b: int, budget: Budget | int | None = None) -> bool:
    """True iff every chordless a-b path has even length."""
    if a == b:
        raise InputError("an even pair needs two distinct vertices")
    g.check_vertices((a, b))
    if g.has_edge(a, b):
        raise InputError(f"{a} and {b} are adjacent")
    for p in iter_chordless_paths(g, a, b, budget=_as_budget(budget, "even pair test")):
        if len(p) % 2 == 0:
            return False
    return True


def odd_chordless_path(g: Graph, a: int, b: int, budget: Budget | int | None = None) -> Path | None:
    for p in iter_chordless_paths(g, a, b, budget=_as_budget(budget, "odd path search")):
        if len(p) % 2 == 0:
            return Path(p)
    return None


def classify(g: Graph, budget: Budget | int | None = None) -> Witness | None:
    """``None`` when ``g`` is a square-free Grenoble graph, else the first violation.

    Checks run in the order square, odd hole, odd antihole, odd prism.
    """
    budget = _as_budget(budget, "classification")
    w = find_square(g)
    if w is not None:
        return w
    w = find_odd_hole(g, budget)
    if w is not None:
        return w
    w = find_odd_antihole(g, budget)
    if w is not None:
        return w
    prism = find_prism(g, "odd", budget)
    if prism is not None:
        return prism_witness(prism)
    return None


def is_accepted(g: Graph, budget: Budget | int | None = None) -> bool:
    return classify(g, budget) is None
