"""Hyperprisms: representation, validation, growth, majors, strip choice.

Strips are numbered 1, 2, 3.  A hyperprism is stored as nine frozensets in the
order A1, C1, B1, A2, C2, B2, A3, C3, B3.

Growth works on the *profile* (A, C, B) rather than on a fixed split into
strips.  Given a profile, call two of its vertices linked when they are
adjacent through any edge other than an A-A or B-B edge, or when they are
non-adjacent and both in A or both in B.  The classes of the transitive
closure ("atoms") can never be split between strips, and conversely any
grouping of three or more atoms into three strips satisfies the cross-strip
axioms.  So a profile supports a hyperprism iff it has at least three atoms
and inside every atom each vertex lies on an even rung.  This makes
maximality a property of the profile alone, which is what the order on
hyperprisms compares.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from .detectors import Prism, Witness, prism_witness
from .errors import InputError, LemmaViolation, NotInClass
from .graph import (
    Budget,
    Graph,
    Path,
    _as_budget,
    bits,
    connected_components,
    iter_chordless_paths,
    mask_of,
)

STRIPS = (1, 2, 3)
SET_NAMES = ("A1", "C1", "B1", "A2", "C2", "B2", "A3", "C3", "B3")


@dataclass(frozen=True)
class Hyperprism:
    sets: tuple[frozenset[int], ...]

    def __post_init__(self):
        if len(self.sets) != 9:
            raise InputError("a hyperprism has exactly nine sets")
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in self.sets))

    @classmethod
    def from_strips(cls, strips) -> Hyperprism:
        """Build from three ``(A_i, C_i, B_i)`` triples."""
        return cls(tuple(s for strip in strips for s in strip))

    @classmethod
    def from_prism(cls, prism: Prism) -> Hyperprism:
        return cls.from_strips(
            ({p[0]}, set(p[1:-1]), {p[-1]}) for p in prism.paths
        )

    def A(self, i: int) -> frozenset[int]:
        return self.sets[3 * (i - 1)]

    def C(self, i: int) -> frozenset[int]:
        return self.sets[3 * (i - 1) + 1]

    def B(self, i: int) -> frozenset[int]:
        return self.sets[3 * (i - 1) + 2]

    def S(self, i: int) -> frozenset[int]:
        return self.A(i) | self.C(i) | self.B(i)

    def strip(self, i: int) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
        return self.A(i), self.C(i), self.B(i)

    @property
    def A_all(self) -> frozenset[int]:
        return self.A(1) | self.A(2) | self.A(3)

    @property
    def B_all(self) -> frozenset[int]:
        return self.B(1) | self.B(2) | self.B(3)

    @property
    def C_all(self) -> frozenset[int]:
        return self.C(1) | self.C(2) | self.C(3)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset().union(*self.sets)

    @property
    def profile(self) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
        return self.A_all, self.C_all, self.B_all

    def mirrored(self) -> Hyperprism:
        """Swap the A and B side of every strip."""
        return Hyperprism.from_strips((self.B(i), self.C(i), self.A(i)) for i in STRIPS)

    def precedes(self, other: Hyperprism) -> bool:
        """The strict order used for maximality: profile inclusion up to an A/B swap."""
        a, c, b = self.profile
        a2, c2, b2 = other.profile
        if not c <= c2:
            return False
        if a <= a2 and b <= b2:
            return (a, c, b) != (a2, c2, b2)
        if a <= b2 and b <= a2:
            return (a, c, b) != (b2, c2, a2)
        return False

    def to_json(self, g: Graph | None = None) -> dict:
        out = {name: sorted(s) for name, s in zip(SET_NAMES, self.sets)}
        if g is not None:
            out["owner"] = g.digest()
        return out

    @classmethod
    def from_json(cls, data: dict) -> Hyperprism:
        return cls(tuple(frozenset(data[name]) for name in SET_NAMES))


@dataclass(frozen=True)
class Report:
    """Outcome of a structural check; falsy when something failed."""

    ok: bool
    axiom: str | None = None
    message: str = ""
    vertices: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


PASS = Report(True)


# -- rungs --------------------------------------------------------------------


def iter_rungs(g: Graph, a_set, c_set, b_set, budget: Budget) -> list[tuple[int, ...]]:
    """All chordless paths from ``a_set`` to ``b_set`` with interior in ``c_set``."""
    allowed = mask_of(c_set)
    out = []
    for a in sorted(a_set):
        for b in sorted(b_set):
            out.extend(iter_chordless_paths(g, a, b, allowed, budget))
    return out


def enumerate_rungs(
    g: Graph, h: Hyperprism, i: int, budget: Budget | int | None = None
) -> list[Path]:
    """The i-rungs of ``h``; an odd rung means the graph leaves the class."""
    budget = _as_budget(budget, f"{i}-rung enumeration")
    rungs = [Path(r) for r in iter_rungs(g, *h.strip(i), budget)]
    for r in rungs:
        if r.is_odd:
            raise NotInClass(_odd_rung_witness(g, h, i, r, budget))
    return rungs


def _odd_rung_witness(g: Graph, h: Hyperprism, i: int, rung: Path, budget: Budget) -> Witness:
    paths = []
    for j in STRIPS:
        if j == i:
            paths.append(rung)
            continue
        others = iter_rungs(g, *h.strip(j), budget)
        if not others:
            raise LemmaViolation("rung", f"strip {j} has no rung", hyperprism=h.to_json())
        paths.append(Path(others[0]))
    prism = Prism(tuple(p[0] for p in paths), tuple(p[-1] for p in paths), tuple(paths))
    if not prism.validate(g):
        raise LemmaViolation("rung", "odd rung does not extend to a prism", rung=list(rung))
    if prism.parity == "mixed":
        return Witness("odd_hole", prism.mismatched_hole())
    return prism_witness(prism)


def first_instance(g: Graph, h: Hyperprism, budget: Budget | int | None = None) -> Prism:
    budget = _as_budget(budget, "instance")
    paths = tuple(enumerate_rungs(g, h, i, budget)[0] for i in STRIPS)
    return Prism(tuple(p[0] for p in paths), tuple(p[-1] for p in paths), paths)


# -- validation ---------------------------------------------------------------


def validate_hyperprism(
    g: Graph, h: Hyperprism, budget: Budget | int | None = None
) -> Report:
    """Check the four axiom families; report the first failure."""
    budget = _as_budget(budget, "hyperprism validation")
    if any(v not in g for v in h.vertices):
        return Report(False, "vertices", "set member not in graph", tuple(sorted(h.vertices - set(g.vertices))))
    for name, s in zip(SET_NAMES, h.sets):
        if not s:
            return Report(False, "nonempty", f"{name} is empty")
    for (n1, s1), (n2, s2) in combinations(zip(SET_NAMES, h.sets), 2):
        if s1 & s2:
            return Report(False, "disjoint", f"{n1} meets {n2}", tuple(sorted(s1 & s2)))
    for i, j in combinations(STRIPS, 2):
        for u in sorted(h.S(i)):
            for v in sorted(h.S(j)):
                must = (u in h.A(i) and v in h.A(j)) or (u in h.B(i) and v in h.B(j))
                if g.has_edge(u, v) != must:
                    what = "missing" if must else "extra"
                    return Report(False, "cross_edges", f"{what} edge between strips {i} and {j}", (u, v))
    for i in STRIPS:
        covered = set()
        for r in iter_rungs(g, *h.strip(i), budget):
            if len(r) % 2 == 0:
                return Report(False, "even_rungs", f"odd {i}-rung", tuple(r))
            covered.update(r)
        missed = h.S(i) - covered
        if missed:
            return Report(False, "rung_cover", f"vertices of S{i} on no {i}-rung", tuple(sorted(missed)))
    return PASS


# -- profile atoms and growth -------------------------------------------------


def profile_atoms(g: Graph, a: frozenset, c: frozenset, b: frozenset) -> list[frozenset[int]]:
    """Atoms of a profile, ordered by (size, smallest vertex)."""
    verts = sorted(a | b | c)
    parent = {v: v for v in verts}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(u, v):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)

    for u, v in combinations(verts, 2):
        same_side = (u in a and v in a) or (u in b and v in b)
        if g.has_edge(u, v) != same_side:
            union(u, v)
    groups: dict[int, set[int]] = {}
    for v in verts:
        groups.setdefault(find(v), set()).add(v)
    return sorted((frozenset(s) for s in groups.values()), key=lambda s: (len(s), min(s)))


class _ProfileChecker:
    """Caches per-atom rung checks while a profile grows."""

    def __init__(self, g: Graph, budget: Budget):
        self.g = g
        self.budget = budget
        self.cache: dict[tuple, bool] = {}

    def atom_ok(self, atom: frozenset, a: frozenset, c: frozenset, b: frozenset) -> bool:
        key = (atom, atom & a, atom & b)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        aa, cc, bb = atom & a, atom & c, atom & b
        ok = bool(aa and cc and bb)
        if ok:
            covered = set()
            for r in iter_rungs(self.g, aa, cc, bb, self.budget):
                if len(r) % 2 == 0:
                    ok = False
                    break
                covered.update(r)
            ok = ok and covered == atom
        self.cache[key] = ok
        return ok

    def valid(self, a, c, b) -> list[frozenset[int]] | None:
        atoms = profile_atoms(self.g, a, c, b)
        if len(atoms) < 3:
            return None
        for atom in atoms:
            if not self.atom_ok(atom, a, c, b):
                return None
        return atoms


def group_atoms(atoms: list[frozenset[int]], a, c, b) -> Hyperprism:
    """Two smallest atoms become strips of their own; the rest form the third."""
    atoms = sorted(atoms, key=lambda s: (len(s), min(s)))
    groups = [atoms[0], atoms[1], frozenset().union(*atoms[2:])]
    groups.sort(key=min)
    return Hyperprism.from_strips((s & a, s & c, s & b) for s in groups)


def _try_single_vertices(g, chk, a, c, b):
    """One pass of single-vertex additions; returns the grown profile and a flag."""
    grown = False
    inside = a | b | c
    for x in g.vertices:
        if x in inside:
            continue
        nx = g.neighbors(x)
        for role in ("A", "C", "B"):
            if role == "C":
                if not (nx & (a | c) and nx & (b | c)):
                    continue
                cand = (a, c | {x}, b)
            elif role == "A":
                if not nx & c:
                    continue
                cand = (a | {x}, c, b)
            else:
                if not nx & c:
                    continue
                cand = (a, c, b | {x})
            if chk.valid(*cand) is not None:
                a, c, b = cand
                inside = a | b | c
                grown = True
                break
    return (a, c, b), grown


def _try_new_rung(g, chk, a, c, b):
    """Find a chordless path that adds new vertices as a rung of one strip.

    Covers both a rung inside an existing strip and a rung forming a new atom
    complete to all of A and all of B.
    """
    atoms = chk.valid(a, c, b)
    h = group_atoms(atoms, a, c, b)
    inside = a | b | c
    outside = [x for x in g.vertices if x not in inside]
    if not outside:
        return None
    scenarios = []
    for i in STRIPS:
        others = [j for j in STRIPS if j != i]
        oa = frozenset().union(*(h.A(j) for j in others))
        ob = frozenset().union(*(h.B(j) for j in others))
        os_ = frozenset().union(*(h.S(j) for j in others))
        scenarios.append((h.A(i), h.C(i), h.B(i), oa, ob, os_))
    scenarios.append((frozenset(), frozenset(), frozenset(), a, b, a | b | c))
    for ai, ci, bi, oa, ob, os_ in scenarios:
        cand_a, cand_b, cand_c = [], [], []
        for x in outside:
            nx = g.neighbors(x)
            if oa <= nx and not (nx & (os_ - oa)):
                cand_a.append(x)
            if ob <= nx and not (nx & (os_ - ob)):
                cand_b.append(x)
            if not (nx & os_):
                cand_c.append(x)
        if not (cand_a or cand_b or cand_c):
            continue
        new = set(cand_a) | set(cand_b) | set(cand_c)
        allowed = mask_of(ci) | mask_of(cand_c)
        for s in sorted(ai | set(cand_a)):
            for t in sorted(bi | set(cand_b)):
                if s == t or g.has_edge(s, t):
                    continue
                for p in iter_chordless_paths(g, s, t, allowed, chk.budget):
                    added = [v for v in p if v in new]
                    if not added or len(p) % 2 == 0:
                        continue
                    cand = (a | {p[0]} if p[0] in new else a, c | set(p[1:-1]), b | {p[-1]} if p[-1] in new else b)
                    if chk.valid(*cand) is not None:
                        return cand
    return None


def grow_maximal(
    g: Graph, seed: Prism | Hyperprism, budget: Budget | int | None = None
) -> Hyperprism:
    """Grow a hyperprism containing ``seed`` until no augmentation applies.

    Augmentations: adding one outside vertex to A, C or B; adding a chordless
    path of outside vertices that becomes a new rung.  Each step strictly
    enlarges the profile, so at most n steps happen.
    """
    budget = _as_budget(budget, "hyperprism growth")
    if isinstance(seed, Prism):
        if seed.parity != "even" or not seed.validate(g):
            raise InputError("growth needs an even prism of the graph")
        seed = Hyperprism.from_prism(seed)
    elif not validate_hyperprism(g, seed, budget):
        raise InputError("seed hyperprism is not valid in this graph")
    chk = _ProfileChecker(g, budget)
    a, c, b = seed.profile
    if chk.valid(a, c, b) is None:
        raise LemmaViolation("growth", "seed profile fails the atom check", seed=seed.to_json())
    while True:
        (a, c, b), grown = _try_single_vertices(g, chk, a, c, b)
        if grown:
            continue
        cand = _try_new_rung(g, chk, a, c, b)
        if cand is None:
            break
        a, c, b = cand
    atoms = chk.valid(a, c, b)
    if seed.vertices <= a | b | c and _same_atoms_as(seed, atoms):
        # keep the seed's strip layout when growth never merged its strips
        return _extend_layout(seed, atoms, a, c, b)
    return group_atoms(atoms, a, c, b)


def _same_atoms_as(seed: Hyperprism, atoms) -> bool:
    owner = {}
    for k, atom in enumerate(atoms):
        for v in atom:
            owner[v] = k
    strips = [{owner[v] for v in seed.S(i)} for i in STRIPS]
    return all(not (strips[i] & strips[j]) for i, j in combinations(range(3), 2))


def _extend_layout(seed: Hyperprism, atoms, a, c, b) -> Hyperprism:
    groups = [set(), set(), set()]
    spare = []
    for atom in atoms:
        for i in STRIPS:
            if atom & seed.S(i):
                groups[i - 1] |= atom
                break
        else:
            spare.append(atom)
    for atom in spare:
        # atoms born during growth join the largest strip so the small ones stay small
        k = max(range(3), key=lambda t: (len(groups[t]), -t))
        groups[k] |= atom
    return Hyperprism.from_strips((frozenset(s) & a, frozenset(s) & c, frozenset(s) & b) for s in groups)


def is_maximal(g: Graph, h: Hyperprism, budget: Budget | int | None = None) -> bool:
    """No single outside vertex extends the profile (exhaustive over placements)."""
    chk = _ProfileChecker(g, _as_budget(budget, "maximality check"))
    a, c, b = h.profile
    inside = h.vertices
    for x in g.vertices:
        if x in inside:
            continue
        for cand in ((a | {x}, c, b), (a, c | {x}, b), (a, c, b | {x})):
            if chk.valid(*cand) is not None:
                return False
    return True


# -- major neighbors ----------------------------------------------------------


def rung_ends(g: Graph, h: Hyperprism, i: int, budget: Budget) -> set[tuple[int, int]]:
    return {(r[0], r[-1]) for r in iter_rungs(g, *h.strip(i), budget)}


def find_major_neighbors(
    g: Graph, h: Hyperprism, budget: Budget | int | None = None
) -> frozenset[int]:
    """Vertices outside ``h`` with two neighbors in each triangle of some instance.

    Majorness only looks at corners, so it suffices to range over the end
    pairs of rungs in each strip.
    """
    budget = _as_budget(budget, "major neighbors")
    ends = [sorted(rung_ends(g, h, i, budget)) for i in STRIPS]
    inside = h.vertices
    out = set()
    for x in g.vertices:
        if x in inside:
            continue
        nx = g.neighbors(x)
        options = [{(p in nx, q in nx) for p, q in e} for e in ends]
        for combo in product(*options):
            if sum(t[0] for t in combo) >= 2 and sum(t[1] for t in combo) >= 2:
                out.add(x)
                break
    return frozenset(out)


def is_major_certificate(g: Graph, h: Hyperprism, x: int) -> bool:
    """Complete to two A-sets and two B-sets: major for every instance."""
    nx = g.neighbors(x)
    return (
        sum(h.A(i) <= nx for i in STRIPS) >= 2
        and sum(h.B(i) <= nx for i in STRIPS) >= 2
    )


def is_good_strip(g: Graph, h: Hyperprism, majors, i: int) -> bool:
    side = h.A(i) | h.B(i)
    return (
        g.is_clique(h.A(i))
        and g.is_clique(h.B(i))
        and all(side <= g.neighbors(x) for x in majors)
    )


def select_good_strip(g: Graph, h: Hyperprism, majors) -> int:
    """Smallest good strip, ties to the lower index."""
    good = [i for i in STRIPS if is_good_strip(g, h, majors, i)]
    if not good:
        raise LemmaViolation(
            "good_strip",
            "maximal hyperprism has no good strip",
            hyperprism=h.to_json(g),
            majors=sorted(majors),
        )
    return min(good, key=lambda i: (len(h.S(i)), i))


# -- structural validators ---------------------------------------------------


def is_local(h: Hyperprism, xs) -> bool:
    xs = frozenset(xs)
    return any(xs <= s for s in (h.S(1), h.S(2), h.S(3), h.A_all, h.B_all))


def check_local_attachments(g: Graph, h: Hyperprism, majors) -> list[tuple[frozenset, frozenset]]:
    """Components outside ``V(H) | M`` whose attachments in H are not local."""
    inside = h.vertices
    bad = []
    for comp in connected_components(g, inside | frozenset(majors)):
        att = frozenset(v for x in comp for v in g.neighbors(x) if v in inside)
        if not is_local(h, att):
            bad.append((comp, att))
    return bad


def cutset_components(g: Graph, h: Hyperprism, majors) -> list[frozenset[int]]:
    """Components of G - (M | A | B); each C_i must sit in its own components."""
    comps = connected_components(g, frozenset(majors) | h.A_all | h.B_all)
    for comp in comps:
        hit = [i for i in STRIPS if comp & h.C(i)]
        if len(hit) > 1:
            raise LemmaViolation(
                "cutset",
                f"C{hit[0]} and C{hit[1]} share a component",
                component=sorted(comp),
                hyperprism=h.to_json(g),
                majors=sorted(majors),
            )
    return comps


def check_major_completeness(g: Graph, h: Hyperprism, majors) -> list[int]:
    """Majors not complete to two A-sets and two B-sets."""
    return [x for x in sorted(majors) if not is_major_certificate(g, h, x)]


def check_clique_sides(g: Graph, h: Hyperprism, majors) -> dict[str, bool]:
    m = frozenset(majors)

    def complete(s):
        return all(s <= g.neighbors(x) for x in m)

    return {
        "cliques": sum(g.is_clique(h.A(i)) for i in STRIPS) >= 2
        and sum(g.is_clique(h.B(i)) for i in STRIPS) >= 2,
        "majors_complete": sum(complete(h.A(i)) for i in STRIPS) >= 2
        and sum(complete(h.B(i)) for i in STRIPS) >= 2,
        "good_strip": any(is_good_strip(g, h, m, i) for i in STRIPS),
    }


def check_corner_completeness(g: Graph, prism: Prism) -> list[tuple[int, ...]]:
    """Anticonnected sets of size <= 2 breaking the complete-corner conclusion.

    Applies to prisms whose paths all have length at least two.
    """
    if any(p.length < 2 for p in prism.paths):
        return []
    ta, tb = set(prism.triangle_a), set(prism.triangle_b)
    outside = [v for v in g.vertices if v not in prism.vertices]
    cand = [
        v for v in outside
        if len(g.neighbors(v) & ta) >= 2 and len(g.neighbors(v) & tb) >= 2
    ]
    bad = []
    sets = [(v,) for v in cand] + [
        (u, v) for u, v in combinations(cand, 2) if not g.has_edge(u, v)
    ]
    for y in sets:
        ca = sum(all(g.has_edge(t, v) for v in y) for t in ta)
        cb = sum(all(g.has_edge(t, v) for v in y) for t in tb)
        if ca < 2 or cb < 2:
            bad.append(y)
    return bad


def check_even_rungs(g: Graph, h: Hyperprism, budget: Budget | int | None = None) -> list[Path]:
    budget = _as_budget(budget, "rung parity")
    return [
        Path(r) for i in STRIPS for r in iter_rungs(g, *h.strip(i), budget) if len(r) % 2 == 0
    ]


def bits_of(s) -> list[int]:
    return list(bits(mask_of(s)))
