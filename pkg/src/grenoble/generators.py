"""Instance generators: even prisms, hyperprism graphs, random members, violators.

Everything is a pure function of its arguments; randomness goes through a
``random.Random`` seeded by the caller.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path as FsPath

from .detectors import classify
from .errors import InputError
from .graph import Graph, cycle_graph, read_dimacs, write_dimacs
from .hyperprism import Hyperprism, validate_hyperprism

GEN_KINDS = ("even_prism", "hyperprism", "random_grenoble", "extended", "violator")


@dataclass(frozen=True)
class GenSpec:
    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in GEN_KINDS:
            raise InputError(f"unknown generator kind {self.kind!r}")

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> GenSpec:
        return cls(data["kind"], dict(data.get("params", {})), int(data.get("seed", 0)))


# -- prisms and hyperprisms ---------------------------------------------------


def _check_even(lengths) -> None:
    if len(lengths) != 3:
        raise InputError("need exactly three rung lengths")
    for k in lengths:
        if k < 2 or k % 2:
            raise InputError(f"rung lengths must be even and >= 2, got {k}")


def gen_even_prism(lengths=(2, 2, 2)) -> Graph:
    """Triangles 0,1,2 and the last three ids, joined by paths of the given lengths."""
    lengths = tuple(lengths)
    _check_even(lengths)
    n = 6 + sum(k - 1 for k in lengths)
    a = (0, 1, 2)
    b = (n - 3, n - 2, n - 1)
    edges = [(0, 1), (1, 2), (0, 2), (b[0], b[1]), (b[1], b[2]), (b[0], b[2])]
    nxt = 3
    for i, k in enumerate(lengths):
        path = [a[i]] + list(range(nxt, nxt + k - 1)) + [b[i]]
        nxt += k - 1
        edges += list(zip(path, path[1:]))
    return Graph(range(n), edges, name=f"even_prism_{'_'.join(map(str, lengths))}")


@dataclass(frozen=True)
class StripSpec:
    """One strip of a generated hyperprism.

    ``rungs`` lists ``(a_index, b_index, length)``; each rung gets its own
    interior.  When ``n_c`` is positive the rungs are ignored and the strip
    has ``n_c`` interior vertices wired by ``local_edges``, whose endpoints
    are local indices: A first, then B, then C.
    """

    n_a: int = 1
    n_b: int = 1
    a_clique: bool = True
    b_clique: bool = True
    rungs: tuple[tuple[int, int, int], ...] = ((0, 0, 2),)
    n_c: int = 0
    local_edges: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_json(cls, data) -> StripSpec:
        d = dict(data)
        d["rungs"] = tuple(tuple(r) for r in d.get("rungs", ((0, 0, 2),)))
        d["local_edges"] = tuple(tuple(e) for e in d.get("local_edges", ()))
        return cls(**d)


def hyperprism_layout(strips) -> tuple[Graph, Hyperprism]:
    """The graph and its designated nine sets, without any class check."""
    strips = [s if isinstance(s, StripSpec) else StripSpec.from_json(s) for s in strips]
    if len(strips) != 3:
        raise InputError("need exactly three strips")
    nxt = 0
    edges = []
    sets = []
    a_sets, b_sets = [], []
    for s in strips:
        if s.n_a < 1 or s.n_b < 1 or not (s.rungs or s.n_c):
            raise InputError("each strip needs A, B and at least one rung")
        a = list(range(nxt, nxt + s.n_a))
        nxt += s.n_a
        b = list(range(nxt, nxt + s.n_b))
        nxt += s.n_b
        c = []
        if s.n_c:
            c = list(range(nxt, nxt + s.n_c))
            nxt += s.n_c
            local = a + b + c
            for x, y in s.local_edges:
                if not (0 <= x < len(local) and 0 <= y < len(local)):
                    raise InputError("local edge index out of range")
                edges.append((local[x], local[y]))
        for ai, bi, k in s.rungs if not s.n_c else ():
            if k < 2 or k % 2:
                raise InputError(f"rung lengths must be even and >= 2, got {k}")
            if not (0 <= ai < s.n_a and 0 <= bi < s.n_b):
                raise InputError("rung end index out of range")
            inner = list(range(nxt, nxt + k - 1))
            nxt += k - 1
            c += inner
            path = [a[ai]] + inner + [b[bi]]
            edges += list(zip(path, path[1:]))
        for side, clique in ((a, s.a_clique), (b, s.b_clique)):
            if clique:
                edges += [(x, y) for k, x in enumerate(side) for y in side[k + 1 :]]
        a_sets.append(a)
        b_sets.append(b)
        sets.append((set(a), set(c), set(b)))
    for i in range(3):
        for j in range(i + 1, 3):
            edges += [(x, y) for x in a_sets[i] for y in a_sets[j]]
            edges += [(x, y) for x in b_sets[i] for y in b_sets[j]]
    return Graph(range(nxt), edges), Hyperprism.from_strips(sets)


def gen_hyperprism_graph(strips) -> Graph:
    """A graph whose designated sets form a hyperprism; rejects specs leaving the class."""
    strips = [s if isinstance(s, StripSpec) else StripSpec.from_json(s) for s in strips]
    for side in ("a", "b"):
        loose = [
            i + 1 for i, s in enumerate(strips)
            if getattr(s, f"n_{side}") > 1 and not getattr(s, f"{side}_clique")
        ]
        if len(loose) > 1:
            raise InputError(
                f"{side.upper()}{loose[0]} and {side.upper()}{loose[1]} are both non-cliques: "
                "two non-adjacent vertices from each induce a square"
            )
    g, h = hyperprism_layout(strips)
    report = validate_hyperprism(g, h)
    if not report:
        raise InputError(f"designated sets fail the hyperprism axioms: {report.message}")
    w = classify(g)
    if w is not None:
        raise InputError(f"spec produces a {w.kind} at {list(w.vertices)}")
    return g.__class__(g.vertices, g.edges(), name="hyperprism")


# -- random members -----------------------------------------------------------


def _gnp(rng: random.Random, n: int, p: float) -> list[tuple[int, int]]:
    return [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]


def gen_random_grenoble(
    n: int, p: float, seed: int = 0, attempts: int = 200
) -> Graph | None:
    """Rejection-sample G(n, p) until a class member appears; ``None`` if none does."""
    if n > 40:
        raise InputError("random sampling is limited to 40 vertices")
    rng = random.Random(seed)
    for _ in range(attempts):
        g = Graph(range(n), _gnp(rng, n, p))
        if classify(g) is None:
            return g
    return None


def gen_extended(
    base: Graph, extra: int, p: float, seed: int = 0, attempts: int = 400
) -> Graph | None:
    """Add ``extra`` vertices with random edges to ``base`` and keep a class member."""
    rng = random.Random(seed)
    n0 = base.n
    for _ in range(attempts):
        g = base
        for k in range(extra):
            v = n0 + k
            g = g.with_vertex(v, [u for u in g.vertices if rng.random() < p])
        if classify(g) is None:
            return g
    return None


def gen_violator(kind: str) -> Graph:
    """Smallest graph with the named defect."""
    if kind == "square":
        return cycle_graph(4)
    if kind == "odd_hole":
        return cycle_graph(5)
    if kind == "odd_prism":
        # path lengths 1, 3, 3: two length-1 paths would close a square
        tri = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]
        paths = [(0, 3), (1, 6), (6, 7), (7, 4), (2, 8), (8, 9), (9, 5)]
        return Graph(range(10), tri + paths, name="odd_prism")
    raise InputError(f"unknown violator kind {kind!r}")


def generate(spec: GenSpec) -> Graph | None:
    p = spec.params
    if spec.kind == "even_prism":
        return gen_even_prism(p["lengths"])
    if spec.kind == "hyperprism":
        return gen_hyperprism_graph(p["strips"])
    if spec.kind == "random_grenoble":
        return gen_random_grenoble(p["n"], p["p"], spec.seed, p.get("attempts", 200))
    if spec.kind == "extended":
        base = generate(GenSpec.from_json(p["base"]))
        if base is None:
            return None
        return gen_extended(base, p["extra"], p["p"], spec.seed, p.get("attempts", 400))
    return gen_violator(p["kind"])


# -- corpus -------------------------------------------------------------------

_EVEN = (2, 4, 6, 8)

_STRIP_MENU = [
    {"n_a": 1, "n_b": 1, "rungs": [[0, 0, 2]]},
    {"n_a": 1, "n_b": 1, "rungs": [[0, 0, 4]]},
    {"n_a": 2, "n_b": 2, "rungs": [[0, 0, 4], [1, 1, 2]]},
    {"n_a": 2, "n_b": 2, "rungs": [[0, 0, 2], [1, 1, 2]]},
    {"n_a": 2, "n_b": 2, "rungs": [[0, 1, 2], [1, 0, 4]]},
    {"n_a": 1, "n_b": 2, "b_clique": False, "rungs": [[0, 0, 2], [0, 1, 4]]},
    {"n_a": 2, "n_b": 1, "a_clique": False, "rungs": [[0, 0, 2], [1, 0, 2]]},
    {"n_a": 1, "n_b": 2, "b_clique": False, "rungs": [[0, 0, 2], [0, 1, 2]]},
    {"n_a": 3, "n_b": 3, "rungs": [[0, 0, 2], [1, 1, 2], [2, 2, 4]]},
    {"n_a": 1, "n_b": 1, "rungs": [[0, 0, 4], [0, 0, 6]]},
]

# A = {0, 1}, B = {2, 3}, C = {4, 5}; vertex 4 sees all of A and B
_WIDE_STRIPS = [
    {"n_a": 2, "n_b": 2, "n_c": 2, "rungs": [],
     "local_edges": [[0, 4], [0, 5], [1, 4], [2, 4], [2, 5], [3, 4], [4, 5]]},
    {"n_a": 2, "n_b": 2, "n_c": 2, "rungs": [],
     "local_edges": [[0, 4], [1, 4], [1, 5], [2, 4], [2, 5], [3, 4], [4, 5]]},
    {"n_a": 2, "n_b": 2, "n_c": 2, "rungs": [],
     "local_edges": [[0, 4], [0, 5], [1, 4], [1, 5], [2, 4], [2, 5], [3, 4], [4, 5]]},
]


def corpus_specs(seed: int = 0) -> list[GenSpec]:
    """Candidate specs; some random ones may yield nothing and are skipped."""
    rng = random.Random(seed)
    specs = []
    for i, x in enumerate(_EVEN):
        for j, y in enumerate(_EVEN[i:], i):
            for z in _EVEN[j:]:
                if 6 + x + y + z - 3 <= 24:
                    specs.append(GenSpec("even_prism", {"lengths": [x, y, z]}))
    menu = range(len(_STRIP_MENU))
    seen = set()
    while len(seen) < 45:
        pick = tuple(sorted(rng.choice(menu) for _ in range(3)))
        if pick in seen:
            continue
        seen.add(pick)
        strips = [_STRIP_MENU[k] for k in pick]
        specs.append(GenSpec("hyperprism", {"strips": strips}))
    for k in range(140):
        n = rng.randint(6, 12)
        p = rng.choice((0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8))
        specs.append(GenSpec("random_grenoble", {"n": n, "p": p}, seed=rng.randrange(2**31)))
    # every strip with two-vertex sides, so the good strip has |A1| >= 2
    wide = (1, 3, 4, 8)
    for i, x in enumerate(wide):
        for j, y in enumerate(wide[i:], i):
            for z in wide[j:]:
                strips = [_STRIP_MENU[k] for k in (x, y, z)]
                specs.append(GenSpec("hyperprism", {"strips": strips}))
    # strips whose orders are non-trivial; all three wide so the good strip is too
    for x, y, z in ((0, 0, 0), (0, 1, 2), (1, 1, 2), (2, 2, 0), (0, 0, 1), (1, 2, 2)):
        strips = [_WIDE_STRIPS[k] for k in (x, y, z)]
        specs.append(GenSpec("hyperprism", {"strips": strips}))
    bases = [s for s in specs if s.kind in ("even_prism", "hyperprism")]
    wide = bases[-6:]
    for k in range(40):
        specs.append(
            GenSpec(
                "extended",
                {"base": rng.choice(wide).to_json(), "extra": rng.randint(1, 4), "p": rng.choice((0.2, 0.3, 0.5))},
                seed=rng.randrange(2**31),
            )
        )
    for k in range(200):
        base = rng.choice(bases)
        extra = rng.randint(1, 4)
        p = rng.choice((0.15, 0.25, 0.35, 0.5))
        specs.append(
            GenSpec("extended", {"base": base.to_json(), "extra": extra, "p": p}, seed=rng.randrange(2**31))
        )
    return specs


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    spec: GenSpec
    graph: Graph

    def to_manifest(self) -> dict:
        return {
            "name": self.name,
            "file": f"{self.name}.dimacs",
            "spec": self.spec.to_json(),
            "n": self.graph.n,
            "m": self.graph.m,
            "sha256": self.graph.digest(),
        }


def build_corpus(seed: int = 0, n_min: int = 6, n_max: int = 24) -> list[CorpusEntry]:
    out = []
    digests = set()
    for spec in corpus_specs(seed):
        try:
            g = generate(spec)
        except InputError:
            continue
        if g is None or not n_min <= g.n <= n_max or g.digest() in digests:
            continue
        digests.add(g.digest())
        name = f"{len(out):03d}_{spec.kind}"
        out.append(CorpusEntry(name, spec, Graph(g.vertices, g.edges(), name=name)))
    return out


def write_corpus(entries: list[CorpusEntry], directory) -> None:
    d = FsPath(directory)
    d.mkdir(parents=True, exist_ok=True)
    for e in entries:
        (d / f"{e.name}.dimacs").write_text(write_dimacs(e.graph))
    manifest = [e.to_manifest() for e in entries]
    (d / "manifest.json").write_text(json.dumps(manifest, indent=1) + "\n")


def load_corpus(directory=None) -> list[CorpusEntry]:
    """Read the frozen corpus; defaults to the copy shipped with the package."""
    if directory is None:
        root = resources.files("grenoble") / "data" / "corpus"
    else:
        root = FsPath(directory)
    manifest = json.loads((root / "manifest.json").read_text())
    out = []
    for item in manifest:
        g = read_dimacs((root / item["file"]).read_text(), name=item["name"])
        if g.digest() != item["sha256"]:
            raise InputError(f"corpus file {item['file']} does not match its hash")
        out.append(CorpusEntry(item["name"], GenSpec.from_json(item["spec"]), g))
    return out

