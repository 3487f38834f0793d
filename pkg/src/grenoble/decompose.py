"""Optimal coloring by recursive decomposition along good strips.

Each step finds an even prism, grows it into a maximal hyperprism, takes
even pairs (a_i, b_i) across the smallest good strip, and splits the graph at
the cutset ``M | A1 | B1`` into two smaller induced subgraphs.  Child
colorings are Kempe-recolored so every pair is monochromatic and then glued.
Graphs without prisms are colored by contracting even pairs until a clique
remains.
"""

from __future__ import annotations

import logging
import threading
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from math import comb

from .detectors import classify, find_prism, is_even_pair
from .errors import InputError, LemmaViolation, NotInClass
from .evenpair import (
    ConvergenceWitness,
    StripContext,
    build_all_orders,
    build_context,
    even_pair_sequence,
    find_convergences,
    resolve_convergence,
)
from .graph import MAX_VERTICES, Budget, Graph, Path, _as_budget, connected_components
from .hyperprism import (
    STRIPS,
    Hyperprism,
    check_clique_sides,
    check_local_attachments,
    check_major_completeness,
    cutset_components,
    find_major_neighbors,
    grow_maximal,
)
from .oracle import (
    CliqueWitness,
    Coloring,
    chromatic_number_exact,
    find_any_even_pair,
    max_clique_exact,
    verify_coloring,
)

log = logging.getLogger(__name__)

ORACLE_THRESHOLD = 8
PHASES = ("detect", "grow", "orders", "split", "leaf", "merge")


# -- records ------------------------------------------------------------------


@dataclass
class DecompositionNode:
    vertices: tuple[int, ...]
    m: int
    kind: str  # "decomposition" or "leaf"
    mark: tuple[int, int] | None = None
    cutset: tuple[int, ...] | None = None
    children: tuple[DecompositionNode, ...] = ()
    method: str | None = None  # leaves: clique, oracle, contraction, fallback
    hyperprism: Hyperprism | None = None
    good: int | None = None
    pairs: tuple[tuple[int, int], ...] = ()
    restarts: int = 0

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()

    @property
    def size(self) -> int:
        return sum(1 for _ in self.walk())

    @property
    def depth(self) -> int:
        return 1 + max((c.depth for c in self.children), default=0)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "n": len(self.vertices), "m": self.m, "vertices": list(self.vertices)}
        if self.kind == "leaf":
            out["method"] = self.method
        else:
            out["mark"] = list(self.mark)
            out["cutset"] = list(self.cutset)
            out["good_strip"] = self.good
            out["hyperprism"] = self.hyperprism.to_json()
            out["pairs"] = [list(p) for p in self.pairs]
            out["restarts"] = self.restarts
            out["children"] = [c.to_json() for c in self.children]
        return out


@dataclass(frozen=True)
class ColoredResult:
    coloring: Coloring
    clique: CliqueWitness
    tree: DecompositionNode

    @property
    def num_colors(self) -> int:
        return self.coloring.num_colors

    @property
    def restarts(self) -> int:
        return sum(node.restarts for node in self.tree.walk())

    @property
    def deviations(self) -> int:
        return sum(node.method == "fallback" for node in self.tree.walk())


@dataclass
class Trace:
    """Optional record of intermediate structures, for the structural suites."""

    contexts: list = field(default_factory=list)  # (StripContext, orders)
    resolved: list = field(default_factory=list)  # (StripContext, ConvergenceWitness)
    recolorings: list = field(default_factory=list)  # (graph, before, after, pairs)
    contractions: list = field(default_factory=list)  # (graph, a, b)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def add(self, name: str, item) -> None:
        with self.lock:
            getattr(self, name).append(item)


class Timings:
    def __init__(self):
        self.totals = {p: 0.0 for p in PHASES}
        self._lock = threading.Lock()

    @contextmanager
    def phase(self, name: str):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            with self._lock:
                self.totals[name] += time.perf_counter() - t0


# -- split, recolor, merge ----------------------------------------------------


def split(g: Graph, ctx: StripContext) -> tuple[Graph, Graph, frozenset[int]]:
    """Cut at ``M | A1 | B1``; the side holding C1 is X, everything else is Y."""
    h, s = ctx.hyperprism, ctx.good
    shared = ctx.majors | h.A(s) | h.B(s)
    others = frozenset().union(*(h.S(t) for t in STRIPS if t != s))
    x, y = set(), set()
    for comp in connected_components(g, shared):
        if comp & h.C(s):
            if comp & others:
                raise LemmaViolation(
                    "cutset",
                    "a component holds C1 and another strip",
                    component=sorted(comp),
                    hyperprism=h.to_json(g),
                )
            x |= comp
        else:
            y |= comp
    if not x or not y:
        raise LemmaViolation("cutset", "one side of the split is empty", hyperprism=h.to_json(g))
    for u in x:
        if g.neighbors(u) & y:
            raise LemmaViolation("cutset", "edge across the split", vertex=u)
    return g.without(y), g.without(x), frozenset(shared)


def kempe_component(g: Graph, a: dict[int, int], start: int, i: int, j: int) -> dict[int, int | None]:
    """BFS tree (child -> parent) of the {i, j}-colored component containing ``start``."""
    parent: dict[int, int | None] = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in sorted(g.neighbors(u)):
            if v not in parent and a[v] in (i, j):
                parent[v] = u
                queue.append(v)
    return parent


def _pairs_first(a: dict[int, int], pairs) -> dict[int, int]:
    """Relabel so pair t wears color t, other colors keep their relative order."""
    perm = {}
    for t, (x, _) in enumerate(pairs):
        perm[a[x]] = t
    rest = sorted(set(a.values()) - set(perm))
    for c in rest:
        perm[c] = len(perm)
    return {v: perm[c] for v, c in a.items()}


def recolor_to_pairs(g: Graph, c: Coloring, pairs) -> Coloring:
    """Make each pair monochromatic by Kempe swaps; pair t ends with color t."""
    if not c.is_proper(g):
        raise InputError("coloring is not proper on this graph")
    a = dict(c.assignment)
    k0 = c.num_colors
    for h, (x, y) in enumerate(pairs):
        a = _pairs_first(a, pairs[:h])
        i, j = a[x], a[y]
        if i == j:
            continue
        tree = kempe_component(g, a, x, i, j)
        if y in tree:
            path = [y]
            while tree[path[-1]] is not None:
                path.append(tree[path[-1]])
            raise LemmaViolation(
                "even_pair",
                f"{x} and {y} share a two-colored component, so an odd path joins them",
                odd_path=path[::-1],
            )
        for v in tree:
            a[v] = j if a[v] == i else i
    a = _pairs_first(a, pairs)
    out = Coloring(a)
    if not out.is_proper(g) or out.num_colors != k0:
        raise LemmaViolation("kempe", "recoloring broke properness or the color count")
    return out


def merge(
    c_x: Coloring,
    c_y: Coloring,
    shared,
    pairs,
    g: Graph | None = None,
) -> Coloring:
    """Glue two pair-synchronized colorings that agree up to relabeling on ``shared``.

    The unpaired part of ``shared`` must be a clique, so its colors can be
    matched one to one.
    """
    paired = {v for p in pairs for v in p}
    rest = sorted(set(shared) - paired)
    if g is not None and not g.is_clique(rest):
        raise LemmaViolation("merge_clique", "unpaired cutset vertices are not a clique", vertices=rest)
    perm: dict[int, int] = {}
    for t, (x, y) in enumerate(pairs):
        if not (c_x[x] == c_x[y] == c_y[x] == c_y[y] == t):
            raise InputError(f"pair {t} is not synchronized in both colorings")
        perm[t] = t
    for z in rest:
        cy, cx = c_y[z], c_x[z]
        if perm.get(cy, cx) != cx:
            raise LemmaViolation("merge", f"color of {z} conflicts with an earlier match")
        perm[cy] = cx
    if len(set(perm.values())) != len(perm):
        raise LemmaViolation("merge", "color matching on the cutset is not one to one")
    width = max(c_x.num_colors, c_y.num_colors)
    free = iter(sorted(set(range(width)) - set(perm.values())))
    for cy in sorted(set(c_y.assignment.values()) - set(perm)):
        perm[cy] = next(free)
    out = dict(c_x.assignment)
    for v, cy in c_y.assignment.items():
        if v in out and out[v] != perm[cy]:
            raise LemmaViolation("merge", f"shared vertex {v} ends with two colors")
        out[v] = perm[cy]
    return Coloring(out)


# -- prism-free leaves --------------------------------------------------------


@dataclass(frozen=True)
class LiftStep:
    """``new`` replaced the non-adjacent pair ``a``, ``b``."""

    new: int
    a: int
    b: int


def contract_even_pair(g: Graph, a: int, b: int) -> tuple[Graph, LiftStep]:
    g.check_vertices((a, b))
    if a == b or g.has_edge(a, b):
        raise InputError(f"cannot contract {a} and {b}: they must be distinct and non-adjacent")
    new = max(g.vertices) + 1
    nbrs = (g.neighbors(a) | g.neighbors(b)) - {a, b}
    return g.without((a, b)).with_vertex(new, nbrs), LiftStep(new, a, b)


def lift_coloring(c: Coloring, steps) -> Coloring:
    """Undo contractions: both ends of a pair take the merged vertex's color."""
    if isinstance(steps, LiftStep):
        steps = [steps]
    a = dict(c.assignment)
    for st in reversed(list(steps)):
        col = a.pop(st.new)
        a[st.a] = col
        a[st.b] = col
    return Coloring(a)


def lift_clique(q: CliqueWitness, step: LiftStep, g: Graph) -> CliqueWitness:
    """Replace the merged vertex by whichever original end is complete to the rest.

    One of them always is: otherwise the two ends and two clique members
    form an odd chordless path between an even pair.
    """
    if step.new not in q.members:
        return q
    rest = set(q.members) - {step.new}
    for end in (step.a, step.b):
        if rest <= g.neighbors(end):
            return CliqueWitness(tuple(rest | {end}))
    raise LemmaViolation("even_pair", "neither end of a contracted pair extends the clique")


def _clique_result(g: Graph) -> tuple[Coloring, CliqueWitness]:
    return Coloring({v: i for i, v in enumerate(g.vertices)}), CliqueWitness(g.vertices)


def _contraction_leaf(g: Graph, budget, trace) -> tuple[Coloring, CliqueWitness, str]:
    chain = [g]
    steps = []
    cur = g
    method = "contraction"
    while not cur.is_clique():
        pair = find_any_even_pair(cur, cap=MAX_VERTICES, budget=budget)
        if pair is None:
            log.warning("no even pair in a prism-free %d-vertex graph; using the exact solver", cur.n)
            method = "fallback"
            break
        if trace is not None:
            trace.add("contractions", (cur, *pair))
        cur, st = contract_even_pair(cur, *pair)
        steps.append(st)
        chain.append(cur)
    if method == "fallback":
        _, coloring = chromatic_number_exact(cur, cap=MAX_VERTICES)
        clique = max_clique_exact(cur, cap=MAX_VERTICES)
    else:
        coloring, clique = _clique_result(cur)
    for st, before in zip(reversed(steps), reversed(chain[:-1])):
        clique = lift_clique(clique, st, before)
    return lift_coloring(coloring, steps), clique, method


# -- the recursion ------------------------------------------------------------


def check_structure(g: Graph, h: Hyperprism, majors) -> None:
    """Runtime assertions on a maximal hyperprism; raises on the first failure."""
    bad = check_major_completeness(g, h, majors)
    if bad:
        raise LemmaViolation("major_completeness", "major neighbor misses two A-sets or two B-sets", majors=bad, hyperprism=h.to_json(g))
    sides = check_clique_sides(g, h, majors)
    if not all(sides.values()):
        raise LemmaViolation("clique_sides", "clique-side conclusions fail", checks=sides, hyperprism=h.to_json(g))
    loose = check_local_attachments(g, h, majors)
    if loose:
        comp, att = loose[0]
        raise LemmaViolation("local_attachments", "component with non-local attachments", component=sorted(comp), attachments=sorted(att))
    cutset_components(g, h, majors)


class _Colorer:
    def __init__(self, budget: Budget, oracle_threshold: int, parallel: bool, strict: bool, trace, timings):
        self.budget = budget
        self.threshold = oracle_threshold
        self.parallel = parallel
        self.strict = strict
        self.trace = trace
        self.timings = timings

    def strip_context(self, g: Graph, prism) -> tuple[StripContext, dict, int]:
        with self.timings.phase("grow"):
            h = grow_maximal(g, prism, self.budget)
        restarts = 0
        while True:
            with self.timings.phase("grow"):
                majors = find_major_neighbors(g, h, self.budget)
                if self.strict:
                    check_structure(g, h, majors)
                ctx = build_context(g, h, majors, budget=self.budget)
            with self.timings.phase("orders"):
                conv = find_convergences(ctx)
                orders = conv[0] if conv else build_all_orders(ctx)
                if isinstance(orders, ConvergenceWitness):
                    if self.trace is not None:
                        self.trace.add("resolved", (ctx, orders))
                    h = resolve_convergence(ctx, orders, self.budget)
                    restarts += 1
                    if restarts > g.n:
                        raise LemmaViolation("restart", f"more than {g.n} restarts")
                    continue
            return ctx, orders, restarts

    def leaf(self, g: Graph) -> ColoredResult:
        with self.timings.phase("leaf"):
            if g.is_clique():
                c, q = _clique_result(g)
                method = "clique"
            elif g.n <= self.threshold:
                _, c = chromatic_number_exact(g, cap=MAX_VERTICES)
                q = max_clique_exact(g, cap=MAX_VERTICES)
                method = "oracle"
            else:
                c, q, method = _contraction_leaf(g, self.budget, self.trace)
        node = DecompositionNode(g.vertices, g.m, "leaf", method=method)
        return ColoredResult(c, q, node)

    def color(self, g: Graph) -> ColoredResult:
        if g.n == 0:
            return ColoredResult(Coloring({}), CliqueWitness(()), DecompositionNode((), 0, "leaf", method="clique"))
        if g.is_clique() or g.n <= self.threshold:
            return self.leaf(g)
        with self.timings.phase("detect"):
            prism = find_prism(g, "even", self.budget)
        if prism is None:
            return self.leaf(g)
        ctx, orders, restarts = self.strip_context(g, prism)
        with self.timings.phase("orders"):
            pairs = even_pair_sequence(ctx)
        if self.trace is not None:
            self.trace.add("contexts", (ctx, orders, pairs))
        with self.timings.phase("split"):
            gx, gy, shared = split(g, ctx)
        if self.parallel:
            with ThreadPoolExecutor(max_workers=2) as pool:
                fx, fy = pool.submit(self.color, gx), pool.submit(self.color, gy)
                rx, ry = fx.result(), fy.result()
        else:
            rx, ry = self.color(gx), self.color(gy)
        with self.timings.phase("merge"):
            cx = recolor_to_pairs(gx, rx.coloring, pairs)
            cy = recolor_to_pairs(gy, ry.coloring, pairs)
            if self.trace is not None:
                self.trace.add("recolorings", (gx, rx.coloring, cx, pairs))
                self.trace.add("recolorings", (gy, ry.coloring, cy, pairs))
            merged = merge(cx, cy, shared, pairs, g)
            clique = rx.clique if rx.clique.size >= ry.clique.size else ry.clique
        h, s = ctx.hyperprism, ctx.good
        other = min(t for t in STRIPS if t != s)
        node = DecompositionNode(
            g.vertices,
            g.m,
            "decomposition",
            mark=(min(h.C(s)), min(h.C(other))),
            cutset=tuple(sorted(shared)),
            children=(rx.tree, ry.tree),
            hyperprism=h,
            good=s,
            pairs=tuple(pairs),
            restarts=restarts,
        )
        return ColoredResult(merged, clique, node)


def color(
    g: Graph,
    *,
    oracle_threshold: int = ORACLE_THRESHOLD,
    parallel: bool = False,
    strict: bool = True,
    check: bool = True,
    budget: Budget | int | None = None,
    trace: Trace | None = None,
    timings: Timings | None = None,
) -> ColoredResult:
    """An optimal coloring and a maximum clique of a square-free Grenoble graph.

    With ``check`` the input is classified first and :class:`NotInClass` is
    raised with the witness.  ``strict`` turns on the structural assertions
    on every maximal hyperprism.
    """
    budget = _as_budget(budget, "coloring")
    timings = timings or Timings()
    if check:
        with timings.phase("detect"):
            w = classify(g, budget)
        if w is not None:
            raise NotInClass(w)
    res = _Colorer(budget, oracle_threshold, parallel, strict, trace, timings).color(g)
    if not verify_coloring(g, res.coloring, res.clique):
        raise LemmaViolation("result", "coloring and clique do not certify each other")
    return res


def check_tree_bound(t: DecompositionNode) -> tuple[bool, tuple[int, int] | None]:
    """Marks are pairwise distinct and the node count is at most C(n, 2)."""
    seen = set()
    for node in t.walk():
        if node.mark is None:
            continue
        key = tuple(sorted(node.mark))
        if key in seen:
            return False, key
        seen.add(key)
    return t.size <= max(1, comb(len(t.vertices), 2)), None


def verify_pair_sequence(g: Graph, pairs, budget=None) -> list[tuple[int, int]]:
    """Pairs that are not even once the earlier pairs are deleted."""
    bad = []
    cur = g
    for a, b in pairs:
        if not is_even_pair(cur, a, b, budget):
            bad.append((a, b))
        cur = cur.without((a, b))
    return bad


def tree_stats(t: DecompositionNode) -> dict:
    nodes = list(t.walk())
    return {
        "nodes": len(nodes),
        "decompositions": sum(n.kind == "decomposition" for n in nodes),
        "leaves": sum(n.kind == "leaf" for n in nodes),
        "depth": t.depth,
        "leaf_methods": {
            m: sum(n.method == m for n in nodes)
            for m in ("clique", "oracle", "contraction", "fallback")
        },
        "restarts": sum(n.restarts for n in nodes),
    }
