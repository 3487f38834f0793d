"""Even pairs inside the good strip of a maximal hyperprism.

For b in B1 and a, a' in A1, ``a <_b a'`` holds when some odd chordless path
from a to b has a' as the second vertex.  Such a path is a-a' followed by a
1-rung from a' to b that a does not touch, so every order here is computed
from the 1-rungs alone.  The B-side orders ``<_a`` are the mirror image.

A pair (a, b) where a is maximal for ``<_b`` and b is maximal for ``<_a`` is
an even pair.  Orders only fail to be orders when two 1-rungs converge; a
convergence is turned into a new hyperprism with a smaller good strip.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import permutations

from .errors import InputError, LemmaViolation
from .graph import Budget, Graph, Path, _as_budget
from .hyperprism import (
    STRIPS,
    Hyperprism,
    enumerate_rungs,
    find_major_neighbors,
    grow_maximal,
    is_good_strip,
    select_good_strip,
    validate_hyperprism,
)


@dataclass(frozen=True)
class StripContext:
    """A hyperprism oriented so the good strip has ``|A| <= |B|``."""

    graph: Graph
    hyperprism: Hyperprism
    good: int
    majors: frozenset[int]
    rungs: tuple[Path, ...]
    removed: frozenset[int] = frozenset()

    @property
    def a_side(self) -> tuple[int, ...]:
        return tuple(sorted(self.hyperprism.A(self.good) - self.removed))

    @property
    def b_side(self) -> tuple[int, ...]:
        return tuple(sorted(self.hyperprism.B(self.good) - self.removed))

    @property
    def active_rungs(self) -> tuple[Path, ...]:
        return tuple(r for r in self.rungs if r[0] not in self.removed and r[-1] not in self.removed)

    def without(self, pair) -> StripContext:
        """The same strip inside the graph with ``pair`` deleted."""
        return replace(self, removed=self.removed | frozenset(pair))

    @property
    def current_graph(self) -> Graph:
        return self.graph.without(self.removed) if self.removed else self.graph


def build_context(
    g: Graph,
    h: Hyperprism,
    majors=None,
    good: int | None = None,
    budget: Budget | int | None = None,
) -> StripContext:
    budget = _as_budget(budget, "strip context")
    if majors is None:
        majors = find_major_neighbors(g, h, budget)
    majors = frozenset(majors)
    if good is None:
        good = select_good_strip(g, h, majors)
    elif not is_good_strip(g, h, majors, good):
        raise InputError(f"strip {good} is not good")
    if len(h.A(good)) > len(h.B(good)):
        h = h.mirrored()
    rungs = tuple(enumerate_rungs(g, h, good, budget))
    return StripContext(g, h, good, majors, rungs)


# -- path classification ------------------------------------------------------


def classify_path(ctx: StripContext, p) -> tuple[str, int | None]:
    """Which of the three shapes an A1-B1 chordless path takes.

    Returns ``("one_rung", None)``, ``("interior_rung", i)`` or
    ``("odd_s1_path", None)``; anything else is a structural violation.
    """
    g, h, s = ctx.graph, ctx.hyperprism, ctx.good
    p = Path(p)
    if not (p[0] in h.A(s) and p[-1] in h.B(s) and p.is_chordless_in(g)):
        raise InputError("expected a chordless path from A1 to B1")
    if set(p) & ctx.majors:
        raise InputError("path meets a major neighbor")

    def fail(msg):
        raise LemmaViolation("path_shape", msg, path=list(p), hyperprism=h.to_json(g))

    if not set(p) <= h.vertices:
        fail("path leaves the hyperprism")
    if set(p[1:-1]) <= h.C(s):
        return "one_rung", None
    inner = p[1:-1]
    if len(inner) >= 2:
        for i in STRIPS:
            if inner[0] in h.A(i) and inner[-1] in h.B(i) and set(inner[1:-1]) <= h.C(i):
                return "interior_rung", i
    if p.is_odd and set(p) <= h.S(s) and (p[1] in h.A(s)) != (p[-2] in h.B(s)):
        return "odd_s1_path", None
    fail("path matches none of the three shapes")


# -- orders -------------------------------------------------------------------


@dataclass(frozen=True)
class OrderRelation:
    """``x < y`` for each ``(x, y)`` in ``pairs``, relative to ``base``."""

    base: int
    elements: tuple[int, ...]
    pairs: frozenset[tuple[int, int]]

    def less(self, x: int, y: int) -> bool:
        return (x, y) in self.pairs

    def maximal(self) -> tuple[int, ...]:
        bigger = {x for x, _ in self.pairs}
        return tuple(x for x in self.elements if x not in bigger)

    def down(self, y: int) -> frozenset[int]:
        return frozenset(x for x, z in self.pairs if z == y)

    def antisymmetry_failures(self) -> list[tuple[int, int]]:
        return sorted((x, y) for x, y in self.pairs if x < y and (y, x) in self.pairs)

    def transitivity_failures(self) -> list[tuple[int, int, int]]:
        out = []
        for x, y in sorted(self.pairs):
            for y2, z in sorted(self.pairs):
                if y2 == y and x != z and (x, z) not in self.pairs:
                    out.append((x, y, z))
        return out

    def is_order(self) -> bool:
        return not self.antisymmetry_failures() and not self.transitivity_failures()

    def to_json(self) -> dict:
        return {"base": self.base, "pairs": sorted(map(list, self.pairs))}


@dataclass(frozen=True)
class ConvergenceWitness:
    """Two 1-rungs, both listed from A1 to B1, sharing exactly one end."""

    rung1: Path
    rung2: Path

    @property
    def shared(self) -> int:
        return self.rung1[0] if self.rung1[0] == self.rung2[0] else self.rung1[-1]

    @property
    def size(self) -> int:
        return len(set(self.rung1) | set(self.rung2))

    def key(self):
        return (self.size, tuple(sorted(set(self.rung1) | set(self.rung2))), self.rung1, self.rung2)

    def to_json(self) -> dict:
        return {"rung1": list(self.rung1), "rung2": list(self.rung2)}


def converge(g: Graph, r1, r2) -> bool:
    if r1[-1] == r2[-1] and r1[0] != r2[0]:
        u1, u2 = r1[0], r2[0]
    elif r1[0] == r2[0] and r1[-1] != r2[-1]:
        u1, u2 = r1[-1], r2[-1]
    else:
        return False
    return not (g.neighbors(u1) & (set(r2) - {u2})) and not (g.neighbors(u2) & (set(r1) - {u1}))


def find_convergences(ctx: StripContext) -> list[ConvergenceWitness]:
    """All converging pairs of active 1-rungs, smallest union first."""
    rungs = ctx.active_rungs
    out = [
        ConvergenceWitness(r1, r2)
        for k, r1 in enumerate(rungs)
        for r2 in rungs[k + 1 :]
        if converge(ctx.graph, r1, r2)
    ]
    return sorted(out, key=ConvergenceWitness.key)


def _raw_pairs(ctx: StripContext, base: int) -> set[tuple[int, int]]:
    g = ctx.graph
    pairs = set()
    if base in ctx.hyperprism.B(ctx.good):
        others = ctx.a_side
        for r in ctx.active_rungs:
            if r[-1] != base:
                continue
            tail = set(r[1:])
            for x in others:
                if x != r[0] and not g.neighbors(x) & tail:
                    pairs.add((x, r[0]))
    elif base in ctx.hyperprism.A(ctx.good):
        others = ctx.b_side
        for r in ctx.active_rungs:
            if r[0] != base:
                continue
            head = set(r[:-1])
            for x in others:
                if x != r[-1] and not g.neighbors(x) & head:
                    pairs.add((x, r[-1]))
    else:
        raise InputError(f"{base} is not on either side of the good strip")
    return pairs


def order_less(ctx: StripContext, base: int, x: int, y: int) -> bool:
    """``x <_base y``: an odd chordless path from x to base whose second vertex is y."""
    if base in ctx.removed or x in ctx.removed or y in ctx.removed:
        raise InputError("vertex already removed from the context")
    return (x, y) in _raw_pairs(ctx, base)


def order_less_raw(ctx: StripContext, base: int, x: int, y: int, budget=None) -> bool:
    """Same relation by brute force over all chordless x-base paths."""
    from .graph import iter_chordless_paths

    g = ctx.current_graph
    for p in iter_chordless_paths(g, x, base, budget=_as_budget(budget, "raw order")):
        if len(p) % 2 == 0 and p[1] == y:
            return True
    return False


def build_order(ctx: StripContext, base: int) -> OrderRelation | ConvergenceWitness:
    """The order at ``base``, or the smallest convergence if it is not an order."""
    pairs = _raw_pairs(ctx, base)
    side = ctx.a_side if base in ctx.hyperprism.B(ctx.good) else ctx.b_side
    rel = OrderRelation(base, side, frozenset(pairs))
    if rel.is_order():
        return rel
    conv = find_convergences(ctx)
    if conv:
        return conv[0]
    raise LemmaViolation(
        "order",
        f"relation at {base} is not an order yet no 1-rungs converge",
        order=rel.to_json(),
        hyperprism=ctx.hyperprism.to_json(ctx.graph),
    )


def build_all_orders(ctx: StripContext) -> dict[int, OrderRelation] | ConvergenceWitness:
    orders = {}
    for base in ctx.a_side + ctx.b_side:
        rel = build_order(ctx, base)
        if isinstance(rel, ConvergenceWitness):
            return rel
        orders[base] = rel
    return orders


def twist_failures(ctx: StripContext, orders: dict[int, OrderRelation]) -> list[tuple[int, int, int, int]]:
    """4-tuples (a, u, b, v) with a <_b u and b <_u v but not a <_v u."""
    out = []
    for a, u in permutations(ctx.a_side, 2):
        for b, v in permutations(ctx.b_side, 2):
            if orders[b].less(a, u) and orders[u].less(b, v) and not orders[v].less(a, u):
                out.append((a, u, b, v))
    return out


# -- extraction ---------------------------------------------------------------


def extract_even_pair(ctx: StripContext, orders=None) -> tuple[int, int]:
    """A mutually maximal pair (a, b), found from the largest down-set D(a, b)."""
    if orders is None:
        orders = build_all_orders(ctx)
        if isinstance(orders, ConvergenceWitness):
            raise InputError("orders are not built: two 1-rungs converge")
    a_side, b_side = ctx.a_side, ctx.b_side
    if not a_side or not b_side:
        raise InputError("good strip has no vertices left on one side")

    def d(a, b):
        return orders[b].down(a)

    a, b = max(
        ((x, y) for x in a_side for y in b_side),
        key=lambda t: (len(d(*t)), -t[0], -t[1]),
    )
    for _ in range(len(a_side) * len(b_side) + 1):
        max_b = orders[b].maximal()
        if a not in max_b:
            a = min(u for u in max_b if orders[b].less(a, u))
            continue
        max_a = orders[a].maximal()
        if b in max_a:
            return a, b
        b = min(v for v in max_a if orders[a].less(b, v))
    raise LemmaViolation("mutual_max", "no mutually maximal pair reached", orders={k: v.to_json() for k, v in orders.items()})


def even_pair_sequence(ctx: StripContext) -> list[tuple[int, int]]:
    """|A1| pairs; pair i is an even pair once pairs 1..i-1 are deleted."""
    pairs = []
    cur = ctx
    for _ in range(len(ctx.a_side)):
        orders = build_all_orders(cur)
        if isinstance(orders, ConvergenceWitness):
            raise LemmaViolation(
                "convergence",
                "1-rungs converge after deleting earlier pairs",
                witness=orders.to_json(),
                pairs=pairs,
            )
        pair = extract_even_pair(cur, orders)
        pairs.append(pair)
        cur = cur.without(pair)
    return pairs


# -- convergence resolution ---------------------------------------------------


def _first_touch(g: Graph, path, other) -> int:
    targets = set(other)
    for k, x in enumerate(path):
        if k and g.neighbors(x) & targets:
            return k
    raise LemmaViolation("convergence", "rung never touches the other rung", path=list(path))


def _tighten(g: Graph, u: list[int], v: list[int]) -> list[int] | None:
    """Shortcut ``u`` along ``v`` when its first contact is not at the end."""
    i = _first_touch(g, u, v[1:])
    if i == len(u) - 2:
        return None
    touch = [k for k, y in enumerate(v) if g.has_edge(u[i], y)]
    h, k = touch[0], touch[-1]
    if k != h + 1:
        raise LemmaViolation("convergence", "shortcut produces an odd 1-rung", u=u, v=v)
    new = u[: i + 1] + v[k:]
    return None if new == u else new


def _normalize(g: Graph, u: list[int], v: list[int]) -> tuple[list[int], list[int]]:
    """Make the two rungs share their whole tail after the first contact."""
    for _ in range(2 * g.n + 2):
        i = _first_touch(g, u, v[1:])
        j = _first_touch(g, v, u[1:])
        if u[i + 1 :] == v[j + 1 :]:
            return u, v
        new = _tighten(g, u, v)
        if new is not None:
            u = new
            continue
        new = _tighten(g, v, u)
        if new is None:
            raise LemmaViolation("convergence", "could not align the rung tails", u=u, v=v)
        v = new
    raise LemmaViolation("convergence", "tail alignment did not settle", u=u, v=v)


def convergence_hyperprism(ctx: StripContext, w: ConvergenceWitness) -> Hyperprism:
    """The hyperprism built from a converging pair, before growth."""
    g, h, s = ctx.graph, ctx.hyperprism, ctx.good
    u, v = list(w.rung1), list(w.rung2)
    if not converge(g, u, v):
        raise InputError("the two rungs do not converge")
    if u[0] == v[0]:
        h = h.mirrored()
        u, v = u[::-1], v[::-1]
    u, v = _normalize(g, u, v)
    i = _first_touch(g, u, v[1:])
    j = _first_touch(g, v, u[1:])
    if i % 2 or j % 2:
        raise LemmaViolation("convergence", "odd prism from converging rungs", u=u, v=v)
    others = [t for t in STRIPS if t != s]
    z = set().union(*(h.C(t) | h.B(t) for t in others)) | set(u[i + 2 :])
    new = Hyperprism.from_strips(
        [
            ({u[0]}, set(u[1:i]), {u[i]}),
            ({v[0]}, set(v[1:j]), {v[j]}),
            (h.A(others[0]) | h.A(others[1]), z, {u[i + 1]}),
        ]
    )
    report = validate_hyperprism(g, new)
    if not report:
        raise LemmaViolation("convergence", f"built sets are not a hyperprism: {report.message}", vertices=list(report.vertices))
    return new


def resolve_convergence(ctx: StripContext, w: ConvergenceWitness, budget=None) -> Hyperprism:
    """Replace the hyperprism by a maximal one with a strictly smaller good strip."""
    budget = _as_budget(budget, "convergence resolution")
    g = ctx.graph
    grown = grow_maximal(g, convergence_hyperprism(ctx, w), budget)
    majors = find_major_neighbors(g, grown, budget)
    new_good = select_good_strip(g, grown, majors)
    old_size = len(ctx.hyperprism.S(ctx.good))
    if len(grown.S(new_good)) >= old_size:
        raise LemmaViolation(
            "convergence",
            f"good strip did not shrink ({len(grown.S(new_good))} >= {old_size})",
            old=ctx.hyperprism.to_json(g),
            new=grown.to_json(g),
        )
    return grown
