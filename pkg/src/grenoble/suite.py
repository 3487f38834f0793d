"""Property checks run over a corpus: the self-test behind ``grenoble selftest``.

Each check returns a list of failure descriptions; empty means pass.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import islice

from .decompose import Trace, check_tree_bound, color, verify_pair_sequence
from .detectors import _iter_prisms, classify
from .evenpair import twist_failures
from .graph import Graph, _as_budget
from .hyperprism import (
    check_clique_sides,
    check_even_rungs,
    check_local_attachments,
    check_major_completeness,
    cutset_components,
    find_major_neighbors,
    is_major_certificate,
)
from .errors import LemmaViolation
from .oracle import chromatic_number_exact, max_clique_exact

CHECKS = (
    "oracle_equivalence",
    "structure",
    "orders_and_pairs",
    "bounds",
    "parity",
    "determinism",
)


@dataclass
class SuiteResult:
    graphs: int = 0
    failures: dict[str, list[str]] = field(default_factory=lambda: {c: [] for c in CHECKS})
    counts: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(self.failures.values())

    def bump(self, key: str, k: int = 1) -> None:
        self.counts[key] = self.counts.get(key, 0) + k

    def lines(self) -> list[str]:
        out = []
        for c in CHECKS:
            status = "PASS" if not self.failures[c] else f"FAIL ({len(self.failures[c])})"
            out.append(f"{c:20s} {status}")
        return out


def result_json(res) -> str:
    """Canonical serialization of a coloring run, for byte comparison."""
    return json.dumps(
        {
            "coloring": res.coloring.to_json(),
            "clique": list(res.clique.members),
            "tree": res.tree.to_json(),
        },
        sort_keys=True,
    )


def check_structures(trace: Trace) -> list[str]:
    bad = []
    for ctx, _, _ in trace.contexts:
        g, h = ctx.graph, ctx.hyperprism
        majors = find_major_neighbors(g, h)
        if majors != ctx.majors:
            bad.append(f"major set recomputed differently on {h.to_json()}")
        if check_major_completeness(g, h, majors):
            bad.append(f"major not complete to two A/B sets: {h.to_json()}")
        if any(not is_major_certificate(g, h, x) for x in majors):
            bad.append("major certificate disagrees")
        sides = check_clique_sides(g, h, majors)
        if not all(sides.values()):
            bad.append(f"clique sides {sides}")
        if check_local_attachments(g, h, majors):
            bad.append("non-local attachments")
        try:
            cutset_components(g, h, majors)
        except LemmaViolation as exc:
            bad.append(str(exc))
    return bad


def check_orders(trace: Trace) -> list[str]:
    bad = []
    for ctx, orders, pairs in trace.contexts:
        for base, rel in orders.items():
            if not rel.is_order():
                bad.append(f"relation at {base} is not an order")
        if twist_failures(ctx, orders):
            bad.append("twist property fails")
        if verify_pair_sequence(ctx.graph, pairs):
            bad.append(f"pair sequence {pairs} has a non-even pair")
    for g, before, after, pairs in trace.recolorings:
        if not after.is_proper(g) or after.num_colors != before.num_colors:
            bad.append("recoloring broke properness or count")
        if any(after[a] != after[b] for a, b in pairs):
            bad.append("recoloring left a pair split")
    return bad


def check_parity(g: Graph, trace: Trace, prism_limit: int = 200) -> list[str]:
    bad = []
    for p in islice(_iter_prisms(g, "any", _as_budget(None, "parity scan")), prism_limit):
        if p.parity == "mixed":
            bad.append(f"mixed prism {p.to_json()}")
    for ctx, _, _ in trace.contexts:
        if check_even_rungs(ctx.graph, ctx.hyperprism):
            bad.append("odd rung")
    return bad


def check_graph(g: Graph, result: SuiteResult, *, oracle_threshold: int = 0, determinism: bool = True) -> None:
    name = g.name or g.digest()[:12]
    result.graphs += 1
    fail = result.failures
    if classify(g) is not None:
        fail["oracle_equivalence"].append(f"{name}: not in class")
        return
    trace = Trace()
    try:
        res = color(g, oracle_threshold=oracle_threshold, trace=trace, check=False)
    except LemmaViolation as exc:
        fail["structure"].append(f"{name}: {exc}")
        return
    chi, _ = chromatic_number_exact(g, cap=64)
    omega = max_clique_exact(g, cap=64).size
    if not res.num_colors == chi == omega:
        fail["oracle_equivalence"].append(f"{name}: colors {res.num_colors}, chi {chi}, omega {omega}")
    result.bump("hyperprisms", len(trace.contexts))
    result.bump("restarts", res.restarts)
    result.bump("fallbacks", res.deviations)
    fail["structure"] += [f"{name}: {m}" for m in check_structures(trace)]
    fail["orders_and_pairs"] += [f"{name}: {m}" for m in check_orders(trace)]
    ok, dup = check_tree_bound(res.tree)
    if not ok or res.restarts > g.n:
        fail["bounds"].append(f"{name}: tree bound {ok} dup {dup} restarts {res.restarts}")
    fail["parity"] += [f"{name}: {m}" for m in check_parity(g, trace)]
    if determinism:
        again = color(g, oracle_threshold=oracle_threshold, check=False, parallel=True)
        if result_json(again) != result_json(res):
            fail["determinism"].append(f"{name}: parallel rerun differs")


def run_suite(graphs, *, oracle_threshold: int = 0, progress=None) -> SuiteResult:
    result = SuiteResult()
    for g in graphs:
        check_graph(g, result, oracle_threshold=oracle_threshold)
        if progress:
            progress(g, result)
    return result
