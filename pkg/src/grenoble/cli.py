"""Command-line entry point.

Exit codes: 0 success, 1 verification mismatch, 2 input outside the class,
3 internal structural failure, 64 unreadable input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

from .decompose import ORACLE_THRESHOLD, Timings, check_tree_bound, color, tree_stats
from .detectors import classify
from .errors import BudgetExceeded, InputError, LemmaViolation, NotInClass
from .generators import (
    GenSpec,
    build_corpus,
    gen_even_prism,
    gen_hyperprism_graph,
    gen_random_grenoble,
    gen_violator,
    load_corpus,
    write_corpus,
)
from .graph import Graph, read_dimacs, write_dimacs
from .oracle import CliqueWitness, Coloring, verify_coloring

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_NOT_IN_CLASS = 2
EXIT_LEMMA = 3
EXIT_PARSE = 64


def _read_graph(path: str) -> Graph:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    return read_dimacs(text)


def format_coloring(g: Graph, c: Coloring, q: CliqueWitness) -> str:
    """``<vertex> <color>`` lines (both 1-based) and a final ``clique`` line."""
    index = {v: i + 1 for i, v in enumerate(g.vertices)}
    lines = [f"{index[v]} {c[v] + 1}" for v in g.vertices]
    lines.append("clique " + " ".join(str(index[v]) for v in q.members))
    return "\n".join(lines) + "\n"


def parse_coloring(g: Graph, text: str) -> tuple[Coloring, CliqueWitness]:
    ids = list(g.vertices)
    a = {}
    clique = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        tok = raw.split()
        if not tok or tok[0] == "c":
            continue
        try:
            if tok[0] == "clique":
                clique = CliqueWitness(tuple(ids[int(t) - 1] for t in tok[1:]))
            elif len(tok) == 2:
                v, col = int(tok[0]), int(tok[1])
                if v < 1 or col < 1:
                    raise ValueError
                a[ids[v - 1]] = col - 1
            else:
                raise ValueError
        except (ValueError, IndexError) as exc:
            raise InputError(f"line {lineno}: bad coloring record") from exc
    if clique is None:
        raise InputError("coloring file has no clique line")
    return Coloring(a), clique


def _witness_json(w) -> str:
    return json.dumps(w.to_json(), sort_keys=True)


def cmd_check(args) -> int:
    g = _read_graph(args.graph)
    w = classify(g)
    if w is None:
        print("accepted")
        return EXIT_OK
    print(_witness_json(w))
    return EXIT_NOT_IN_CLASS


def cmd_color(args) -> int:
    g = _read_graph(args.graph)
    timings = Timings()
    t0 = time.perf_counter()
    try:
        res = color(g, parallel=args.parallel, oracle_threshold=args.oracle_threshold, timings=timings)
    except NotInClass as exc:
        print(_witness_json(exc.witness))
        if args.report:
            _write_json(args.report, {"input_sha256": g.digest(), "outcome": "not_in_class", "witness": exc.witness.to_json()})
        return EXIT_NOT_IN_CLASS
    out = format_coloring(g, res.coloring, res.clique)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    if args.tree_out:
        _write_json(args.tree_out, res.tree.to_json())
    if args.report:
        ok, _ = check_tree_bound(res.tree)
        report = {
            "input_sha256": g.digest(),
            "outcome": "colored",
            "n": g.n,
            "m": g.m,
            "num_colors": res.num_colors,
            "clique": list(res.clique.members),
            "restarts": res.restarts,
            "deviations": res.deviations,
            "tree": tree_stats(res.tree),
            "tree_bound_ok": ok,
            "seed": args.seed,
        }
        if args.timings:
            report["timings"] = {k: round(v, 6) for k, v in timings.totals.items()}
            report["timings"]["total"] = round(time.perf_counter() - t0, 6)
        _write_json(args.report, report)
    return EXIT_OK


def _write_json(path: str, data) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=1, sort_keys=True)
        fh.write("\n")


def cmd_verify(args) -> int:
    g = _read_graph(args.graph)
    try:
        with open(args.coloring, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {args.coloring}: {exc.strerror}") from exc
    c, q = parse_coloring(g, text)
    if verify_coloring(g, c, q):
        print(f"ok: {c.num_colors} colors, clique of size {q.size}")
        return EXIT_OK
    print("mismatch: coloring and clique do not certify an optimal coloring")
    return EXIT_MISMATCH


def cmd_gen(args) -> int:
    if args.kind == "even-prism":
        g = gen_even_prism(tuple(int(x) for x in args.params))
    elif args.kind == "violator":
        g = gen_violator(args.params[0] if args.params else "square")
    elif args.kind == "random":
        n, p = int(args.params[0]), float(args.params[1])
        g = gen_random_grenoble(n, p, args.seed)
        if g is None:
            print("no class member found within the attempt budget", file=sys.stderr)
            return EXIT_MISMATCH
    elif args.kind == "hyperprism":
        g = gen_hyperprism_graph(json.loads(args.params[0]))
    else:
        raise InputError(f"unknown generator {args.kind}")
    sys.stdout.write(write_dimacs(g))
    return EXIT_OK


def _corpus(args):
    entries = load_corpus(args.corpus)
    if args.limit:
        entries = entries[: args.limit]
    return entries


def cmd_bench(args) -> int:
    print(f"{'graph':28s} {'n':>3s} {'m':>4s} {'colors':>6s} {'nodes':>5s} {'seconds':>8s}")
    total = 0.0
    for e in _corpus(args):
        t0 = time.perf_counter()
        res = color(e.graph, parallel=args.parallel)
        dt = time.perf_counter() - t0
        total += dt
        print(f"{e.name:28s} {e.graph.n:3d} {e.graph.m:4d} {res.num_colors:6d} {res.tree.size:5d} {dt:8.3f}")
    print(f"total {total:.3f}s")
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .suite import run_suite

    entries = _corpus(args)

    def progress(g, result):
        if args.verbose:
            print(f"  {g.name}: n={g.n}", file=sys.stderr)

    result = run_suite([e.graph for e in entries], progress=progress)
    print(f"graphs checked: {result.graphs}")
    for line in result.lines():
        print(line)
    for key, msgs in result.failures.items():
        for m in msgs[:5]:
            print(f"  {key}: {m}")
    return EXIT_OK if result.ok else EXIT_MISMATCH


def cmd_corpus(args) -> int:
    entries = build_corpus(args.seed)
    write_corpus(entries, args.out)
    print(f"wrote {len(entries)} graphs to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grenoble", description="Optimal coloring of square-free Grenoble graphs.")
    ap.add_argument("--seed", type=int, default=0, help="seed for every random choice (default 0)")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("check", help="classify a DIMACS graph")
    p.add_argument("graph")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("color", help="color a DIMACS graph optimally")
    p.add_argument("graph")
    p.add_argument("-o", "--output", help="write the coloring here instead of stdout")
    p.add_argument("--tree-out", help="write the decomposition tree as JSON")
    p.add_argument("--report", help="write a run report as JSON")
    p.add_argument("--timings", action="store_true", help="include wall-clock phase timings in the report")
    p.add_argument("--parallel", action="store_true", help="color the two halves of each split concurrently")
    p.add_argument("--oracle-threshold", type=int, default=ORACLE_THRESHOLD, help="graphs this small go to the exact solver")
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("verify", help="check a coloring file against a graph")
    p.add_argument("graph")
    p.add_argument("coloring")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="emit a generated graph as DIMACS")
    p.add_argument("kind", choices=("even-prism", "violator", "random", "hyperprism"))
    p.add_argument("params", nargs="*")
    p.set_defaults(func=cmd_gen)

    for name, func, text in (
        ("bench", cmd_bench, "time the coloring over a corpus"),
        ("selftest", cmd_selftest, "run the property suite over a corpus"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("--corpus", help="corpus directory (default: the bundled corpus)")
        p.add_argument("--limit", type=int, default=0)
        p.add_argument("--parallel", action="store_true")
        p.set_defaults(func=func)

    p = sub.add_parser("corpus", help="regenerate a corpus directory")
    p.add_argument("out")
    p.set_defaults(func=cmd_corpus)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotInClass as exc:
        print(_witness_json(exc.witness))
        return EXIT_NOT_IN_CLASS
    except (LemmaViolation, BudgetExceeded) as exc:
        print(f"internal failure: {exc}", file=sys.stderr)
        if isinstance(exc, LemmaViolation) and exc.details:
            print(json.dumps(exc.details, default=str, sort_keys=True), file=sys.stderr)
        return EXIT_LEMMA


if __name__ == "__main__":
    sys.exit(main())
