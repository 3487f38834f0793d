import json

import pytest

from grenoble.cli import EXIT_LEMMA, EXIT_MISMATCH, EXIT_NOT_IN_CLASS, EXIT_OK, EXIT_PARSE, main, parse_coloring
from grenoble.errors import LemmaViolation
from grenoble.generators import gen_even_prism
from grenoble.graph import complete_graph, cycle_graph, read_dimacs, write_dimacs
from grenoble.oracle import verify_coloring


@pytest.fixture
def write(tmp_path):
    def _write(name, g_or_text):
        p = tmp_path / name
        p.write_text(g_or_text if isinstance(g_or_text, str) else write_dimacs(g_or_text))
        return str(p)

    return _write


def test_check(write, capsys):
    assert main(["check", write("c5.col", cycle_graph(5))]) == EXIT_NOT_IN_CLASS
    assert json.loads(capsys.readouterr().out)["kind"] == "odd_hole"
    assert main(["check", write("p.col", gen_even_prism())]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "accepted"
    assert main(["check", write("bad.col", "p edge 3 1\ne 1 9\n")]) == EXIT_PARSE
    assert main(["check", "/nonexistent/file.col"]) == EXIT_PARSE


def test_color_prism(write, tmp_path, capsys):
    g = gen_even_prism()
    path = write("p.col", g)
    out = tmp_path / "p.colors"
    tree = tmp_path / "tree.json"
    report = tmp_path / "report.json"
    code = main(["color", path, "-o", str(out), "--tree-out", str(tree), "--report", str(report), "--oracle-threshold", "0"])
    assert code == EXIT_OK
    c, q = parse_coloring(g, out.read_text())
    assert c.num_colors == 3 and q.size == 3 and verify_coloring(g, c, q)
    assert json.loads(tree.read_text())["kind"] == "decomposition"
    rep = json.loads(report.read_text())
    assert rep["num_colors"] == 3 and rep["restarts"] == 0 and rep["tree_bound_ok"]
    assert "timings" not in rep


def test_color_clique_to_stdout(write, capsys):
    assert main(["color", write("k5.col", complete_graph(5))]) == EXIT_OK
    text = capsys.readouterr().out
    assert text.splitlines()[-1] == "clique 1 2 3 4 5"
    assert sorted(line.split()[1] for line in text.splitlines()[:-1]) == ["1", "2", "3", "4", "5"]


def test_color_rejects_c5(write, tmp_path, capsys):
    report = tmp_path / "r.json"
    assert main(["color", write("c5.col", cycle_graph(5)), "--report", str(report)]) == EXIT_NOT_IN_CLASS
    assert json.loads(report.read_text())["outcome"] == "not_in_class"


def test_lemma_violation_maps_to_exit_3(write, monkeypatch, capsys):
    import grenoble.cli as cli

    def boom(*a, **k):
        raise LemmaViolation("merge", "forced", vertices=[1])

    monkeypatch.setattr(cli, "color", boom)
    assert main(["color", write("p.col", gen_even_prism())]) == EXIT_LEMMA
    assert "forced" in capsys.readouterr().err


def test_budget_exhaustion_maps_to_exit_3(write, monkeypatch):
    monkeypatch.setenv("GRENOBLE_BUDGET", "5")
    assert main(["check", write("p.col", gen_even_prism((4, 4, 4)))]) == EXIT_LEMMA


def test_timings_flag(write, tmp_path):
    report = tmp_path / "r.json"
    assert main(["color", write("p.col", gen_even_prism()), "--report", str(report), "--timings", "-o", str(tmp_path / "c")]) == EXIT_OK
    t = json.loads(report.read_text())["timings"]
    assert all(v >= 0 for v in t.values()) and "total" in t


def test_verify(write, tmp_path, capsys):
    g = gen_even_prism()
    gp = write("p.col", g)
    good = tmp_path / "good"
    assert main(["color", gp, "-o", str(good)]) == EXIT_OK
    assert main(["verify", gp, str(good)]) == EXIT_OK
    lines = good.read_text().splitlines()
    v = lines[0].split()[0]
    nb = next(u for u in g.neighbors(0))
    lines[0] = f"{v} {lines[nb].split()[1]}"
    assert main(["verify", gp, write("tampered", "\n".join(lines) + "\n")]) == EXIT_MISMATCH
    short = good.read_text().splitlines()
    short[-1] = " ".join(short[-1].split()[:-1])
    assert main(["verify", gp, write("short", "\n".join(short) + "\n")]) == EXIT_MISMATCH
    assert main(["verify", gp, write("junk", "1 x\n")]) == EXIT_PARSE
    assert main(["verify", gp, write("noclique", "1 1\n")]) == EXIT_PARSE


def test_gen(capsys):
    assert main(["gen", "even-prism", "2", "2", "2"]) == EXIT_OK
    g = read_dimacs(capsys.readouterr().out)
    assert g.n == 9 and g.m == 12
    assert main(["gen", "violator", "odd_hole"]) == EXIT_OK
    assert read_dimacs(capsys.readouterr().out) == cycle_graph(5)
    assert main(["--seed", "1", "gen", "random", "12", "0.2"]) == EXIT_OK
    assert read_dimacs(capsys.readouterr().out).digest() == "34ee18b5406a61d432b4633e85a2378b8376421f1d0faeff0ab3928608892403"
    spec = json.dumps([{"n_a": 2, "n_b": 2, "rungs": [[0, 0, 2], [1, 1, 2]]}, {}, {}])
    assert main(["gen", "hyperprism", spec]) == EXIT_OK
    assert read_dimacs(capsys.readouterr().out).n == 12
    assert main(["gen", "even-prism", "1", "1", "1"]) == EXIT_PARSE


def test_bench(capsys):
    assert main(["bench", "--limit", "5"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    secs = [float(line.split()[-1]) for line in lines[1:-1]]
    assert len(secs) == 5 and all(s >= 0 for s in secs)
    assert lines[-1].startswith("total")


def test_selftest_subset(capsys):
    assert main(["selftest", "--limit", "20"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "graphs checked: 20" in out and "FAIL" not in out


def test_corpus_command(tmp_path, monkeypatch, capsys):
    import grenoble.cli as cli
    from grenoble.generators import load_corpus

    # a stand-in corpus keeps this fast; full regeneration is covered in test_generators
    monkeypatch.setattr(cli, "build_corpus", lambda seed: load_corpus()[:4])
    assert main(["corpus", str(tmp_path / "c")]) == EXIT_OK
    assert "wrote 4 graphs" in capsys.readouterr().out
    assert main(["selftest", "--corpus", str(tmp_path / "c")]) == EXIT_OK


def test_color_is_byte_identical_across_runs(write, tmp_path):
    gp = write("p.col", gen_even_prism((2, 4, 4)))
    outs = []
    for k in range(2):
        files = [tmp_path / f"{name}{k}" for name in ("c", "t", "r")]
        assert main(["color", gp, "-o", str(files[0]), "--tree-out", str(files[1]), "--report", str(files[2])]) == EXIT_OK
        outs.append([f.read_bytes() for f in files])
    assert outs[0] == outs[1]
