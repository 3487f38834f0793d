from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from grenoble.detectors import classify
from grenoble.errors import InputError
from grenoble.generators import (
    _STRIP_MENU,
    GenSpec,
    StripSpec,
    build_corpus,
    gen_even_prism,
    gen_extended,
    gen_hyperprism_graph,
    gen_random_grenoble,
    gen_violator,
    generate,
    hyperprism_layout,
    load_corpus,
    write_corpus,
)
from grenoble.graph import cycle_graph, write_dimacs
from grenoble.hyperprism import validate_hyperprism


def test_even_prism_sizes():
    g = gen_even_prism((2, 2, 2))
    assert (g.n, g.m) == (9, 12)
    assert g.edges() == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 4), (2, 5), (3, 6), (4, 7), (5, 8), (6, 7), (6, 8), (7, 8)]
    g = gen_even_prism((2, 2, 4))
    assert g.n == 11 and classify(g) is None


@pytest.mark.parametrize("lengths", [(1, 1, 1), (2, 2, 3), (2, 2), (0, 2, 2)])
def test_even_prism_rejects_bad_lengths(lengths):
    with pytest.raises(InputError):
        gen_even_prism(lengths)


def test_singleton_hyperprism_is_the_prism():
    g = gen_hyperprism_graph([StripSpec(), StripSpec(), StripSpec()])
    p = gen_even_prism((2, 2, 2))
    # same graph up to relabeling: compare degree sequences and edge counts, then the layout
    assert sorted(map(g.degree, g.vertices)) == sorted(map(p.degree, p.vertices))
    lay, h = hyperprism_layout([StripSpec()] * 3)
    assert validate_hyperprism(lay, h) and lay.m == 12


def test_wide_clique_strip_is_accepted():
    g, h = hyperprism_layout([_STRIP_MENU[3], _STRIP_MENU[0], _STRIP_MENU[0]])
    assert len(h.A(1)) == 2 and g.is_clique(h.A(1))
    assert validate_hyperprism(g, h) and classify(g) is None
    gen_hyperprism_graph([_STRIP_MENU[3], _STRIP_MENU[0], _STRIP_MENU[0]])


def test_two_loose_a_sides_are_rejected():
    loose = StripSpec(2, 1, a_clique=False, rungs=((0, 0, 2), (1, 0, 2)))
    with pytest.raises(InputError, match="square"):
        gen_hyperprism_graph([loose, loose, StripSpec()])


def test_spec_leaving_the_class_is_rejected():
    # two rungs from adjacent A vertices to one B vertex close a 5-hole
    with pytest.raises(InputError):
        gen_hyperprism_graph([StripSpec(2, 1, rungs=((0, 0, 2), (1, 0, 2))), StripSpec(), StripSpec()])
    with pytest.raises(InputError):
        hyperprism_layout([StripSpec(), StripSpec()])
    with pytest.raises(InputError):
        hyperprism_layout([StripSpec(rungs=((0, 0, 3),)), StripSpec(), StripSpec()])


def test_random_sampler_examples():
    g = gen_random_grenoble(5, 0.0, seed=0)
    assert g.m == 0 and classify(g) is None
    # frozen from a single run of the sampler
    g = gen_random_grenoble(12, 0.2, seed=1)
    assert g.digest() == "34ee18b5406a61d432b4633e85a2378b8376421f1d0faeff0ab3928608892403"
    assert g.m == 13


def test_dense_samples_are_accepted():
    frozen = {
        0: ("b0b474c4550dc743e9276521b23265b84b52a42aa2781eb6502a2b1403d575f2", 40),
        1: ("0d181f62c51ec86b8dd21068fa8e595d9970d156dc8506e992a741e4a8c40a71", 41),
        2: ("e2a861a8d52f86967a80ba522a4ebd87d7b162efe2a1f53fa62b7ba2967018f4", 40),
    }
    for seed, (digest, m) in frozen.items():
        g = gen_random_grenoble(10, 0.9, seed=seed)
        assert (g.digest(), g.m) == (digest, m)
        assert classify(g) is None


def test_sampler_gives_up_with_none():
    assert gen_random_grenoble(8, 0.5, seed=3, attempts=0) is None
    with pytest.raises(InputError):
        gen_random_grenoble(41, 0.5)


@pytest.mark.parametrize("kind,expected_n", [("square", 4), ("odd_hole", 5), ("odd_prism", 10)])
def test_violators(kind, expected_n):
    g = gen_violator(kind)
    w = classify(g)
    assert g.n == expected_n
    assert w.kind == kind and w.validate(g)


def test_violator_shapes():
    assert gen_violator("square") == cycle_graph(4)
    assert gen_violator("odd_hole") == cycle_graph(5)
    with pytest.raises(InputError):
        gen_violator("odd_antihole")


def test_generate_dispatch():
    assert generate(GenSpec("even_prism", {"lengths": [2, 2, 2]})) == gen_even_prism()
    spec = GenSpec("random_grenoble", {"n": 8, "p": 0.4}, seed=11)
    assert generate(spec) == generate(GenSpec.from_json(spec.to_json()))
    with pytest.raises(InputError):
        GenSpec("unknown")


@given(st.integers(0, 10**6), st.sampled_from((0.2, 0.4, 0.6)))
def test_sampler_is_deterministic_and_sound(seed, p):
    a = gen_random_grenoble(9, p, seed, attempts=20)
    b = gen_random_grenoble(9, p, seed, attempts=20)
    assert a == b
    if a is not None:
        assert classify(a) is None


@given(st.integers(0, 10**6))
def test_extension_keeps_base_and_class(seed):
    base = gen_even_prism((2, 2, 4))
    g = gen_extended(base, 2, 0.3, seed, attempts=30)
    if g is not None:
        assert classify(g) is None
        assert g.induced(base.vertices) == base


def test_corpus_composition(corpus):
    assert len(corpus) >= 200
    assert all(6 <= e.graph.n <= 24 for e in corpus)
    kinds = Counter(e.spec.kind for e in corpus)
    assert set(kinds) == {"even_prism", "hyperprism", "random_grenoble", "extended"}
    assert len({e.graph.digest() for e in corpus}) == len(corpus)


def test_corpus_members_are_accepted(corpus):
    for e in corpus:
        assert classify(e.graph) is None, e.name


def test_corpus_regenerates_identically(corpus, tmp_path):
    fresh = build_corpus(0)
    assert [(e.name, e.graph.digest()) for e in fresh] == [(e.name, e.graph.digest()) for e in corpus]
    write_corpus(fresh[:3], tmp_path)
    back = load_corpus(tmp_path)
    assert [e.graph for e in back] == [e.graph for e in fresh[:3]]


def test_corpus_hash_mismatch_is_caught(corpus, tmp_path):
    write_corpus(corpus[:1], tmp_path)
    g = corpus[0].graph
    tampered = g.with_edges([]).without([max(g.vertices)])
    (tmp_path / f"{corpus[0].name}.dimacs").write_text(write_dimacs(tampered))
    with pytest.raises(InputError, match="hash"):
        load_corpus(tmp_path)
