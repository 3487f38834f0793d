import pytest
from hypothesis import given

from conftest import accepted_graphs, ref_is_even_pair
from grenoble.detectors import classify, find_prism, is_even_pair
from grenoble.errors import InputError
from grenoble.generators import _STRIP_MENU, StripSpec, hyperprism_layout
from grenoble.graph import Graph
from grenoble.hyperprism import (
    Hyperprism,
    find_major_neighbors,
    grow_maximal,
    is_maximal,
    select_good_strip,
    validate_hyperprism,
)
from grenoble.evenpair import (
    ConvergenceWitness,
    OrderRelation,
    build_all_orders,
    build_context,
    build_order,
    classify_path,
    even_pair_sequence,
    extract_even_pair,
    find_convergences,
    order_less,
    order_less_raw,
    resolve_convergence,
    twist_failures,
)

SINGLETONS = Hyperprism.from_strips(({i}, {3 + i}, {6 + i}) for i in range(3))


def _twisted():
    # strip 1: A = {0, 1}, B = {2, 3}, rungs 1-4-2 and 0-5-3
    g, h = hyperprism_layout([StripSpec(2, 2, True, True, ((1, 0, 2), (0, 1, 2))), StripSpec(), StripSpec()])
    return g, build_context(g, h, good=1)


def _chain():
    # strip 1: A = {0, 1}, B = {2, 3}, rungs 0-4-2 and 1-5-3
    g, h = hyperprism_layout([_STRIP_MENU[3], _STRIP_MENU[0], _STRIP_MENU[0]])
    return g, build_context(g, h, good=1)


CONV_EDGES = [
    (0, 1), (0, 2), (2, 3), (3, 6), (6, 7), (1, 4), (4, 5), (5, 6), (3, 5),
    (8, 9), (9, 10), (11, 12), (12, 13), (8, 11), (10, 13),
    (0, 8), (0, 11), (1, 8), (1, 11), (7, 10), (7, 13),
]
CONV_H = Hyperprism.from_strips([({0, 1}, {2, 3, 4, 5, 6}, {7}), ({8}, {9}, {10}), ({11}, {12}, {13})])


def _converging(extra=None):
    """Hyperprism with two 1-rungs meeting at 7; maximal for single vertices only."""
    g = Graph(range(14), CONV_EDGES)
    h = CONV_H
    if extra:
        g = g.with_vertex(14, extra)
        h = Hyperprism.from_strips([({0, 1}, {2, 3, 4, 5, 6, 14}, {7}), ({8}, {9}, {10}), ({11}, {12}, {13})])
    return g, build_context(g, h, good=1)


def test_context_orients_small_side_first(prism9):
    g, ctx = _converging()
    assert ctx.a_side == (7,) and ctx.b_side == (0, 1)
    ctx9 = build_context(prism9, SINGLETONS)
    assert ctx9.good == 1 and ctx9.rungs == ((0, 3, 6),)
    with pytest.raises(InputError):
        build_context(prism9, SINGLETONS, majors={0}, good=1)


def test_classify_path_shapes(prism9):
    ctx = build_context(prism9, SINGLETONS)
    assert classify_path(ctx, (0, 3, 6)) == ("one_rung", None)
    assert classify_path(ctx, (0, 1, 4, 7, 6)) == ("interior_rung", 2)
    _, tw = _twisted()
    assert classify_path(tw, (0, 1, 4, 2)) == ("odd_s1_path", None)
    with pytest.raises(InputError):
        classify_path(ctx, (0, 3))


def test_singleton_sides_have_empty_orders(prism9):
    ctx = build_context(prism9, SINGLETONS)
    assert not order_less_raw(ctx, 6, 0, 0)
    orders = build_all_orders(ctx)
    assert all(not rel.pairs for rel in orders.values())
    assert extract_even_pair(ctx, orders) == (0, 6)
    assert even_pair_sequence(ctx) == [(0, 6)]


def test_chain_order():
    _, ctx = _chain()
    assert order_less(ctx, 2, 1, 0)
    assert not order_less(ctx, 2, 0, 1)
    assert build_order(ctx, 2).pairs == {(1, 0)}
    assert order_less_raw(ctx, 2, 1, 0) and not order_less_raw(ctx, 2, 0, 1)


def test_twisted_orders_and_pairs():
    g, ctx = _twisted()
    orders = build_all_orders(ctx)
    assert {b: sorted(r.pairs) for b, r in orders.items()} == {
        0: [(2, 3)], 1: [(3, 2)], 2: [(0, 1)], 3: [(1, 0)],
    }
    assert twist_failures(ctx, orders) == []
    assert extract_even_pair(ctx, orders) == (0, 3)
    seq = even_pair_sequence(ctx)
    assert seq == [(0, 3), (1, 2)]
    assert ref_is_even_pair(g, 0, 3)
    assert ref_is_even_pair(g.without({0, 3}), 1, 2)


def test_order_relation_checks():
    rel = OrderRelation(9, (1, 2, 3), frozenset({(1, 2), (2, 3)}))
    assert rel.transitivity_failures() == [(1, 2, 3)]
    assert not rel.is_order()
    rel = OrderRelation(9, (1, 2), frozenset({(1, 2), (2, 1)}))
    assert rel.antisymmetry_failures() == [(1, 2)]
    rel = OrderRelation(9, (1, 2, 3), frozenset({(1, 2)}))
    assert rel.is_order() and rel.maximal() == (2, 3) and rel.down(2) == {1}


def test_convergence_fixture_is_single_vertex_maximal():
    g, ctx = _converging()
    assert classify(g) is None
    assert validate_hyperprism(g, CONV_H) and is_maximal(g, CONV_H)
    w = build_order(ctx, 7)
    assert isinstance(w, ConvergenceWitness)
    assert w.shared == 7 and w.size == 8
    assert isinstance(build_all_orders(ctx), ConvergenceWitness)
    with pytest.raises(InputError):
        extract_even_pair(ctx)


def test_convergence_resolution_shrinks_good_strip():
    g, ctx = _converging()
    w = find_convergences(ctx)[0]
    new = resolve_convergence(ctx, w)
    assert validate_hyperprism(g, new) and is_maximal(g, new)
    good = select_good_strip(g, new, find_major_neighbors(g, new))
    assert len(new.S(good)) < len(CONV_H.S(1))
    assert len(new.S(good)) == 3


def test_smallest_convergence_is_chosen():
    # vertex 14 duplicates 6 on the far side, creating larger convergences too
    g, ctx = _converging(extra=(3, 5, 6, 7))
    assert classify(g) is None
    found = find_convergences(ctx)
    assert len(found) == 4 and len({w.size for w in found}) == 2
    w = build_order(ctx, 7)
    assert w == found[0]
    assert w.size == min(x.size for x in found) == 8
    assert sorted(set(w.rung1) | set(w.rung2)) == list(range(8))
    new = resolve_convergence(ctx, w)
    good = select_good_strip(g, new, find_major_neighbors(g, new))
    assert len(new.S(good)) < len(ctx.hyperprism.S(1))


def test_resolution_needs_a_convergence(prism9):
    _, ctx = _twisted()
    a, b = ctx.rungs
    with pytest.raises(InputError):
        resolve_convergence(ctx, ConvergenceWitness(a, b))


def test_removed_vertices_are_rejected():
    _, ctx = _twisted()
    cur = ctx.without((0, 3))
    assert cur.a_side == (1,) and cur.b_side == (2,)
    with pytest.raises(InputError):
        order_less(cur, 3, 1, 0)


# -- properties ---------------------------------------------------------------


def _contexts(g):
    h = grow_maximal(g, find_prism(g))
    ctx = build_context(g, h)
    out = [ctx]
    for pair in even_pair_sequence(ctx)[:-1]:
        out.append(out[-1].without(pair))
    return out


def _check_context(ctx):
    g = ctx.current_graph
    orders = build_all_orders(ctx)
    assert not isinstance(orders, ConvergenceWitness)
    for base, rel in orders.items():
        assert rel.is_order()
        for x in rel.elements:
            for y in rel.elements:
                if x != y:
                    assert rel.less(x, y) == order_less_raw(ctx, base, x, y)
    assert twist_failures(ctx, orders) == []
    a, b = extract_even_pair(ctx, orders)
    assert is_even_pair(g, a, b)


@given(accepted_graphs())
def test_orders_and_pairs_on_random_members(g):
    for ctx in _contexts(g):
        _check_context(ctx)


def test_orders_and_pairs_over_corpus(corpus):
    nontrivial = 0
    for e in corpus:
        if find_prism(e.graph) is None:
            continue
        ctxs = _contexts(e.graph)
        for ctx in ctxs:
            _check_context(ctx)
        seq = even_pair_sequence(ctxs[0])
        assert len(seq) == len(ctxs[0].a_side)
        removed = set()
        for a, b in seq:
            assert is_even_pair(e.graph.without(removed), a, b), e.name
            removed |= {a, b}
        nontrivial += len(seq) > 1
    assert nontrivial > 0
