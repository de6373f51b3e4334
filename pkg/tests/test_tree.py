from collections import Counter
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from equipop.perm import NotSeparable, Symmetry, apply_symmetry, occurrences
from equipop.tree import (
    LEAF,
    Exchange,
    InvalidTree,
    Leaf,
    MarkedTree,
    Node,
    canonicalize,
    complement_tree,
    compose,
    decompose,
    forest_exchange,
    format_partition,
    format_tree,
    internal_nodes,
    iter_nodes,
    leaf_count,
    parse_partition,
    parse_tree,
    reduced_skeleton,
    replay,
    signature,
    subtree_exchange,
    transport_marks,
    tree_symmetry,
    validate,
    wedge,
    wedge_tree,
)

from conftest import brute_count, brute_separables

NINE = (2, 1, 5, 6, 4, 3, 7, 9, 8)
NINE_TEXT = "+(-(.,.),-(+(.,.),.,.),.,-(.,.))"

separable = st.integers(1, 7).flatmap(lambda n: st.sampled_from(brute_separables(n)))


def G(word):
    return decompose(tuple(int(c) for c in word))


def test_nine_leaf_tree():
    t = decompose(NINE)
    assert format_tree(t) == NINE_TEXT
    assert parse_tree(NINE_TEXT) == t
    assert compose(t) == NINE
    assert signature(t) == (3, 2, 1, 1, 1)


def test_small_trees():
    assert decompose((1,)) == LEAF
    assert compose(LEAF) == (1,)
    assert compose(parse_tree("+(.,-(.,.))")) == (1, 3, 2)
    assert signature(G("123")) == (2,)
    assert signature(G("132")) == (1, 1)
    with pytest.raises(NotSeparable):
        decompose((2, 4, 1, 3))


@given(separable)
def test_round_trip(pi):
    t = decompose(pi)
    validate(t)
    assert compose(t) == pi
    assert compose(parse_tree(format_tree(t))) == pi
    assert leaf_count(t) == len(pi)
    assert sum(signature(t)) == len(pi) - 1


@pytest.mark.parametrize("text", ["+(.)", "+(+(.,.),.)", "+(.,.", "*(.,.)", "+(.,.)x", ""])
def test_invalid_trees_rejected(text):
    with pytest.raises(InvalidTree):
        parse_tree(text)


def test_validate_rejects_bad_nodes():
    with pytest.raises(InvalidTree):
        validate(Node("+", (LEAF,)))
    with pytest.raises(InvalidTree):
        validate(Node("+", (Node("+", (LEAF, LEAF)), LEAF)))


def test_reduced_skeleton_examples():
    t = decompose(NINE)
    assert reduced_skeleton(t, {2, 3, 4, 8, 9}) == G("12354")
    assert reduced_skeleton(t, range(1, 10)) == t
    assert reduced_skeleton(G("132"), {1, 2}) == G("12")


@settings(max_examples=60)
@given(separable, st.data())
def test_skeleton_matches_pattern(pi, data):
    k = data.draw(st.integers(1, len(pi)))
    L = sorted(data.draw(st.sets(st.integers(1, len(pi)), min_size=k, max_size=k)))
    sigma = tuple(sorted(L, key=lambda i: pi[i - 1]))
    pattern = tuple(sorted(range(1, k + 1), key=lambda j: sigma[j - 1]))
    assert compose(reduced_skeleton(decompose(pi), L)) == pattern


@pytest.mark.parametrize("sigma", [(1,), (1, 2), (2, 1), (1, 3, 2), (2, 3, 1), (3, 2, 1)])
def test_skeleton_counts_small(sigma):
    for n in range(len(sigma), 7):
        for pi in brute_separables(n):
            t = decompose(pi)
            got = sum(1 for L in combinations(range(1, n + 1), len(sigma))
                      if reduced_skeleton(t, L) == decompose(sigma))
            assert got == brute_count(sigma, pi)


def test_subtree_exchange_examples():
    assert subtree_exchange(G("132"), (0,), (1,)) == G("213")
    three_kids = parse_tree("+(.,-(.,.),-(.,.,.))")
    assert subtree_exchange(three_kids, (0,), (1,)) == parse_tree("+(-(.,.),.,-(.,.,.))")
    t = G("1432")
    assert subtree_exchange(t, (1, 0), (1, 1)) == t
    with pytest.raises(ValueError):
        subtree_exchange(t, (1,), (1, 0))


def test_forest_exchange_examples():
    assert forest_exchange(G("1243"), ()) == G("1432")
    assert forest_exchange(G("1432"), ()) == G("1243")
    assert forest_exchange(G("132"), ()) == G("132")
    with pytest.raises(ValueError):
        forest_exchange(G("123"), ())


def _admissible_moves(t):
    paths = [p for p, _ in iter_nodes(t) if p]
    for v, w in combinations(paths, 2):
        if v != w[: len(v)] and w != v[: len(w)]:
            yield Exchange("subtree", (v, w))
    for p, node in internal_nodes(t):
        if isinstance(node.children[-1], Node):
            yield Exchange("forest", (p,))


@pytest.mark.parametrize("n", range(2, 7))
def test_exchanges_preserve_shape_data(n):
    for pi in brute_separables(n):
        t = decompose(pi)
        for mv in _admissible_moves(t):
            out = mv.apply(t)
            validate(out)
            assert leaf_count(out) == n
            assert signature(out) == signature(t)
            assert mv.inverse().apply(out) == t


def test_transport_example():
    marked = MarkedTree(G("1432"), {1, 2, 4})
    assert marked.pattern == (1, 3, 2)
    out = transport_marks(marked, Exchange("subtree", ((0,), (1,))), sigma=(1, 3, 2))
    assert out == MarkedTree(G("3214"), {1, 3, 4})
    assert out.pattern == (2, 1, 3)


def test_transport_sibling_leaves_is_identity():
    marked = MarkedTree(G("1432"), {1, 2, 4})
    assert transport_marks(marked, Exchange("subtree", ((1, 0), (1, 1)))) == marked


def _marked(sigma, n):
    g = decompose(sigma)
    for pi in brute_separables(n):
        t = decompose(pi)
        for L in combinations(range(1, n + 1), len(sigma)):
            if reduced_skeleton(t, L) == g:
                yield MarkedTree(t, L)


@pytest.mark.parametrize("sigma", [(1, 3, 2), (1, 2, 4, 3), (2, 1, 4, 3)])
def test_transport_is_bijective(sigma):
    g = decompose(sigma)
    for mv in _admissible_moves(g):
        tau = compose(mv.apply(g))
        for n in range(len(sigma), 7):
            src = list(_marked(sigma, n))
            image = {transport_marks(m, mv) for m in src}
            assert all(m.pattern == tau for m in image)
            assert len(image) == len(src) == sum(1 for _ in _marked(tau, n))
            assert all(transport_marks(transport_marks(m, mv), mv) == m for m in src)


def test_transport_rejects_wrong_pattern():
    with pytest.raises(ValueError):
        transport_marks(MarkedTree(G("1432"), {1, 2, 4}), Exchange("subtree", ((0,), (1,))), sigma=(2, 1, 3))


def test_wedge_examples():
    assert wedge((3,)) == (Node("+", (LEAF,) * 4), (1, 2, 3, 4))
    assert wedge((1, 1)) == (G("132"), (1, 3, 2))
    assert wedge((2, 1))[1] == (1, 2, 4, 3)
    assert wedge((1, 1, 1))[1] == (1, 4, 2, 3)
    with pytest.raises(ValueError):
        wedge_tree(())


def test_canonicalize_examples():
    canon, moves = canonicalize(G("2143"))
    assert canon == G("1423") == wedge_tree((1, 1, 1))
    assert replay(G("2143"), moves) == canon
    canon, moves = canonicalize(G("321"))
    assert canon == G("123") and [m.kind for m in moves] == ["complement"]
    assert canonicalize(wedge_tree((2, 2, 1))) == (wedge_tree((2, 2, 1)), [])


@pytest.mark.parametrize("n", range(1, 7))
def test_canonicalize_reaches_wedge_of_signature(n):
    for pi in brute_separables(n):
        t = decompose(pi)
        canon, moves = canonicalize(t)
        if n == 1:
            assert canon == LEAF
            continue
        assert canon == wedge_tree(signature(t))
        assert replay(t, moves) == canon


def test_tree_symmetry_examples():
    assert tree_symmetry(G("132"), Symmetry.COMPLEMENT) == parse_tree("-(.,+(.,.))") == G("312")
    assert tree_symmetry(G("12"), Symmetry.REVERSE) == G("21")
    assert tree_symmetry(decompose(NINE), Symmetry.IDENTITY) == decompose(NINE)
    assert complement_tree(complement_tree(decompose(NINE))) == decompose(NINE)


@given(separable, st.sampled_from(list(Symmetry)))
def test_tree_symmetry_commutes(pi, g):
    t = decompose(pi)
    assert tree_symmetry(t, g) == decompose(apply_symmetry(pi, g))
    assert signature(tree_symmetry(t, g)) == signature(t)


def test_partition_text():
    assert parse_partition("3,2,1,1,1") == (3, 2, 1, 1, 1)
    assert format_partition((2, 1)) == "2,1"
    for bad in ("", "0,1", "a"):
        with pytest.raises(ValueError):
            parse_partition(bad)
