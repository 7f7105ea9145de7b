import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from rootstretch.diagram import cartan_type
from rootstretch.roots import (
    NotARootError,
    bilinear,
    count_reduced_expressions,
    depth,
    downset,
    generate_positive_roots,
    is_reduced,
    is_root,
    leq,
    reduced_expressions,
    reflect,
    replay,
    root_reflection,
)
from rootstretch.verify import load_fixture

FINITE = ["A_3", "A_4", "B_2", "B_3", "D_4", "D_5"]
A3 = cartan_type("A", 3)


def test_reflect_examples():
    assert reflect(A3, (0, 1, 0), "1") == (1, 1, 0)
    assert reflect(A3, (1, 1, 1), "2") == (1, 1, 1)


def test_reflect_unknown_vertex():
    with pytest.raises(ValueError):
        reflect(A3, (1, 0, 0), "7")


def test_a3_poset_is_figure_one():
    sl = generate_positive_roots(A3, 3)
    assert sorted(sl.roots) == sorted([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, 1), (1, 1, 1)])
    assert sl.cover_edges == {
        ((1, 0, 0), "2", (1, 1, 0)),
        ((0, 1, 0), "1", (1, 1, 0)),
        ((0, 1, 0), "3", (0, 1, 1)),
        ((0, 0, 1), "2", (0, 1, 1)),
        ((1, 1, 0), "3", (1, 1, 1)),
        ((0, 1, 1), "1", (1, 1, 1)),
    }
    assert sl.complete


@pytest.mark.parametrize("n", range(1, 8))
def test_type_a_counts_match_orbit(n):
    G = cartan_type("A", n)
    sl = generate_positive_roots(G, 100)
    assert set(sl.roots) == oracles.orbit_roots(G.cartan)
    assert len(sl) == n * (n + 1) // 2


@pytest.mark.parametrize("n", range(4, 8))
def test_type_d_counts_match_orbit(n):
    G = cartan_type("D", n)
    sl = generate_positive_roots(G, 100)
    assert set(sl.roots) == oracles.orbit_roots(G.cartan)
    assert len(sl) == n * (n - 1)


@pytest.mark.parametrize("n", [4, 5])
def test_type_d_matches_pattern_list_for_small_rank(n):
    roots = set(generate_positive_roots(cartan_type("D", n), 100).roots)
    assert roots == oracles.d_patterns(n)


@pytest.mark.parametrize("n", [6, 7])
def test_pattern_list_misses_one_family_from_rank_six(n):
    # the nine patterns miss 1,1,2*,1*,0*,0 once the path has room for a 0
    roots = set(generate_positive_roots(cartan_type("D", n), 100).roots)
    pats = oracles.d_patterns(n)
    assert pats < roots
    extra = roots - pats
    assert all(r[:3] == (1, 1, 2) and r[-1] == 0 and 0 in r[2:-1] for r in extra)


def test_depth_examples():
    assert depth(A3, (0, 1, 0)) == 1
    assert depth(A3, (1, 1, 1)) == 3


def test_d4_highest_root_depth_from_word_oracle():
    D4 = cartan_type("D", 4)
    assert oracles.word_depths(D4.cartan)[(1, 1, 2, 1)] == 5
    assert depth(D4, (1, 1, 2, 1)) == 5


@pytest.mark.parametrize("name", FINITE)
def test_depth_matches_word_oracle(name):
    G = load_fixture(name).diagram
    for root, d in oracles.word_depths(G.cartan).items():
        assert depth(G, root) == d


def test_depth_rejects_non_roots():
    with pytest.raises(NotARootError):
        depth(cartan_type("A", 2), (2, 1))


def test_downset_examples():
    assert downset(A3, (0, 1, 0)) == {(0, 1, 0)}
    assert downset(A3, (1, 1, 1)) == set(generate_positive_roots(A3, 3).roots)


def test_a3_reduced_expressions():
    words = set(reduced_expressions(A3, (1, 1, 1), limit=10))
    assert words == {("1", "2", "3"), ("2", "1", "3"), ("2", "3", "1"), ("3", "2", "1")}
    assert reduced_expressions(A3, (0, 0, 1)) == [("3",)]


@pytest.mark.parametrize("name", ["A_3", "A_4", "B_3", "D_4"])
def test_reduced_expressions_match_shortest_words(name):
    G = load_fixture(name).diagram
    for root in generate_positive_roots(G, 100).roots:
        mine = {tuple(G.index(v) for v in w) for w in reduced_expressions(G, root)}
        assert mine == set(oracles.shortest_words(G.cartan, root))
        assert count_reduced_expressions(G, root) == len(mine)


def test_d4_highest_root_has_twelve_reduced_expressions():
    D4 = cartan_type("D", 4)
    assert len(oracles.shortest_words(D4.cartan, (1, 1, 2, 1))) == 12
    assert len(reduced_expressions(D4, (1, 1, 2, 1), limit=100)) == 12


def test_is_root_examples():
    A2 = cartan_type("A", 2)
    assert is_root(A2, (1, 0)) and is_root(A2, (0, -1))
    assert not is_root(A2, (2, 1))
    assert not is_root(A2, (1, -1))


@pytest.mark.parametrize("name", FINITE)
def test_is_root_agrees_with_orbit_on_box(name):
    G = load_fixture(name).diagram
    roots = oracles.orbit_roots(G.cartan)
    top = [max(r[i] for r in roots) for i in range(len(G))]
    for v in itertools.product(*(range(t + 1) for t in top)):
        if any(v):
            assert is_root(G, v) == (v in roots), v


@pytest.mark.parametrize("name", ["A_4", "B_3", "D_4"])
def test_slice_invariants(name):
    G = load_fixture(name).diagram
    sl = generate_positive_roots(G, 100)
    d = sl.depth_of()
    assert sl.levels[0] == sorted(tuple(int(i == j) for j in range(len(G))) for i in range(len(G)))
    for lo, v, up in sl.cover_edges:
        assert d[up] == d[lo] + 1
        diff = [i for i in range(len(G)) if lo[i] != up[i]]
        assert diff == [G.index(v)] and up[diff[0]] > lo[diff[0]]
    assert all(min(r) >= 0 for r in sl.roots)


@pytest.mark.parametrize("name", ["A_4", "B_3", "D_4"])
def test_downset_matches_transitive_closure(name):
    G = load_fixture(name).diagram
    roots = generate_positive_roots(G, 100).roots
    below = oracles.up_closure_order(G.cartan, roots)
    for r in roots:
        assert downset(G, r) == below[r]


def test_max_depth_env_cap(monkeypatch):
    monkeypatch.setenv("ROOTSTRETCH_MAX_DEPTH", "2")
    sl = generate_positive_roots(cartan_type("A", 4), 10)
    assert len(sl.levels) == 2


def test_affine_slice_is_bounded():
    G = load_fixture("affine_D_4").diagram
    sl = generate_positive_roots(G, 6)
    assert len(sl.levels) == 6 and not sl.complete


# properties ------------------------------------------------------------------------------


def _symmetrizer(G):
    """Positive rationals d with d_i A_ij = d_j A_ji (connected diagrams)."""
    d = {0: Fraction(1)}
    todo = [0]
    while todo:
        i = todo.pop()
        for j in range(len(G)):
            if j not in d and G.cartan[i][j]:
                d[j] = d[i] * G.cartan[i][j] / G.cartan[j][i]
                todo.append(j)
    return [d[i] for i in range(len(G))]


names = st.sampled_from(["A_4", "B_3", "D_4", "D_5", "star_3_2", "affine_D_4"])


@given(names, st.data())
def test_reflect_is_involution(name, data):
    G = load_fixture(name).diagram
    v = tuple(data.draw(st.lists(st.integers(-5, 5), min_size=len(G), max_size=len(G))))
    i = data.draw(st.sampled_from(G.vertices))
    assert reflect(G, reflect(G, v, i), i) == v


@given(names, st.data())
def test_pairing_is_invariant(name, data):
    G = load_fixture(name).diagram
    n = len(G)
    b = tuple(data.draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n)))
    c = tuple(data.draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n)))
    word = data.draw(st.lists(st.sampled_from(G.vertices), max_size=6))
    wb, wc = b, c
    for v in word:
        wb, wc = reflect(G, wb, v), reflect(G, wc, v)
    if all(G.cartan[i][j] == G.cartan[j][i] for i in range(n) for j in range(n)):
        assert bilinear(G, wb, wc) == bilinear(G, b, c)
    d = _symmetrizer(G)
    scaled = lambda u: [d[i] * u[i] for i in range(n)]  # noqa: E731
    assert bilinear(G, scaled(wb), wc) == bilinear(G, scaled(b), c)


@given(st.sampled_from(["A_4", "B_3", "D_4", "D_5"]), st.data())
def test_random_reduced_expression_replays(name, data):
    G = load_fixture(name).diagram
    roots = generate_positive_roots(G, 100).roots
    root = data.draw(st.sampled_from(roots))
    words = reduced_expressions(G, root, limit=20)
    w = data.draw(st.sampled_from(words))
    assert replay(G, w) == root and is_reduced(G, w) and len(w) == depth(G, root)


@given(st.sampled_from(["A_4", "B_3", "D_4"]), st.data())
def test_root_reflection_maps_roots_to_roots(name, data):
    G = load_fixture(name).diagram
    roots = generate_positive_roots(G, 100).roots
    a, b = data.draw(st.sampled_from(roots)), data.draw(st.sampled_from(roots))
    img = root_reflection(G, a, b)
    assert is_root(G, img)
    assert root_reflection(G, a, a) == tuple(-c for c in a)


@given(st.sampled_from(["A_4", "D_4"]), st.data())
def test_leq_is_componentwise_on_comparable_pairs(name, data):
    G = load_fixture(name).diagram
    roots = generate_positive_roots(G, 100).roots
    a, b = data.draw(st.sampled_from(roots)), data.draw(st.sampled_from(roots))
    if leq(G, a, b):
        assert all(x <= y for x, y in zip(a, b))
        assert depth(G, a) <= depth(G, b)
