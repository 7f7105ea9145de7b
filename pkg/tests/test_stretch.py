import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from rootstretch.diagram import ElasticData, admissible_elastic_data, cartan_type, star
from rootstretch.roots import (
    _reflect,
    depth,
    generate_positive_roots,
    interval,
    is_reduced,
    is_root,
    pairing,
    replay,
)
from rootstretch.stretch import (
    CASE1,
    CASE2,
    CASE3,
    check_type1,
    classify_cover,
    depth_growth_rate,
    expand_expression,
    pivot_cases,
    squish_root,
    stretch_root,
    stretched,
    type1_expression,
    verify_stretched_cover,
)
from rootstretch.verify import load_fixture

D4 = cartan_type("D", 4)
D_DATA = ElasticData("3", {"1", "2"}, {"4"})
STAR, STAR_DATA = star(3, 2)
FIG4 = (1, 1, 1, 4, 1, 1)
FIG5 = (1, 1, 1, 5, 3, 3)


def _lower(G, root, data):
    return _reflect(G, tuple(root), G.index(data.x))


def test_d4_highest_root_stretches_to_dm_highest_root():
    for m in range(4, 9):
        top = max(oracles.orbit_roots(cartan_type("D", m).cartan), key=sum)
        assert stretch_root(D4, (1, 1, 2, 1), D_DATA, m - 4) == top


def test_zero_stretch_keeps_vector():
    assert stretch_root(D4, (1, 0, 1, 1), D_DATA, 0) == (1, 0, 1, 1)


@pytest.mark.parametrize("n", range(4))
def test_stretched_d4_roots_are_roots(n):
    H = stretched(D4, D_DATA, n)
    roots = oracles.orbit_roots(H.cartan)
    for r in generate_positive_roots(D4, 100).roots:
        assert stretch_root(D4, r, D_DATA, n) in roots


def test_squish_inverts_stretch_on_a3():
    A3 = cartan_type("A", 3)
    for data in admissible_elastic_data(A3):
        for r in generate_positive_roots(A3, 10).roots:
            assert squish_root(A3, stretch_root(A3, r, data, 1), data) == r


def test_squish_a4_example():
    A3 = cartan_type("A", 3)
    data = ElasticData("2", ["1"], ["3"])
    assert squish_root(A3, (1, 1, 1, 0), data) == (1, 1, 0)
    with pytest.raises(ValueError):
        squish_root(A3, (1, 2, 1, 1), data)


def test_figure_four_is_case_two():
    tri = classify_cover(STAR, FIG4, STAR_DATA)
    assert (tri.case, tri.S_L, tri.S_R, tri.b, tri.b_prime) == (CASE2, 3, 2, 4, 1)


def test_figure_five_is_case_three():
    tri = classify_cover(STAR, FIG5, STAR_DATA)
    assert (tri.case, tri.S_L, tri.S_R, tri.b, tri.b_prime) == (CASE3, 3, 6, 5, 4)


def _case_one_instance():
    for m in range(4, 8):
        G = cartan_type("D", m)
        for r in generate_positive_roots(G, 100).roots:
            for data in admissible_elastic_data(G):
                if sum(r) > 1 and pairing(G, G.index(data.x), r) > 0 and classify_cover(G, r, data).case == CASE1:
                    return G, r, data


def test_case_one_found_on_d_center():
    G, r, data = _case_one_instance()
    tri = classify_cover(G, r, data)
    assert tri.S_R == tri.b


def test_classify_requires_decreasing_cover():
    with pytest.raises(ValueError):
        classify_cover(STAR, _lower(STAR, FIG4, STAR_DATA), STAR_DATA)


def test_stretched_cover_figures():
    chk = verify_stretched_cover(STAR, FIG4, STAR_DATA, 3)
    assert (chk.comparable, chk.depth_delta) == (True, 7)
    chk = verify_stretched_cover(STAR, FIG5, STAR_DATA, 3)
    assert (chk.comparable, chk.depth_delta) == (False, 1)
    G, r, data = _case_one_instance()
    chk = verify_stretched_cover(G, r, data, 2)
    assert (chk.comparable, chk.depth_delta) == (True, 3)


FIG4_INTERVAL = {
    "4444", "3444", "4442", "3344", "3442", "4422", "3334", "3342", "3422", "4222",
    "3331", "3312", "3122", "1222", "3311", "3112", "1122", "3111", "1112", "1111",
}


def test_figure_four_interval():
    n = 3
    H = stretched(STAR, STAR_DATA, n)
    up = stretch_root(STAR, FIG4, STAR_DATA, n)
    low = stretch_root(STAR, _lower(STAR, FIG4, STAR_DATA), STAR_DATA, n)
    iv = interval(H, low, up)
    assert len(iv) == 20
    px = H.index("x.0")
    assert {"".join(map(str, r[px:px + n + 1])) for r in iv} == FIG4_INTERVAL


def test_growth_rate_examples():
    G, data = STAR, STAR_DATA
    assert depth_growth_rate(G, (1, 0, 0, 0, 0, 0), data) == 0
    assert depth_growth_rate(G, (0, 0, 0, 1, 0, 0), data) == 1
    low = _lower(G, FIG4, data)
    assert depth_growth_rate(G, FIG4, data) == depth_growth_rate(G, low, data) + 2


def test_d_family_growth_rate_from_word_oracle():
    depths = [oracles.word_depths(cartan_type("D", 4 + n).cartan)[stretch_root(D4, (1, 1, 2, 1), D_DATA, n)]
              for n in range(4)]
    slope = depths[1] - depths[0]
    assert depths == [depths[0] + slope * n for n in range(4)]
    assert depth_growth_rate(D4, (1, 1, 2, 1), D_DATA) == slope == 2


def test_type1_base_cases():
    e = type1_expression(STAR, (1, 0, 0, 0, 0, 0), STAR_DATA)
    assert (e.n0, e.t) == (0, 0)
    e = type1_expression(STAR, (0, 0, 0, 1, 0, 0), STAR_DATA)
    assert (e.n0, e.t) == (0, 1)


def test_type1_figure_five():
    e = type1_expression(STAR, FIG5, STAR_DATA)
    assert e.n0 >= 1
    check_type1(e)
    assert all(tri.case == CASE1 for tri in pivot_cases(e))


def test_expand_examples():
    e = type1_expression(STAR, FIG4, STAR_DATA)
    assert expand_expression(e, 0) == e.word
    G = cartan_type("A", 1)
    ex = type1_expression(G, (1,), ElasticData("1"))
    word = expand_expression(ex, 2)
    assert len(word) == 3 and replay(stretched(G, ElasticData("1"), 2), word) == (1, 1, 1)


def test_expand_d4_highest_root():
    e = type1_expression(D4, (1, 1, 2, 1), D_DATA)
    word = expand_expression(e, 2)
    H = stretched(D4, D_DATA, e.n0 + 2)
    target = stretch_root(D4, (1, 1, 2, 1), D_DATA, e.n0 + 2)
    assert replay(H, word) == target
    assert len(word) == depth(H, target) == len(e.word) + 2 * e.t


# properties ------------------------------------------------------------------------------

SMALL = ["A_4", "B_3", "D_4"]


def _root_and_data(name, data):
    G = load_fixture(name).diagram
    root = data.draw(st.sampled_from(generate_positive_roots(G, 100).roots))
    ed = data.draw(st.sampled_from(admissible_elastic_data(G)))
    return G, root, ed


@given(st.sampled_from(SMALL), st.data())
def test_linear_depth(name, data):
    G, root, ed = _root_and_data(name, data)
    t = depth_growth_rate(G, root, ed)
    for n in range(4):
        assert depth(stretched(G, ed, n), stretch_root(G, root, ed, n)) == t * n + depth(G, root)


@given(st.sampled_from(SMALL + ["D_5", "B_2"]), st.data())
def test_stretch_maps_roots_to_roots(name, data):
    G, root, ed = _root_and_data(name, data)
    n = data.draw(st.integers(0, 3))
    assert is_root(stretched(G, ed, n), stretch_root(G, root, ed, n))
    assert squish_root(G, stretch_root(G, root, ed, 1), ed) == root


@given(st.sampled_from(SMALL + ["D_5"]), st.data())
def test_type1_invariants(name, data):
    G, root, ed = _root_and_data(name, data)
    e = type1_expression(G, root, ed)
    check_type1(e)
    assert e.t == depth_growth_rate(G, root, ed)
    assert e.n0 <= root[G.index(ed.x)]
    n = data.draw(st.integers(0, 3))
    word = expand_expression(e, n)
    H = stretched(G, ed, e.n0 + n)
    target = stretch_root(G, root, ed, e.n0 + n)
    assert replay(H, word) == target and is_reduced(H, word)
    assert len(word) == depth(H, target)


@given(st.sampled_from(SMALL), st.data())
def test_stretched_cover_trichotomy(name, data):
    G, root, ed = _root_and_data(name, data)
    if pairing(G, G.index(ed.x), root) <= 0 or sum(root) == 1:
        return
    tri = classify_cover(G, root, ed)
    n = data.draw(st.integers(1, 3))
    chk = verify_stretched_cover(G, root, ed, n)
    want = {CASE1: (True, n + 1), CASE2: (True, 2 * n + 1), CASE3: (False, 1)}[tri.case]
    assert (chk.comparable, chk.depth_delta) == want
