import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

import oracles
from rootstretch.arrangements import (
    CharPoly,
    RationalArrangement,
    char_poly_finite_field,
    char_poly_mobius,
    char_poly_within,
    count_points,
    prime_bound,
    region_count,
    restrict_to_hyperplane,
)


def _falling(q, k):
    out = 1
    for j in range(k):
        out *= q - j
    return out


@pytest.mark.parametrize("k", range(1, 6))
def test_coordinate_arrangement(k):
    chi = char_poly_mobius(RationalArrangement.coordinate(k))
    assert all(chi(q) == (q - 1) ** k for q in range(-3, 8))
    assert region_count(chi) == 2**k


@pytest.mark.parametrize("k", range(2, 6))
def test_braid_arrangement(k):
    chi = char_poly_mobius(RationalArrangement.braid(k))
    assert all(chi(q) == _falling(q, k) for q in range(-3, 8))
    assert region_count(chi) == math.factorial(k)


def test_point_counts():
    assert count_points(RationalArrangement.braid(3), 7) == 210
    assert count_points(RationalArrangement.coordinate(2), 5) == 16
    arr = RationalArrangement(3, [(1, 1, 0), (0, 1, 2), (1, 0, 1)])
    for p in (5, 7, 11):
        direct = count_points(arr, p, "direct")
        assert direct == count_points(arr, p, "lattice") == oracles.count_complement(arr.normals, 3, p)


def test_normals_are_canonical():
    arr = RationalArrangement(2, [(2, -2), (-1, 1), (0, 3)])
    assert arr.normals == ((1, -1), (0, 1))
    with pytest.raises(ValueError):
        RationalArrangement(2, [(0, 0)])
    with pytest.raises(ValueError):
        RationalArrangement(2, [(1, 0, 0)])


def test_json_round_trip():
    arr = RationalArrangement(3, [(1, 2, 0), (0, 1, -1)])
    assert RationalArrangement.from_json(arr.to_json()) == arr


def test_empty_arrangement():
    arr = RationalArrangement(3)
    assert char_poly_mobius(arr).coefficients == (0, 0, 0, 1)
    assert char_poly_finite_field(arr).coefficients == (0, 0, 0, 1)
    assert region_count(arr) == 1


def test_charpoly_printing():
    assert str(CharPoly((2, -3, 1))) == "q^2 - 3*q + 2"
    assert str(CharPoly((0, -1, 1))) == "q^2 - q"


def test_small_primes_rejected():
    arr = RationalArrangement(2, [(1, 3), (1, 0)])
    assert prime_bound(arr) == 3
    with pytest.raises(ValueError):
        char_poly_finite_field(arr, primes=[3, 5, 7])
    with pytest.raises(ValueError):
        char_poly_finite_field(arr, primes=[5])


def test_prime_dividing_a_minor_rejected():
    arr = RationalArrangement(2, [(1, 1), (1, -1)])
    assert prime_bound(arr) == 2
    with pytest.raises(ValueError):
        char_poly_finite_field(arr, primes=[3, 5, 2])


def test_count_at_bad_prime_is_off_the_curve():
    # mod 2 the two lines coincide, so the count does not fit chi(q) = (q - 1)^2
    arr = RationalArrangement(2, [(1, 1), (1, -1)])
    assert char_poly_mobius(arr)(2) == 1
    assert count_points(arr, 2) == oracles.count_complement(arr.normals, 2, 2) == 2


# restriction


def test_restriction_of_braid_to_its_hyperplane_is_braid():
    braid = RationalArrangement.braid(4)
    alpha = braid.normals[0]
    rest = [h for h in braid.normals if h != alpha]
    r = restrict_to_hyperplane(rest, alpha)
    assert r.dim == 3
    assert char_poly_mobius(r) == char_poly_within(rest, alpha)
    # the restriction of braid(k) to z_0 = z_1 is braid(k - 1)
    assert all(char_poly_mobius(r)(q) == _falling(q, 3) for q in range(6))


def test_restriction_edge_cases():
    assert restrict_to_hyperplane([], (1, 1, 0)).dim == 2
    assert char_poly_within([], (1, 1, 0)).coefficients == (0, 0, 1)
    r = restrict_to_hyperplane([(1, 0, 0), (0, 1, 0)], (1, 1, 0))
    assert len(r) == 1  # both become the same hyperplane of alpha⊥
    with pytest.raises(ValueError):
        restrict_to_hyperplane([(2, 2, 0)], (1, 1, 0))
    with pytest.raises(ValueError):
        char_poly_within([(2, 2, 0)], (1, 1, 0))


def test_within_matches_oracle_restriction():
    normals = [(1, 0, 0, 1), (0, 1, -1, 0), (1, 1, 1, 1), (0, 0, 1, 2)]
    alpha = (1, -1, 0, 0)
    expect = oracles.regions_deletion_restriction(oracles._restrict(normals, alpha))
    assert region_count(char_poly_within(normals, alpha)) == expect


# properties

vectors = st.lists(st.integers(-2, 2), min_size=3, max_size=3).filter(any)


@given(st.lists(vectors, min_size=1, max_size=5))
def test_two_routes_agree(normals):
    arr = RationalArrangement(3, normals)
    mob = char_poly_mobius(arr)
    assert char_poly_finite_field(arr) == mob
    pts = [(q, oracles.count_complement(arr.normals, 3, q)) for q in oracles.good_primes(arr.normals, 4)]
    assert tuple(oracles.interpolate(pts)) == mob.coefficients


@given(st.lists(vectors, min_size=1, max_size=6))
def test_regions_by_deletion_restriction(normals):
    arr = RationalArrangement(3, normals)
    assert region_count(arr) == oracles.regions_deletion_restriction(arr.normals)


@given(st.lists(vectors, min_size=1, max_size=5))
def test_chi_vanishes_at_one(normals):
    assert char_poly_mobius(RationalArrangement(3, normals))(1) == 0


@given(st.lists(vectors, min_size=1, max_size=5), st.integers(-2, 2), st.integers(-2, 2), st.permutations(range(3)))
def test_unimodular_change_keeps_chi(normals, a, b, perm):
    # normals transform by n -> n U for U unimodular: a shear followed by a permutation
    def move(v):
        v = (v[0] + a * v[1] + b * v[2], v[1], v[2])
        return tuple(v[i] for i in perm)

    arr = RationalArrangement(3, normals)
    moved = RationalArrangement(3, [move(v) for v in normals])
    assert char_poly_mobius(arr) == char_poly_mobius(moved)


@given(st.lists(vectors, min_size=1, max_size=5), vectors)
def test_restriction_two_ways(normals, alpha):
    parallel = [h for h in normals if all(h[i] * alpha[j] == h[j] * alpha[i] for i in range(3) for j in range(3))]
    assume(not parallel)
    assert char_poly_mobius(restrict_to_hyperplane(normals, alpha)) == char_poly_within(normals, alpha)
