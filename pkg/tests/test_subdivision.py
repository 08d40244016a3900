import random
from fractions import Fraction as Q
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simplicial_holonomy.subdivision import (
    LinearChain,
    barr_kock_check,
    boundary,
    chain_homotopy_T,
    cone,
    identity_residuals,
    iterate,
    permute,
    random_chain,
    subdivide,
)

y0, y1, y2 = (Q(0), Q(0)), (Q(3), Q(1)), (Q(1), Q(5))
simplex = LinearChain.simplex


def bary(*pts):
    return tuple(sum(c) / len(pts) for c in zip(*pts))


def test_boundary_examples():
    assert boundary(simplex([y0, y1])) == simplex([y1]) - simplex([y0])
    assert boundary(simplex([y0])) == LinearChain.empty()
    assert not boundary(boundary(simplex([y0, y1, y2])))


def test_cone_examples():
    b = (Q(7), Q(7))
    assert cone(b, simplex([y0])) == simplex([b, y0])
    c = simplex([y0, y1])
    assert boundary(cone(b, c)) + cone(b, boundary(c)) == c
    assert not cone(b, LinearChain.zero(1))


def test_subdivide_interval_and_point():
    b = bary(y0, y1)
    assert subdivide(simplex([y0, y1])) == simplex([b, y1]) - simplex([b, y0])
    assert subdivide(simplex([y0])) == simplex([y0])


def test_subdivide_triangle_six_terms():
    b = bary(y0, y1, y2)
    b0, b1, b2 = bary(y1, y2), bary(y0, y2), bary(y0, y1)
    expected = (
        simplex([b, b2, y1]) - simplex([b, b2, y0]) + simplex([b, b0, y2])
        - simplex([b, b0, y1]) - simplex([b, b1, y2]) + simplex([b, b1, y0])
    )
    assert subdivide(simplex([y0, y1, y2])) == expected


def test_homotopy_examples():
    assert chain_homotopy_T(simplex([y0])) == simplex([y0, y0])
    b = bary(y0, y1)
    assert chain_homotopy_T(simplex([y0, y1])) == simplex([b, y0, y1]) - simplex([b, y1, y1]) + simplex([b, y0, y0])
    assert not chain_homotopy_T(LinearChain.empty())


def test_iterate_small_r():
    c = simplex([y0, y1, y2])
    S0, D0 = iterate(c, 0)
    assert S0 == c and not D0
    S1, D1 = iterate(c, 1)
    assert S1 == subdivide(c) and D1 == chain_homotopy_T(c)


def test_iterated_homotopy_on_random_two_chain():
    c = random_chain(random.Random(5), 2)
    assert all(identity_residuals(c, 3).values())


def test_permute_examples():
    pts, sign = permute([y0, y1, y2], [0, 1, 2])
    assert pts == (y0, y1, y2) and sign == 1
    pts, sign = permute([y0, y1, y2], [0, 2, 1])
    assert pts == (y0, y2, y1) and sign == -1
    assert subdivide(simplex(pts)) == -1 * subdivide(simplex([y0, y1, y2]))
    with pytest.raises(ValueError):
        permute([y0, y1], [0, 0])


def test_barr_kock_tetrahedron():
    pts = [(Q(0), Q(0), Q(0)), (Q(1), Q(0), Q(0)), (Q(0), Q(2), Q(0)), (Q(1), Q(1), Q(3))]
    assert barr_kock_check(pts)


def test_number_of_pieces():
    # (k+1)! pieces in S of a k-simplex
    c = simplex([(Q(0),) * 3, (Q(1), Q(0), Q(0)), (Q(0), Q(1), Q(0)), (Q(0), Q(0), Q(1))])
    assert len(subdivide(c)) == 24


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3), st.integers(0, 10 ** 6))
def test_identities_random(degree, seed):
    c = random_chain(random.Random(seed), degree)
    res = identity_residuals(c, 2 if degree < 3 else 1)
    assert all(res.values()), res


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_subdivision_is_chain_map_and_linear(seed):
    rng = random.Random(seed)
    a, b = random_chain(rng, 2), random_chain(rng, 2)
    assert subdivide(a + b) == subdivide(a) + subdivide(b)
    assert boundary(subdivide(a)) == subdivide(boundary(a))
