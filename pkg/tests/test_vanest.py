import random
from fractions import Fraction as Q
from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simplicial_holonomy.forms import RationalForm
from simplicial_holonomy.poly import PoleError, Poly, RationalFunction
from simplicial_holonomy.subdivision import subdivide
from simplicial_holonomy.vanest import (
    PairCochain,
    Triangulation,
    VanEstError,
    barycentric_refine,
    custom_cochain,
    exact_antiderivative,
    is_antisymmetric,
    is_normalized,
    refine,
    riemann_sum,
    taylor_antiderivative,
    unit_simplex,
    van_est,
)

R = RationalFunction


def form(n, idx, coeff):
    return RationalForm(n, len(idx), {tuple(idx): coeff})


def x(n=2):
    return R.var(n, 0)


def one(n):
    return R.const(n, 1)


def random_poly_form(rng, m, k):
    coeffs = {}
    for idx in combinations(range(m), k):
        terms = {e: Q(rng.randint(-4, 4), rng.randint(1, 3)) for e in product(range(3), repeat=m) if sum(e) <= 2 and rng.random() < 0.5}
        coeffs[idx] = R(Poly(m, terms))
    return RationalForm(m, k, coeffs)


def test_taylor_examples():
    Om = taylor_antiderivative(form(1, [0], one(1)))
    assert Om((Q(2),), (Q(7),)) == 5
    Om = taylor_antiderivative(form(1, [0], x(1)))
    assert Om((Q(2),), (Q(7),)) == 2 * 5
    Om = taylor_antiderivative(form(2, [0, 1], one(2)))
    assert Om((1, 1), (3, 1), (1, 4)) == Q(1, 2) * (2 * 3)


def test_exact_examples():
    assert exact_antiderivative(form(1, [0], one(1)))((0,), (1,)) == 1
    Om = exact_antiderivative(form(2, [0, 1], x()))
    assert Om((0, 0), (1, 0), (0, 1)) == Q(1, 6)
    assert Om((0, 0), (1, 1), (2, 2)) == 0


def test_antiderivatives_reject_poles():
    with pytest.raises(PoleError):
        taylor_antiderivative(form(1, [0], one(1) / (x(1) + 1)))
    with pytest.raises(PoleError):
        exact_antiderivative(form(1, [0], one(1) / (x(1) + 1)))


def test_van_est_examples():
    for w in (form(1, [0], x(1)), form(2, [0, 1], one(2)), form(2, [0, 1], x() * x())):
        assert van_est(taylor_antiderivative(w)) == w
    zero = PairCochain(2, 2, "taylor", None, Poly.zero(6))
    assert van_est(zero).is_zero()
    with pytest.raises(VanEstError):
        van_est(custom_cochain(1, 1, lambda a, b: 0))


def test_van_est_of_exact_cochain():
    w = form(2, [0, 1], x() * R.var(2, 1) + 3)
    assert van_est(exact_antiderivative(w)) == w


def test_refine_counts():
    T = barycentric_refine(unit_simplex(2))
    assert len(T.tops) == 6 and len(T.vertices) == 7
    I = refine(unit_simplex(1), 2)
    assert len(I.tops) == 4
    assert sorted(abs(T2.points(v)[1][0] - T2.points(v)[0][0]) for T2 in [I] for v, _ in I.tops) == [Q(1, 4)] * 4


def test_refined_chain_is_subdivision():
    T = Triangulation(2, {"a": (0, 0), "b": (2, 1), "c": (1, 3)}, [(("a", "b", "c"), 1)])
    assert barycentric_refine(T).top_chain() == subdivide(T.top_chain())
    assert barycentric_refine(T).is_oriented()


def test_orientation_report_catches_wrong_sign():
    T = Triangulation(2, {"a": (0, 0), "b": (1, 0), "c": (0, 1)}, [(("a", "b", "c"), -1)])
    assert not T.is_oriented()
    with pytest.raises(VanEstError):
        riemann_sum(form(2, [0, 1], one(2)), T)


def test_riemann_sum_examples():
    T = unit_simplex(2)
    assert riemann_sum(form(2, [0, 1], one(2)), T, "taylor") == Q(1, 2)
    w = form(2, [0, 1], x())
    for r in range(3):
        assert riemann_sum(w, refine(T, r), "exact") == Q(1, 6)
    with pytest.raises(VanEstError):
        riemann_sum(form(2, [0], one(2)), T)


def test_one_dimensional_taylor_converges():
    # x^2 dx on [0,1]: left-endpoint style sums approach 1/3
    w = form(1, [0], x(1) * x(1))
    errs = [abs(riemann_sum(w, refine(unit_simplex(1), r), "taylor") - Q(1, 3)) for r in range(1, 6)]
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_triangulation_json_roundtrip():
    T = refine(unit_simplex(2), 1)
    T2 = Triangulation.from_json(T.to_json())
    assert T2.vertices == T.vertices and T2.tops == T.tops


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.data(), st.integers(0, 10 ** 6))
def test_cochains_normalized_antisymmetric(m, data, seed):
    k = data.draw(st.integers(1, m))
    rng = random.Random(seed)
    w = random_poly_form(rng, m, k)
    for Om in (taylor_antiderivative(w), exact_antiderivative(w)):
        assert is_normalized(Om, rng, 3)
        assert is_antisymmetric(Om, rng, 3)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.data(), st.integers(0, 10 ** 6))
def test_van_est_inverts_taylor(m, data, seed):
    k = data.draw(st.integers(1, m))
    w = random_poly_form(random.Random(seed), m, k)
    assert van_est(taylor_antiderivative(w)) == w
