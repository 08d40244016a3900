import random
from fractions import Fraction as Q
from itertools import combinations, product

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from simplicial_holonomy.forms import PolyMap, RationalForm, direct_partial, exterior_d, faa_di_bruno, pullback, wedge
from simplicial_holonomy.poly import PoleError, Poly, RationalFunction

R = RationalFunction


def xs(n):
    return [R.var(n, i) for i in range(n)]


def dx(n, *i):
    return RationalForm.dx(n, *i)


def random_poly(rng, n, deg=2):
    terms = {e: Q(rng.randint(-3, 3), rng.randint(1, 2)) for e in product(range(deg + 1), repeat=n) if sum(e) <= deg and rng.random() < 0.6}
    return Poly(n, terms)


def random_form(rng, n, k, rational=False):
    coeffs = {}
    for idx in combinations(range(n), k):
        num = random_poly(rng, n)
        den = Poly.const(n, 1) + Poly.var(n, 0) ** 2 if rational else Poly.const(n, 1)
        coeffs[idx] = R(num, den)
    return RationalForm(n, k, coeffs)


def test_exterior_derivative_examples():
    x, y = xs(2)
    assert exterior_d(dx(2, 1) * x) == dx(2, 0, 1)
    assert exterior_d(dx(2, 1) * x - dx(2, 0) * y) == dx(2, 0, 1) * 2


def test_wedge_examples():
    x, y = xs(2)
    assert wedge(dx(2, 0), dx(2, 0)).is_zero()
    assert wedge(dx(2, 0), dx(2, 1)) == -wedge(dx(2, 1), dx(2, 0))
    assert wedge(dx(2, 0) * x, dx(2, 1) * y) == dx(2, 0, 1) * (x * y)


def test_pullback_examples():
    t = R.var(1, 0)
    curve = PolyMap(1, [t, t * t])
    assert pullback(dx(2, 1), curve) == dx(1, 0) * (t * 2)
    w = dx(2, 0, 1) * xs(2)[0]
    assert pullback(w, PolyMap.identity(2)) == w
    M = [[2, 3], [1, -1]]
    assert pullback(dx(2, 0, 1), PolyMap.affine(M)) == dx(2, 0, 1) * (-5)


def test_evaluate_examples():
    area = dx(2, 0, 1)
    e1, e2 = (1, 0), (0, 1)
    assert area.evaluate((Q(5), Q(-1)), [e1, e2]) == 1
    assert area.evaluate((Q(5), Q(-1)), [e2, e1]) == -1
    assert (area * xs(2)[0]).evaluate((2, 0), [e1, e2]) == 2
    with pytest.raises(PoleError):
        (dx(2, 0) * (R.const(2, 1) / xs(2)[0])).evaluate((0, 1), [e1])


def test_json_roundtrip():
    w = random_form(random.Random(2), 3, 2, rational=True)
    assert RationalForm.from_json(w.to_json()) == w


def test_faa_di_bruno_examples():
    x = R.var(1, 0)
    y = R.var(1, 0)
    assert faa_di_bruno(y ** 3, PolyMap(1, [x * x]), (1,), (1,)) == 6
    x1, x2 = xs(2)
    assert faa_di_bruno(y ** 2, PolyMap(2, [x1 * x2]), (1, 1), (1, 1)) == 4
    with pytest.raises(ValueError):
        faa_di_bruno(y, PolyMap(1, [x]), (0,), (1,))


def test_faa_di_bruno_linear_outer():
    # g linear: chain rule with a single term per component
    u, v = xs(2)
    g = u * 3 - v * 2
    x1, x2 = xs(2)
    f = PolyMap(2, [x1 ** 3 * x2, x1 + x2 ** 2])
    beta = (2, 1)
    expected = 3 * direct_partial(u, f, beta, (1, 2)) - 2 * direct_partial(v, f, beta, (1, 2))
    assert faa_di_bruno(g, f, beta, (1, 2)) == expected


def test_faa_di_bruno_frozen_value():
    # (x^2 + 1)^4 differentiated twice at x = 1: 8(x^2+1)^3 + 48x^2(x^2+1)^2 = 64 + 192
    x = R.var(1, 0)
    assert faa_di_bruno(x ** 4, PolyMap(1, [x * x + 1]), (2,), (1,)) == 256


def _sympy_partial(gp, fps, beta, x0):
    n = len(beta)
    X = sympy.symbols(f"x0:{n}")
    Y = sympy.symbols(f"y0:{len(fps)}")

    def to_s(p, V):
        return sum(sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[v ** e for v, e in zip(V, ex)]) for ex, c in p.terms.items())

    expr = to_s(gp, Y).subs({Yi: to_s(fp, X) for Yi, fp in zip(Y, fps)}, simultaneous=True)
    for i, b in enumerate(beta):
        expr = sympy.diff(expr, X[i], b) if b else expr
    return Q(str(expr.subs(dict(zip(X, x0)))))


def test_faa_di_bruno_random_pairs_against_sympy():
    rng = random.Random(11)
    for _ in range(15):
        n, m = rng.randint(1, 2), rng.randint(1, 2)
        fps = [random_poly(rng, n, 2) for _ in range(m)]
        gp = random_poly(rng, m, 3)
        beta = tuple(rng.randint(0, 2) for _ in range(n))
        if sum(beta) == 0:
            beta = (1,) + beta[1:]
        x0 = tuple(Q(rng.randint(-2, 2), rng.randint(1, 2)) for _ in range(n))
        val = faa_di_bruno(R(gp), PolyMap(n, [R(p) for p in fps]), beta, x0)
        assert val == _sympy_partial(gp, fps, beta, x0)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.data(), st.integers(0, 10 ** 6))
def test_d_squared_zero(n, data, seed):
    k = data.draw(st.integers(0, n))
    w = random_form(random.Random(seed), n, k, rational=True)
    assert exterior_d(exterior_d(w)).is_zero()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_pullback_commutes_with_d_and_composes(seed):
    rng = random.Random(seed)
    k = rng.randint(0, 2)
    w = random_form(rng, 2, k)
    f = PolyMap(2, [R(random_poly(rng, 2)) for _ in range(2)])
    g = PolyMap(2, [R(random_poly(rng, 2, 1)) for _ in range(2)])
    assert pullback(exterior_d(w), f) == exterior_d(pullback(w, f))
    assert pullback(w, f.compose(g)) == pullback(pullback(w, f), g)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_wedge_graded_commutative(seed):
    rng = random.Random(seed)
    a, b = random_form(rng, 3, rng.randint(0, 2)), random_form(rng, 3, 1)
    sign = (-1) ** (a.degree * b.degree)
    assert wedge(a, b) == wedge(b, a) * sign
