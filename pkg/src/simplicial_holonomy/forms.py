"""Differential forms on Cartesian charts with rational-function coefficients.

Internally form indices are 0-based increasing tuples; the JSON format uses
1-based indices.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, permutations
from typing import Mapping, Sequence

from .poly import PoleError, Poly, RationalFunction, to_fraction
from .subdivision import permutation_sign


def _sorted_with_sign(idx: Sequence[int]) -> tuple[tuple, int]:
    """Sort an index list; sign 0 if an index repeats."""
    if len(set(idx)) != len(idx):
        return (), 0
    order = sorted(range(len(idx)), key=lambda k: idx[k])
    return tuple(idx[k] for k in order), permutation_sign(order)


def det(M: Sequence[Sequence]):
    """Leibniz determinant; entries may be Fractions or rational functions."""
    k = len(M)
    if k == 0:
        return 1
    if k == 1:
        return M[0][0]
    if k == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    total = None
    for j in range(k):
        if not M[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return 0 if total is None else total


class RationalForm:
    """A ``degree``-form on a ``chart_dim``-dimensional chart."""

    __slots__ = ("chart_dim", "degree", "coeffs")

    def __init__(self, chart_dim: int, degree: int, coeffs: Mapping | None = None):
        if not 0 <= degree <= chart_dim:
            raise ValueError(f"degree {degree} outside 0..{chart_dim}")
        self.chart_dim = chart_dim
        self.degree = degree
        self.coeffs: dict = {}
        for idx, c in (coeffs or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise ValueError(f"index {idx} does not have {degree} entries")
            if any(not 0 <= i < chart_dim for i in idx):
                raise ValueError(f"index {idx} out of range for chart dimension {chart_dim}")
            sidx, sign = _sorted_with_sign(idx)
            if not sign:
                continue
            c = RationalFunction.lift(c, chart_dim)
            if c.nvars != chart_dim:
                raise ValueError("coefficient ring does not match the chart")
            self._add(sidx, c if sign > 0 else -c)

    def _add(self, idx, c):
        if idx in self.coeffs:
            c = self.coeffs[idx] + c
        if c.is_zero():
            self.coeffs.pop(idx, None)
        else:
            self.coeffs[idx] = c

    @classmethod
    def _raw(cls, n, k, coeffs):
        f = cls.__new__(cls)
        f.chart_dim, f.degree, f.coeffs = n, k, coeffs
        return f

    @classmethod
    def zero(cls, chart_dim: int, degree: int) -> "RationalForm":
        return cls(chart_dim, degree)

    @classmethod
    def function(cls, f, chart_dim: int) -> "RationalForm":
        return cls(chart_dim, 0, {(): f})

    @classmethod
    def dx(cls, chart_dim: int, *idx: int) -> "RationalForm":
        return cls(chart_dim, len(idx), {tuple(idx): 1})

    # -- algebra -----------------------------------------------------------

    def _check(self, other: "RationalForm"):
        if other.chart_dim != self.chart_dim:
            raise ValueError(f"chart mismatch: {self.chart_dim} vs {other.chart_dim}")

    def __add__(self, other: "RationalForm") -> "RationalForm":
        self._check(other)
        if other.degree != self.degree:
            raise ValueError("cannot add forms of different degrees")
        out = RationalForm._raw(self.chart_dim, self.degree, dict(self.coeffs))
        for idx, c in other.coeffs.items():
            out._add(idx, c)
        return out

    def __neg__(self):
        return RationalForm._raw(self.chart_dim, self.degree, {i: -c for i, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f) -> "RationalForm":
        f = RationalFunction.lift(f, self.chart_dim)
        if f.is_zero():
            return RationalForm.zero(self.chart_dim, self.degree)
        return RationalForm._raw(self.chart_dim, self.degree, {i: c * f for i, c in self.coeffs.items()})

    def __mul__(self, f):
        if isinstance(f, RationalForm):
            return wedge(self, f)
        return self.scale(f)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, RationalForm):
            return NotImplemented
        if self.chart_dim != other.chart_dim:
            return False
        if not self.coeffs and not other.coeffs:
            return True
        return self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.chart_dim, self.degree, frozenset(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_polynomial(self) -> bool:
        return all(c.is_polynomial() for c in self.coeffs.values())

    def coefficient(self, idx: Sequence[int]) -> RationalFunction:
        sidx, sign = _sorted_with_sign(tuple(idx))
        if not sign:
            return RationalFunction.const(self.chart_dim, 0)
        c = self.coeffs.get(sidx, RationalFunction.const(self.chart_dim, 0))
        return c if sign > 0 else -c

    # -- evaluation -----------------------------------------------------------

    def evaluate(self, point: Sequence, vectors: Sequence[Sequence]) -> Fraction:
        if len(vectors) != self.degree:
            raise ValueError(f"a {self.degree}-form needs {self.degree} vectors")
        total = Fraction(0)
        vecs = [[to_fraction(x) for x in v] for v in vectors]
        for idx, c in self.coeffs.items():
            M = [[v[i] for i in idx] for v in vecs]
            d = det(M)
            if d:
                total += c.evaluate(point) * d
        return total

    def evaluate_float(self, point: Sequence[float], vectors: Sequence[Sequence[float]]) -> float:
        total = 0.0
        for idx, c in self.coeffs.items():
            M = [[float(v[i]) for i in idx] for v in vectors]
            d = det(M)
            if d:
                total += c.evaluate_float(point) * d
        return total

    def max_coefficient_degree(self) -> int:
        return max((c.num.total_degree() for c in self.coeffs.values()), default=0)

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        terms = []
        for idx in sorted(self.coeffs):
            c = self.coeffs[idx]
            terms.append({"idx": [i + 1 for i in idx], "num": c.num.to_json(), "den": c.den.to_json()})
        return {"chart_dim": self.chart_dim, "degree": self.degree, "terms": terms}

    @classmethod
    def from_json(cls, data: Mapping) -> "RationalForm":
        try:
            n, k = int(data["chart_dim"]), int(data["degree"])
            coeffs: dict = {}
            out = cls(n, k)
            for pos, term in enumerate(data.get("terms", [])):
                idx = tuple(int(i) - 1 for i in term["idx"])
                num = Poly.from_json(term["num"], n)
                den = Poly.from_json(term["den"], n) if "den" in term else Poly.const(n, 1)
                if not den:
                    raise ValueError(f"terms[{pos}]: zero denominator")
                out = out + cls(n, k, {idx: RationalFunction(num, den)})
            return out
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed form JSON: {exc!r}") from exc

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for idx, c in sorted(self.coeffs.items()):
            basis = "^".join(f"dx{i}" for i in idx)
            parts.append(f"({c!r})" + (" " + basis if basis else ""))
        return " + ".join(parts)


def wedge(a: RationalForm, b: RationalForm) -> RationalForm:
    a._check(b)
    if a.degree + b.degree > a.chart_dim:
        return RationalForm.zero(a.chart_dim, a.chart_dim) if a.chart_dim >= 0 else None
    out = RationalForm(a.chart_dim, a.degree + b.degree)
    for I, f in a.coeffs.items():
        for J, g in b.coeffs.items():
            idx, sign = _sorted_with_sign(I + J)
            if sign:
                out._add(idx, f * g if sign > 0 else -(f * g))
    return out


def exterior_d(w: RationalForm) -> RationalForm:
    """Exterior derivative; the top-degree forms map to zero (returned in the same degree)."""
    n = w.chart_dim
    if w.degree == n:
        return RationalForm.zero(n, n)
    out = RationalForm(n, w.degree + 1)
    for I, f in w.coeffs.items():
        for j in range(n):
            if j in I:
                continue
            df = f.diff(j)
            if df.is_zero():
                continue
            idx, sign = _sorted_with_sign((j,) + I)
            out._add(idx, df if sign > 0 else -df)
    return out


class PolyMap:
    """A map between charts with rational-function components."""

    def __init__(self, domain_dim: int, components: Sequence):
        self.domain_dim = domain_dim
        self.components = [RationalFunction.lift(c, domain_dim) for c in components]
        for c in self.components:
            if c.nvars != domain_dim:
                raise ValueError("component lives in the wrong ring")
        self._jac = None

    @property
    def codomain_dim(self) -> int:
        return len(self.components)

    @classmethod
    def identity(cls, n: int) -> "PolyMap":
        return cls(n, [RationalFunction.var(n, i) for i in range(n)])

    @classmethod
    def affine(cls, matrix: Sequence[Sequence], offset: Sequence | None = None) -> "PolyMap":
        """``t -> M t + b`` with ``M`` of shape codomain x domain."""
        m = len(matrix[0]) if matrix else 0
        comps = []
        for r, row in enumerate(matrix):
            p = Poly.const(m, to_fraction(offset[r]) if offset is not None else 0)
            for j, a in enumerate(row):
                p = p + Poly.var(m, j) * to_fraction(a)
            comps.append(RationalFunction(p))
        return cls(m, comps)

    def jacobian(self) -> list:
        if self._jac is None:
            self._jac = [[c.diff(j) for j in range(self.domain_dim)] for c in self.components]
        return self._jac

    def __call__(self, point: Sequence) -> tuple:
        return tuple(c.evaluate(point) for c in self.components)

    def evaluate_float(self, point: Sequence[float]) -> tuple:
        return tuple(c.evaluate_float(point) for c in self.components)

    def compose(self, inner: "PolyMap") -> "PolyMap":
        """``self o inner``."""
        if inner.codomain_dim != self.domain_dim:
            raise ValueError("dimension mismatch in composition")
        return PolyMap(inner.domain_dim, [c.compose(inner.components) for c in self.components])

    def __eq__(self, other):
        return isinstance(other, PolyMap) and self.domain_dim == other.domain_dim and self.components == other.components

    def to_json(self) -> dict:
        return {"domain_dim": self.domain_dim, "components": [c.to_json() for c in self.components]}

    @classmethod
    def from_json(cls, data: Mapping) -> "PolyMap":
        m = int(data["domain_dim"])
        return cls(m, [RationalFunction.from_json(c, m) for c in data["components"]])


def pullback(w: RationalForm, f: PolyMap) -> RationalForm:
    if f.codomain_dim != w.chart_dim:
        raise ValueError(f"map lands in dimension {f.codomain_dim}, form lives in {w.chart_dim}")
    m, k = f.domain_dim, w.degree
    if k > m:
        return RationalForm.zero(m, m)
    J = f.jacobian()
    out = RationalForm(m, k)
    for I, c in w.coeffs.items():
        cf = c.compose(f.components)
        for cols in combinations(range(m), k):
            minor = det([[J[i][j] for j in cols] for i in I])
            minor = RationalFunction.lift(minor, m)
            if not minor.is_zero():
                out._add(cols, cf * minor)
    return out


# ---------------------------------------------------------------------------
# Faa di Bruno


def partial(g: RationalFunction, alpha: Sequence[int]) -> RationalFunction:
    for i, a in enumerate(alpha):
        for _ in range(a):
            g = g.diff(i)
    return g


def _nonzero_below(beta: Sequence[int]) -> list:
    from itertools import product

    return [g for g in product(*[range(b + 1) for b in beta]) if any(g)]


def faa_di_bruno(g: RationalFunction, f: PolyMap, beta: Sequence[int], x0: Sequence) -> Fraction:
    """``d^beta (g o f)(x0)`` from partials of ``g`` at ``f(x0)`` and of ``f`` at ``x0``.

    Sums over assignments ``e[i, gamma] >= 0`` with ``sum e[i, gamma] * gamma = beta``;
    each contributes ``beta! * prod (d^gamma f_i / gamma!)^e / e!`` times
    ``d^sigma g`` where ``sigma_i = sum_gamma e[i, gamma]``.
    """
    beta = tuple(int(b) for b in beta)
    if len(beta) != f.domain_dim:
        raise ValueError("multi-index length must equal the domain dimension")
    if sum(beta) == 0:
        raise ValueError("|beta| must be at least 1")
    m = f.codomain_dim
    x0 = [to_fraction(x) for x in x0]
    y0 = f(x0)
    gammas = _nonzero_below(beta)
    pairs = [(i, gam) for i in range(m) for gam in gammas]
    fpart = {}
    for i, gam in pairs:
        v = partial(f.components[i], gam).evaluate(x0)
        fpart[(i, gam)] = v / math.prod(math.factorial(a) for a in gam)
    gpart: dict = {}
    beta_fact = math.prod(math.factorial(b) for b in beta)
    total = Fraction(0)

    def rec(k: int, remaining: tuple, sigma: list, acc: Fraction):
        nonlocal total
        if not any(remaining):
            s = tuple(sigma)
            if s not in gpart:
                gpart[s] = partial(g, s).evaluate(y0)
            total += gpart[s] * acc
            return
        if k == len(pairs) or acc == 0:
            return
        i, gam = pairs[k]
        e = 0
        rem = remaining
        factor = Fraction(1)
        while True:
            rec(k + 1, rem, sigma, acc * factor)
            rem = tuple(r - a for r, a in zip(rem, gam))
            if any(r < 0 for r in rem):
                break
            e += 1
            factor = factor * fpart[(i, gam)] / e
            sigma[i] += 1
        sigma[i] -= e

    rec(0, beta, [0] * m, Fraction(beta_fact))
    return total


def direct_partial(g: RationalFunction, f: PolyMap, beta: Sequence[int], x0: Sequence) -> Fraction:
    """``d^beta (g o f)(x0)`` by composing symbolically and differentiating."""
    comp = g.compose(f.components)
    return partial(comp, beta).evaluate([to_fraction(x) for x in x0])
