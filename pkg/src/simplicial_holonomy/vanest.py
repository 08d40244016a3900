"""Pair-groupoid cochains, the Van Est map and Riemann sums over triangulations.

A cochain of degree ``n`` on an ``m``-dimensional chart is a function of
``n+1`` points.  For the two symbolic kinds it is kept as a polynomial in
the ``m*(n+1)`` coordinates, variable ``k*m + a`` being coordinate ``a`` of
point ``x_k``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Callable, Mapping, Sequence

from .forms import RationalForm, det
from .poly import PoleError, Poly, RationalFunction, to_fraction
from .subdivision import LinearChain, permutation_sign, subdivide


class VanEstError(ValueError):
    pass


def _require_polynomial(w: RationalForm):
    for idx, c in w.coeffs.items():
        if not c.is_polynomial():
            raise PoleError(f"coefficient of {idx} has a denominator; polynomial coefficients required")


def _poly_coeff(c: RationalFunction) -> Poly:
    return c.num * (1 / c.den.constant_value())


@dataclass
class PairCochain:
    chart_dim: int
    degree: int
    kind: str
    form: RationalForm | None = None
    poly: Poly | None = None
    evaluator: Callable | None = field(default=None, repr=False)

    def __call__(self, *points) -> Fraction:
        return self.evaluate(points)

    def evaluate(self, points: Sequence[Sequence]) -> Fraction:
        if len(points) != self.degree + 1:
            raise VanEstError(f"a degree-{self.degree} cochain takes {self.degree + 1} points")
        if self.poly is not None:
            flat = [to_fraction(c) for p in points for c in p]
            return self.poly.evaluate(flat)
        return self.evaluator(*points)

    def evaluate_float(self, points) -> float:
        if self.poly is not None:
            return self.poly.evaluate_float([float(c) for p in points for c in p])
        return float(self.evaluator(*points))


def _point_vars(m: int, n: int, total: int) -> list[list[Poly]]:
    return [[Poly.var(total, k * m + a) for a in range(m)] for k in range(n + 1)]


def taylor_antiderivative(w: RationalForm) -> PairCochain:
    """``(1/n!) w_{x_0}(x_1 - x_0, ..., x_n - x_0)``."""
    _require_polynomial(w)
    m, n = w.chart_dim, w.degree
    total = m * (n + 1)
    X = _point_vars(m, n, total)
    out = Poly.zero(total)
    for idx, c in w.coeffs.items():
        coeff = _poly_coeff(c).rename(total, list(range(m)))
        M = [[X[k][i] - X[0][i] for i in idx] for k in range(1, n + 1)]
        out = out + coeff * det(M)
    out = out * Fraction(1, math.factorial(n))
    return PairCochain(m, n, "taylor", w, out)


def _simplex_integral(p: Poly, nx: int, n: int) -> Poly:
    """Integrate the last ``n`` variables of ``p`` over the standard simplex."""
    out: dict = {}
    for e, c in p.terms.items():
        a = e[nx:]
        weight = Fraction(math.prod(math.factorial(k) for k in a), math.factorial(sum(a) + n))
        key = e[:nx]
        out[key] = out.get(key, 0) + c * weight
    return Poly(nx, out)


def exact_antiderivative(w: RationalForm) -> PairCochain:
    """``Omega(x_0, ..., x_n)`` = integral of ``w`` over the affine simplex ``[x_0, ..., x_n]``."""
    _require_polynomial(w)
    m, n = w.chart_dim, w.degree
    nx = m * (n + 1)
    total = nx + n
    X = _point_vars(m, n, total)
    T = [Poly.var(total, nx + k) for k in range(n)]
    phi = []
    for a in range(m):
        pa = X[0][a]
        for k in range(n):
            pa = pa + T[k] * (X[k + 1][a] - X[0][a])
        phi.append(pa)
    integrand = Poly.zero(total)
    for idx, c in w.coeffs.items():
        comp = _poly_coeff(c).compose(phi)
        M = [[X[k][i] - X[0][i] for i in idx] for k in range(1, n + 1)]
        integrand = integrand + comp * det(M)
    return PairCochain(m, n, "exact", w, _simplex_integral(integrand, nx, n))


def custom_cochain(chart_dim: int, degree: int, fn: Callable) -> PairCochain:
    return PairCochain(chart_dim, degree, "custom", evaluator=fn)


def van_est_form(Om: PairCochain) -> RationalForm:
    """The form ``VE(Omega)`` with polynomial coefficients in ``x_0``."""
    if Om.poly is None:
        raise VanEstError("the Van Est map needs a symbolic cochain; numerical mode is not supported")
    m, n = Om.chart_dim, Om.degree
    coeffs = {}
    for idx in combinations(range(m), n):
        acc = Poly.zero(m * (n + 1))
        for s in permutations(range(n)):
            p = Om.poly
            for k in range(n, 0, -1):
                a = idx[s[k - 1]]
                p = p.diff(k * m + a)
                if not p:
                    break
                # restrict to the diagonal x_k = x_{k-1}
                mapping = list(range(m * (n + 1)))
                for b in range(m):
                    mapping[k * m + b] = (k - 1) * m + b
                p = p.rename(m * (n + 1), mapping)
            if p:
                acc = acc + (p if permutation_sign(s) > 0 else -p)
        if acc:
            restricted = acc.rename(m, [v if v < m else 0 for v in range(m * (n + 1))])
            if any(e[m:] and any(e[m:]) for e in acc.terms):
                raise VanEstError("iterated derivative still depends on later points")
            coeffs[idx] = RationalFunction(restricted)
    return RationalForm(m, n, coeffs)


def van_est(Om: PairCochain, x: Sequence | None = None):
    """``VE(Omega)``; returns the form, or its coefficient values at ``x``."""
    form = van_est_form(Om)
    if x is None:
        return form
    return {idx: c.evaluate(x) for idx, c in form.coeffs.items()}


def is_normalized(Om: PairCochain, rng: random.Random, trials: int = 20) -> bool:
    m, n = Om.chart_dim, Om.degree
    for _ in range(trials):
        pts = [tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(m)) for _ in range(n + 1)]
        for k in range(n):
            q = list(pts)
            q[k + 1] = q[k]
            if Om.evaluate(q) != 0:
                return False
    return True


def is_antisymmetric(Om: PairCochain, rng: random.Random, trials: int = 20) -> bool:
    """``Omega(x_0, x_{s(1)}, ..., x_{s(n)}) = sgn(s) Omega(x_0, ..., x_n)``."""
    m, n = Om.chart_dim, Om.degree
    for _ in range(trials):
        pts = [tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(m)) for _ in range(n + 1)]
        base = Om.evaluate(pts)
        for s in permutations(range(1, n + 1)):
            q = [pts[0]] + [pts[i] for i in s]
            if Om.evaluate(q) != permutation_sign([i - 1 for i in s]) * base:
                return False
    return True


# ---------------------------------------------------------------------------
# Triangulations


@dataclass
class Triangulation:
    """Piecewise-affine triangulation of a region of ``Q^n``.

    ``tops`` holds ``(vertex ids in order, sign)`` for every top simplex; the
    order on each tuple is the restriction of the vertex order.
    """

    dim: int
    vertices: dict
    tops: list
    carrier: dict = field(default_factory=dict)

    def __post_init__(self):
        self.vertices = {str(k): tuple(to_fraction(c) for c in v) for k, v in self.vertices.items()}
        for v, p in self.vertices.items():
            if len(p) != self.dim:
                raise VanEstError(f"vertex {v} has {len(p)} coordinates, expected {self.dim}")
        tops = []
        for verts, sign in self.tops:
            verts = tuple(str(v) for v in verts)
            if len(verts) != self.dim + 1:
                raise VanEstError(f"top simplex {verts} does not have {self.dim + 1} vertices")
            if sign not in (1, -1):
                raise VanEstError(f"sign of {verts} must be +1 or -1")
            for v in verts:
                if v not in self.vertices:
                    raise VanEstError(f"unknown vertex {v}")
            tops.append((verts, sign))
        self.tops = tops

    def points(self, verts) -> list:
        return [self.vertices[v] for v in verts]

    def volume_sign(self, verts) -> int:
        pts = self.points(verts)
        d = det([[p[a] - pts[0][a] for a in range(self.dim)] for p in pts[1:]])
        return (d > 0) - (d < 0)

    def orientation_report(self) -> list[str]:
        """Problems with injectivity, orientation and closedness of the top chain."""
        problems = []
        faces: dict = {}
        for verts, sign in self.tops:
            vs = self.volume_sign(verts)
            if vs == 0:
                problems.append(f"simplex {verts} is degenerate")
            elif vs != sign:
                problems.append(f"simplex {verts} has sign {sign} but orientation {vs}")
            for i in range(self.dim + 1):
                f = verts[:i] + verts[i + 1:]
                key = frozenset(f)
                fsign = (-1) ** i * sign * permutation_sign(sorted(range(len(f)), key=lambda k: f[k]))
                faces[key] = faces.get(key, 0) + fsign
        for key, total in faces.items():
            if abs(total) > 1:
                problems.append(f"face {sorted(key)} appears with multiplicity {total}")
        # interior faces must cancel: a face shared by two tops has total 0
        counts: dict = {}
        for verts, _ in self.tops:
            for i in range(self.dim + 1):
                counts[frozenset(verts[:i] + verts[i + 1:])] = counts.get(frozenset(verts[:i] + verts[i + 1:]), 0) + 1
        for key, cnt in counts.items():
            if cnt == 2 and faces[key] != 0:
                problems.append(f"interior face {sorted(key)} does not cancel")
            if cnt > 2:
                problems.append(f"face {sorted(key)} is shared by {cnt} top simplices")
        return problems

    def is_oriented(self) -> bool:
        return not self.orientation_report()

    def top_chain(self) -> LinearChain:
        out = LinearChain(self.dim)
        for verts, sign in self.tops:
            out = out + LinearChain.simplex(self.points(verts), sign)
        return out

    def order_pairs(self) -> list:
        pairs = set()
        for verts, _ in self.tops:
            for a, b in zip(verts, verts[1:]):
                pairs.add((a, b))
        return sorted(pairs)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "vertices": {k: [str(c) for c in v] for k, v in self.vertices.items()},
            "simplices": [{"vertices": list(v), "sign": s} for v, s in self.tops],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Triangulation":
        try:
            verts = data["vertices"]
            if isinstance(verts, list):
                verts = {str(v["id"]): v["coords"] for v in verts}
            tops = [(s["vertices"], int(s.get("sign", 1))) for s in data["simplices"]]
            return cls(int(data["dim"]), verts, tops)
        except (KeyError, TypeError) as exc:
            raise VanEstError(f"malformed triangulation JSON: {exc!r}") from exc


def unit_simplex(n: int = 2) -> Triangulation:
    verts = {f"v{i}": tuple(int(i == j + 1) for j in range(n)) for i in range(n + 1)}
    return Triangulation(n, verts, [(tuple(verts), 1)])


def barycentric_refine(T: Triangulation) -> Triangulation:
    """Replace every top simplex by the signed terms of its barycentric subdivision.

    Each piece keeps the vertex order produced by the subdivision operator
    (barycentre of the whole simplex first, original vertex last) and the
    sign of its term times the sign of the parent.
    """
    by_coords = {p: v for v, p in T.vertices.items()}
    vertices = dict(T.vertices)
    counter = [len(vertices)]

    def vid(p):
        v = by_coords.get(p)
        if v is None:
            while f"p{counter[0]}" in vertices:
                counter[0] += 1
            v = f"p{counter[0]}"
            counter[0] += 1
            by_coords[p] = v
            vertices[v] = p
        return v

    tops = []
    cache: dict = {}
    for verts, sign in T.tops:
        pieces = subdivide(LinearChain.simplex(T.points(verts)), cache)
        for pts, coeff in pieces.simplices().items():
            tops.append((tuple(vid(p) for p in pts), sign * coeff))
    return Triangulation(T.dim, vertices, tops)


def refine(T: Triangulation, r: int) -> Triangulation:
    for _ in range(r):
        T = barycentric_refine(T)
    return T


def antiderivative(w: RationalForm, kind: str) -> PairCochain:
    if kind == "taylor":
        return taylor_antiderivative(w)
    if kind == "exact":
        return exact_antiderivative(w)
    raise VanEstError(f"unknown cochain kind {kind!r}; use taylor or exact")


def riemann_sum(w: RationalForm, T: Triangulation, kind="taylor", check: bool = True) -> Fraction:
    """``sum sign * Omega(v_0, ..., v_n)`` over the top simplices, vertices in stored order."""
    if w.degree != T.dim or w.chart_dim != T.dim:
        raise VanEstError(f"form of degree {w.degree} on a {w.chart_dim}-chart cannot be integrated over a {T.dim}-triangulation")
    if check:
        problems = T.orientation_report()
        if problems:
            raise VanEstError("triangulation is not oriented: " + problems[0])
    Om = kind if isinstance(kind, PairCochain) else antiderivative(w, kind)
    total = Fraction(0)
    for verts, sign in T.tops:
        val = Om.evaluate(T.points(verts))
        total += val if sign > 0 else -val
    return total
