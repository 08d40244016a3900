"""Barycentric subdivision of affine chains with exact rational coordinates.

A :class:`LinearChain` of degree ``k`` is a finite integer combination of
affine simplices ``[y_0, ..., y_k]``.  Degree ``-1`` holds multiples of the
empty simplex, so that the boundary of a point is ``[()]`` and the cone on
the empty simplex is a point.

>>> c = LinearChain.simplex([(0,), (1,)])
>>> subdivide(c)
LinearChain(deg=1, {[(1/2,), (1,)]: 1, [(1/2,), (0,)]: -1})
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Sequence

Point = tuple  # tuple of Fractions

EMPTY: tuple = ()


def as_point(p: Sequence) -> Point:
    return tuple(Fraction(x) for x in p)


def barycenter(points: Sequence[Point]) -> Point:
    n = len(points)
    return tuple(sum(coords, Fraction(0)) / n for coords in zip(*points))


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class _PointTable:
    """Interns points so that simplices are tuples of small integers."""

    def __init__(self):
        self.coords: list = []
        self.ids: dict = {}
        self.bary: dict = {}

    def intern(self, p: Point) -> int:
        i = self.ids.get(p)
        if i is None:
            i = len(self.coords)
            self.coords.append(p)
            self.ids[p] = i
        return i

    def barycenter(self, s: tuple) -> int:
        key = tuple(sorted(s))
        b = self.bary.get(key)
        if b is None:
            b = self.intern(barycenter([self.coords[i] for i in key]))
            self.bary[key] = b
        return b


_TABLE = _PointTable()


class LinearChain:
    """Integer combination of affine simplices of a fixed degree.

    Simplices are stored as tuples of interned point ids; use
    :meth:`simplices` to read coordinates back.
    """

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms: dict | None = None):
        if degree < -1:
            raise ValueError("chains have degree >= -1")
        self.degree = degree
        self.terms: dict = {}
        dims = set()
        for simplex, coeff in (terms or {}).items():
            pts = tuple(as_point(p) for p in simplex)
            if len(pts) != degree + 1:
                raise ValueError(f"simplex with {len(pts)} points in a degree-{degree} chain")
            dims.update(len(p) for p in pts)
            if coeff:
                self._add_term(tuple(_TABLE.intern(p) for p in pts), int(coeff))
        if len(dims) > 1:
            raise ValueError("points of different ambient dimensions in one chain")

    @classmethod
    def simplex(cls, points: Sequence[Sequence], coeff: int = 1) -> "LinearChain":
        pts = tuple(as_point(p) for p in points)
        return cls(len(pts) - 1, {pts: coeff})

    @classmethod
    def empty(cls, coeff: int = 1) -> "LinearChain":
        return cls(-1, {EMPTY: coeff})

    @classmethod
    def zero(cls, degree: int) -> "LinearChain":
        return cls(degree)

    def simplices(self) -> dict:
        """Map from coordinate tuples to coefficients."""
        return {tuple(_TABLE.coords[i] for i in s): c for s, c in self.terms.items()}

    def _add_term(self, simplex, coeff):
        v = self.terms.get(simplex, 0) + coeff
        if v:
            self.terms[simplex] = v
        else:
            self.terms.pop(simplex, None)

    def __add__(self, other: "LinearChain") -> "LinearChain":
        if not other.terms:
            return self
        if not self.terms:
            return other
        if other.degree != self.degree:
            raise ValueError(f"cannot add chains of degrees {self.degree} and {other.degree}")
        out = LinearChain(self.degree)
        out.terms = dict(self.terms)
        for s, c in other.terms.items():
            out._add_term(s, c)
        return out

    def __neg__(self):
        out = LinearChain(self.degree)
        out.terms = {s: -c for s, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k: int):
        out = LinearChain(self.degree)
        if k:
            out.terms = {s: k * c for s, c in self.terms.items()}
        return out

    def __eq__(self, other):
        if not isinstance(other, LinearChain):
            return NotImplemented
        if not self.terms and not other.terms:
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        def pt(p):
            return "(" + ",".join(_fmt(x) for x in p) + ("," if len(p) == 1 else "") + ")"

        body = ", ".join(
            "[" + ", ".join(pt(p) for p in s) + f"]: {c}" for s, c in self.simplices().items()
        )
        return f"LinearChain(deg={self.degree}, {{{body}}})"


def _from_terms(degree: int, items: Iterable) -> LinearChain:
    out = LinearChain(degree)
    for s, c in items:
        out._add_term(s, c)
    return out


def boundary(c: LinearChain) -> LinearChain:
    """Alternating face sum; points go to multiples of the empty simplex."""
    if c.degree < 0:
        raise ValueError("the empty simplex has no boundary")
    items = []
    for s, coeff in c.terms.items():
        for i in range(len(s)):
            items.append((s[:i] + s[i + 1:], coeff if i % 2 == 0 else -coeff))
    return _from_terms(c.degree - 1, items)


def cone(b: Sequence, c: LinearChain) -> LinearChain:
    """Prepend the apex ``b`` to every simplex."""
    b = as_point(b)
    for s in c.terms:
        if s and len(_TABLE.coords[s[0]]) != len(b):
            raise ValueError("apex and chain live in different ambient dimensions")
    return _cone_id(_TABLE.intern(b), c)


def _cone_id(b: int, c: LinearChain) -> LinearChain:
    return _from_terms(c.degree + 1, (((b,) + s, coeff) for s, coeff in c.terms.items()))


def _subdivide_simplex(s: tuple, cache: dict) -> LinearChain:
    if s in cache:
        return cache[s]
    if len(s) <= 1:
        result = _from_terms(len(s) - 1, [(s, 1)])
    else:
        inner = subdivide(boundary(_from_terms(len(s) - 1, [(s, 1)])), cache)
        result = _cone_id(_TABLE.barycenter(s), inner)
    cache[s] = result
    return result


def subdivide(c: LinearChain, cache: dict | None = None) -> LinearChain:
    """Barycentric subdivision ``S``: identity in degrees -1 and 0, ``S(l) = b_l(S(d l))``."""
    if cache is None:
        cache = {}
    out = LinearChain(c.degree)
    for s, coeff in c.terms.items():
        for t, k in _subdivide_simplex(s, cache).terms.items():
            out._add_term(t, coeff * k)
    return out


def chain_homotopy_T(c: LinearChain, cache: dict | None = None) -> LinearChain:
    """``T(l) = b_l(l - T(d l))`` with ``T = 0`` in degree -1."""
    if cache is None:
        cache = {}
    out = LinearChain(c.degree + 1)
    if c.degree < 0:
        return out
    for s, coeff in c.terms.items():
        if s not in cache:
            single = _from_terms(c.degree, [(s, 1)])
            inner = single - chain_homotopy_T(boundary(single), cache)
            cache[s] = _cone_id(_TABLE.barycenter(s), inner)
        for t, k in cache[s].terms.items():
            out._add_term(t, coeff * k)
    return out


def iterate(c: LinearChain, r: int) -> tuple[LinearChain, LinearChain]:
    """Return ``(S^r c, D_r c)`` with ``D_r = sum_{i<r} T S^i``."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    s_cache, t_cache = {}, {}
    current = c
    D = LinearChain(c.degree + 1)
    for _ in range(r):
        D = D + chain_homotopy_T(current, t_cache)
        current = subdivide(current, s_cache)
    return current, D


def permutation_sign(sigma: Sequence[int]) -> int:
    sigma = list(sigma)
    sign, seen = 1, [False] * len(sigma)
    for i in range(len(sigma)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = sigma[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def permute(simplex: Sequence[Point], sigma: Sequence[int]) -> tuple[tuple, int]:
    """``(y_{sigma(0)}, ..., y_{sigma(k)})`` together with ``sgn(sigma)``."""
    simplex = tuple(as_point(p) for p in simplex)
    if len(sigma) != len(simplex) or sorted(sigma) != list(range(len(simplex))):
        raise ValueError(f"{list(sigma)} is not a permutation of 0..{len(simplex) - 1}")
    return tuple(simplex[i] for i in sigma), permutation_sign(sigma)


# ---------------------------------------------------------------------------
# identity checks used by tests and the command line self test


def random_chain(rng: random.Random, degree: int, ambient: int | None = None, nterms: int | None = None) -> LinearChain:
    if ambient is None:
        ambient = max(degree, 1)
    if nterms is None:
        nterms = rng.randint(1, 3)
    items = []
    for _ in range(nterms):
        pts = tuple(
            tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(ambient))
            for _ in range(degree + 1)
        )
        items.append((tuple(_TABLE.intern(p) for p in pts), rng.choice([-3, -2, -1, 1, 2, 3])))
    return _from_terms(degree, items)


def identity_residuals(c: LinearChain, rmax: int = 4) -> dict:
    """Check the subdivision identities on ``c``; returns name -> bool."""
    out = {}
    if c.degree < 0:
        return out
    dc = boundary(c)
    s_cache, t_cache = {}, {}
    S = subdivide(c, s_cache)
    out["dS=Sd"] = boundary(S) == subdivide(dc, s_cache)
    T = chain_homotopy_T(c, t_cache)
    out["dT+Td=id-S"] = boundary(T) + chain_homotopy_T(dc, t_cache) == c - S
    cur, cur_d = c, dc
    D, D_d = LinearChain(c.degree + 1), LinearChain(c.degree)
    for r in range(rmax + 1):
        out[f"dD{r}+D{r}d=id-S^{r}"] = boundary(D) + D_d == c - cur
        if r < rmax:
            D = D + chain_homotopy_T(cur, t_cache)
            D_d = D_d + chain_homotopy_T(cur_d, t_cache)
            cur, cur_d = subdivide(cur, s_cache), subdivide(cur_d, s_cache)
    return out


#: deepest iterate checked per chain degree in the random corpus; the
#: number of terms of D_r grows like ((k+1)!)^r so the depth shrinks with k
CORPUS_DEPTH = {0: 4, 1: 4, 2: 3, 3: 2, 4: 1}


def barr_kock_check(simplex: Sequence[Point]) -> bool:
    base = subdivide(LinearChain.simplex(simplex))
    for sigma in permutations(range(len(simplex))):
        moved, sign = permute(simplex, sigma)
        if subdivide(LinearChain.simplex(moved)) != sign * base:
            return False
    return True


def selftest(seed: int = 0, count: int = 200, max_degree: int = 4) -> dict:
    """Run the identity corpus; returns pass and fail counts per identity."""
    rng = random.Random(seed)
    tally: dict = {}
    for k in range(count):
        degree = k % (max_degree + 1)
        c = random_chain(rng, degree)
        for name, ok in identity_residuals(c, CORPUS_DEPTH.get(degree, 1)).items():
            t = tally.setdefault(name, [0, 0])
            t[0 if ok else 1] += 1
    for k in range(4):
        pts = [tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(max(k, 1))) for _ in range(k + 1)]
        ok = barr_kock_check(pts)
        t = tally.setdefault("barr-kock", [0, 0])
        t[0 if ok else 1] += 1
    return {name: {"pass": p, "fail": f} for name, (p, f) in sorted(tally.items())}
