"""Exact multivariate polynomials and rational functions over the rationals.

Polynomials are sparse maps from exponent tuples to ``Fraction`` coefficients.
Rational functions keep numerator and denominator coprime (the gcd is taken
with sympy's sparse polynomial rings) and the denominator's leading
coefficient normalized to 1, so structural equality is mathematical equality.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, Sequence

from sympy import QQ
from sympy.polys.rings import ring as _sympy_ring


class PoleError(ZeroDivisionError):
    """Raised when a rational function is evaluated at a zero of its denominator."""


def to_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to ``Fraction``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rational numbers")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def fraction_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class Poly:
    """Sparse polynomial in ``nvars`` variables with rational coefficients."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[tuple, object] | None = None):
        self.nvars = nvars
        clean: dict[tuple, Fraction] = {}
        if terms:
            for exps, c in terms.items():
                exps = tuple(exps)
                if len(exps) != nvars:
                    raise ValueError(f"exponent {exps} does not have {nvars} entries")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                c = to_fraction(c)
                if c:
                    clean[exps] = clean.get(exps, Fraction(0)) + c
                    if not clean[exps]:
                        del clean[exps]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "Poly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        c = to_fraction(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def var(cls, nvars: int, i: int) -> "Poly":
        if not 0 <= i < nvars:
            raise IndexError(f"variable {i} out of range for {nvars} variables")
        exps = [0] * nvars
        exps[i] = 1
        return cls._raw(nvars, {tuple(exps): Fraction(1)})

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        return Poly.const(self.nvars, other)

    def __add__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        if not isinstance(other, Poly):
            c = to_fraction(other)
            if not c:
                return Poly.zero(self.nvars)
            return Poly._raw(self.nvars, {e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        out: dict[tuple, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Poly._raw(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (Poly, RationalFunction)):
            return RationalFunction(self) / other
        c = to_fraction(other)
        return self * (1 / c)

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return other == self
        if not isinstance(other, Poly):
            try:
                other = Poly.const(self.nvars, other)
            except TypeError:
                return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- inspection -------------------------------------------------------

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=0)

    def leading(self) -> tuple[tuple, Fraction]:
        """Leading term in graded-lex order."""
        e = max(self.terms, key=lambda t: (sum(t), t))
        return e, self.terms[e]

    # -- calculus and evaluation ------------------------------------------

    def diff(self, i: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return Poly._raw(self.nvars, out)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        pt = [to_fraction(x) for x in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(pt, e):
                if k:
                    term *= x**k
            total += term
        return total

    def evaluate_float(self, point: Sequence[float]) -> float:
        total = 0.0
        for e, c in self.terms.items():
            term = float(c)
            for x, k in zip(point, e):
                if k:
                    term *= x**k
            total += term
        return total

    def compose(self, subs: Sequence["Poly"]) -> "Poly":
        """Substitute ``subs[i]`` for variable ``i``; all substitutes share one ring."""
        if len(subs) != self.nvars:
            raise ValueError(f"need {self.nvars} substitutions, got {len(subs)}")
        if self.nvars == 0:
            raise ValueError("cannot infer target ring for a 0-variable polynomial")
        m = subs[0].nvars
        powers: list[dict[int, Poly]] = [{0: Poly.const(m, 1)} for _ in subs]

        def pw(i: int, k: int) -> Poly:
            cache = powers[i]
            if k not in cache:
                cache[k] = pw(i, k - 1) * subs[i]
            return cache[k]

        out = Poly.zero(m)
        for e, c in self.terms.items():
            term = Poly.const(m, c)
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            out = out + term
        return out

    def rename(self, nvars: int, mapping: Sequence[int]) -> "Poly":
        """Send variable ``i`` to variable ``mapping[i]`` of an ``nvars`` ring.

        Several variables may map to the same target (their exponents add).
        """
        out: dict[tuple, Fraction] = {}
        for e, c in self.terms.items():
            ne = [0] * nvars
            for i, k in enumerate(e):
                if k:
                    ne[mapping[i]] += k
            ne = tuple(ne)
            s = out.get(ne, 0) + c
            if s:
                out[ne] = s
            else:
                out.pop(ne, None)
        return Poly._raw(nvars, out)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        items = sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0])))
        return {"monomials": [{"exps": list(e), "coef": fraction_str(c)} for e, c in items]}

    @classmethod
    def from_json(cls, data: Mapping, nvars: int) -> "Poly":
        terms: dict[tuple, Fraction] = {}
        for mono in data.get("monomials", []):
            e = tuple(int(x) for x in mono["exps"])
            terms[e] = terms.get(e, Fraction(0)) + to_fraction(mono["coef"])
        return cls(nvars, terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0]))):
            mono = "*".join(f"x{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            coef = fraction_str(c)
            if not mono:
                parts.append(coef)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{coef}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


@lru_cache(maxsize=None)
def _ring(nvars: int):
    names = ",".join(f"x{i}" for i in range(nvars)) if nvars else "x0"
    return _sympy_ring(names, QQ)[0]


def _to_sympy(p: Poly):
    R = _ring(p.nvars)
    return R.from_dict({e: QQ(c.numerator, c.denominator) for e, c in p.terms.items()})


def _from_sympy(el, nvars: int) -> Poly:
    return Poly._raw(
        nvars, {tuple(e): Fraction(int(c.numerator), int(c.denominator)) for e, c in el.items()}
    )


def poly_gcd_cofactors(p: Poly, q: Poly) -> tuple[Poly, Poly, Poly]:
    """Return ``(g, p/g, q/g)`` for a polynomial gcd ``g``."""
    if p.nvars == 0:
        return Poly.const(0, 1), p, q
    g, a, b = _to_sympy(p).cofactors(_to_sympy(q))
    n = p.nvars
    return _from_sympy(g, n), _from_sympy(a, n), _from_sympy(b, n)


class RationalFunction:
    """Quotient of two polynomials in a common ring, stored in lowest terms."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Poly, den: Poly | None = None, *, reduce: bool = True):
        if den is None:
            den = Poly.const(num.nvars, 1)
        if num.nvars != den.nvars:
            raise ValueError("numerator and denominator live in different rings")
        if not den:
            raise PoleError("denominator is identically zero")
        self._hash = None
        if not num:
            self.num, self.den = num, Poly.const(num.nvars, 1)
            return
        if den.is_constant():
            c = den.constant_value()
            self.num, self.den = num * (1 / c), Poly.const(num.nvars, 1)
            return
        if reduce:
            _, num, den = poly_gcd_cofactors(num, den)
        _, lc = den.leading()
        if lc != 1:
            num, den = num * (1 / lc), den * (1 / lc)
        self.num, self.den = num, den

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @classmethod
    def const(cls, nvars: int, c) -> "RationalFunction":
        return cls(Poly.const(nvars, c))

    @classmethod
    def var(cls, nvars: int, i: int) -> "RationalFunction":
        return cls(Poly.var(nvars, i))

    @classmethod
    def lift(cls, value, nvars: int) -> "RationalFunction":
        if isinstance(value, RationalFunction):
            return value
        if isinstance(value, Poly):
            return cls(value)
        return cls.const(nvars, value)

    def _coerce(self, other) -> "RationalFunction":
        r = RationalFunction.lift(other, self.nvars)
        if r.nvars != self.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {r.nvars}")
        return r

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def __add__(self, other):
        o = self._coerce(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if self.is_polynomial() and o.is_polynomial():
            return RationalFunction(self.num * o.num)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if not o.num:
            raise PoleError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction.const(self.nvars, 1) / (self ** (-k))
        return RationalFunction(self.num**k, self.den**k, reduce=False)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def diff(self, i: int) -> "RationalFunction":
        if self.is_polynomial():
            return RationalFunction(self.num.diff(i) * (1 / self.den.constant_value()))
        return RationalFunction(
            self.num.diff(i) * self.den - self.num * self.den.diff(i), self.den * self.den
        )

    def evaluate(self, point: Sequence) -> Fraction:
        d = self.den.evaluate(point)
        if d == 0:
            raise PoleError(f"pole at {tuple(point)}")
        return self.num.evaluate(point) / d

    def evaluate_float(self, point: Sequence[float]) -> float:
        d = self.den.evaluate_float(point)
        if d == 0.0:
            raise PoleError(f"pole at {tuple(point)}")
        return self.num.evaluate_float(point) / d

    def compose(self, subs: Sequence["RationalFunction"]) -> "RationalFunction":
        """Substitute rational functions for the variables."""
        if len(subs) != self.nvars:
            raise ValueError(f"need {self.nvars} substitutions, got {len(subs)}")
        m = subs[0].nvars
        if all(s.is_polynomial() for s in subs):
            polys = [s.num * (1 / s.den.constant_value()) for s in subs]
            return RationalFunction(self.num.compose(polys), self.den.compose(polys))
        # homogenize: P(a/b) = sum c prod a^e b^(D-e) / prod b^D with D the degree per variable
        degs = [max(self.num.degree_in(i), self.den.degree_in(i)) for i in range(self.nvars)]
        nums = [s.num for s in subs]
        dens = [s.den for s in subs]

        def homog(p: Poly) -> Poly:
            out = Poly.zero(m)
            for e, c in p.terms.items():
                term = Poly.const(m, c)
                for i, k in enumerate(e):
                    if k:
                        term = term * nums[i] ** k
                    if degs[i] - k:
                        term = term * dens[i] ** (degs[i] - k)
                out = out + term
            return out

        return RationalFunction(homog(self.num), homog(self.den))

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data, nvars: int) -> "RationalFunction":
        if isinstance(data, (int, str)):
            return cls.const(nvars, to_fraction(data))
        if "monomials" in data:
            return cls(Poly.from_json(data, nvars))
        num = Poly.from_json(data["num"], nvars)
        den = Poly.from_json(data["den"], nvars) if "den" in data else Poly.const(nvars, 1)
        return cls(num, den)

    def __repr__(self):
        if self.is_polynomial():
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"


def multi_indices(n: int, max_total: int, min_total: int = 0) -> Iterable[tuple[int, ...]]:
    """All exponent tuples of length ``n`` with total degree in the given range."""
    for e in product(range(max_total + 1), repeat=n):
        if min_total <= sum(e) <= max_total:
            yield e


def factorial_of_index(e: Sequence[int]) -> int:
    return math.prod(math.factorial(k) for k in e)
