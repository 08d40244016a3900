"""Cech-Deligne cochains on finite covers by Cartesian charts.

Normalization.  ``U(1)``-valued functions are stored as phases ``N/|N|`` of a
complex rational function ``N = re + i*im``.  All forms (connection forms,
curvature, ``dlog``) are stored *multiplied by 2*pi*, so that

* ``dlog(N/|N|) = (re d(im) - im d(re)) / (re^2 + im^2)`` is exact and rational,
* the holonomy of a loop is ``prod exp(i * integral A) * prod g`` and
* the Chern number of a two-chart bundle is ``(1/2pi) * loop integral of dlog g``.

Dividing any stored form by ``2*pi`` gives the real form with the
``(1/2 pi i) g^-1 dg`` convention.

Cochains of the complex ``U(1) -> Omega^1 -> ... -> Omega^n`` are kept as a
map from bidegree ``(q, c)`` (form degree, Cech degree) to Cech cochains; a
Cech cochain maps increasing tuples of chart names to values living on the
reference chart of that intersection.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Mapping, Sequence

import numpy as np

from .forms import PolyMap, RationalForm, exterior_d, pullback
from .poly import PoleError, Poly, RationalFunction, to_fraction


class CoverError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Covers


@dataclass
class Intersection:
    members: tuple
    ref: str
    maps: dict  # member -> PolyMap from ref coordinates to member coordinates
    avoid: list = field(default_factory=list)  # polynomials (ref coords) that must not vanish


class GoodCover:
    """Charts with explicit inclusions of every listed intersection.

    Every intersection ``U_I`` is parametrized by the coordinates of a member
    chart ``ref(I)``; ``maps[k]`` sends those coordinates to chart ``k``.
    """

    def __init__(self, charts: Mapping[str, int], intersections: Sequence[Intersection] = ()):
        self.charts = {str(k): int(v) for k, v in charts.items()}
        self.names = sorted(self.charts)
        self._inter: dict = {}
        for name in self.names:
            n = self.charts[name]
            self._inter[(name,)] = Intersection((name,), name, {name: PolyMap.identity(n)})
        for it in intersections:
            key = tuple(sorted(it.members))
            if it.ref not in key:
                raise CoverError(f"reference chart {it.ref} is not a member of {key}")
            for k in key:
                if k not in self.charts:
                    raise CoverError(f"unknown chart {k}")
            maps = dict(it.maps)
            maps.setdefault(it.ref, PolyMap.identity(self.charts[it.ref]))
            for k in key:
                if k not in maps:
                    raise CoverError(f"intersection {key} lacks a map into chart {k}")
                f = maps[k]
                if f.domain_dim != self.charts[it.ref] or f.codomain_dim != self.charts[k]:
                    raise CoverError(f"map {key} -> {k} has the wrong dimensions")
            self._inter[key] = Intersection(key, it.ref, maps, list(it.avoid))

    def has(self, I: Sequence[str]) -> bool:
        return tuple(sorted(I)) in self._inter

    def intersection(self, I: Sequence[str]) -> Intersection:
        key = tuple(sorted(I))
        if key not in self._inter:
            raise CoverError(f"missing intersection data for {key}")
        return self._inter[key]

    def intersections(self, size: int) -> list:
        return [k for k in self._inter if len(k) == size]

    def dim(self, I) -> int:
        return self.charts[self.intersection(I).ref]

    def restriction(self, I: Sequence[str], J: Sequence[str]) -> PolyMap:
        """Map from ``ref(I)`` coordinates to ``ref(J)`` coordinates for ``J`` inside ``I``."""
        I, J = tuple(sorted(I)), tuple(sorted(J))
        if not set(J) <= set(I):
            raise CoverError(f"{J} is not a sub-intersection of {I}")
        return self.intersection(I).maps[self.intersection(J).ref]

    def check_consistency(self) -> list[str]:
        """Inclusions must compose: ``maps_I[k] == maps_J[k] o maps_I[ref J]``."""
        problems = []
        for I in self._inter:
            for r in range(1, len(I)):
                for J in combinations(I, r):
                    if J not in self._inter:
                        problems.append(f"{I} listed but {J} missing")
                        continue
                    into_J = self.restriction(I, J)
                    for k in J:
                        lhs = self.intersection(I).maps[k]
                        rhs = self.intersection(J).maps[k].compose(into_J)
                        if lhs != rhs:
                            problems.append(f"inclusions of {I} into {k} do not compose through {J}")
        return problems

    def sample_points(self, I, rng: random.Random, count: int, avoid_extra: Sequence[RationalFunction] = (), box: int = 2) -> list:
        """Rational points of ``U_I`` (in reference coordinates) off all listed singular sets."""
        it = self.intersection(I)
        n = self.charts[it.ref]
        dens = [c.den for f in it.maps.values() for c in f.components]
        bad_polys = list(it.avoid) + dens + [r.den for r in avoid_extra] + [r.num for r in avoid_extra]
        pts, tries = [], 0
        while len(pts) < count:
            tries += 1
            if tries > 100 * count + 1000:
                raise CoverError(f"could not sample points of {I}")
            p = tuple(Fraction(rng.randint(-box * 8, box * 8), 8) + Fraction(rng.randint(1, 6), 97) for _ in range(n))
            if all(q.evaluate(p) != 0 for q in bad_polys):
                pts.append(p)
        return pts

    def to_json(self) -> dict:
        inter = []
        for key, it in self._inter.items():
            if len(key) < 2:
                continue
            inter.append(
                {
                    "members": list(key),
                    "ref": it.ref,
                    "maps": {k: f.to_json() for k, f in it.maps.items() if k != it.ref},
                    "avoid": [p.to_json() for p in it.avoid],
                }
            )
        return {"charts": dict(self.charts), "intersections": inter}

    @classmethod
    def from_json(cls, data: Mapping) -> "GoodCover":
        try:
            charts = {str(k): int(v) for k, v in data["charts"].items()}
            inters = []
            for pos, it in enumerate(data.get("intersections", [])):
                ref = str(it["ref"])
                n = charts[ref]
                maps = {str(k): PolyMap.from_json(v) for k, v in it.get("maps", {}).items()}
                avoid = [Poly.from_json(p, n) for p in it.get("avoid", [])]
                inters.append(Intersection(tuple(str(m) for m in it["members"]), ref, maps, avoid))
            return cls(charts, inters)
        except (KeyError, TypeError) as exc:
            raise CoverError(f"malformed cover JSON: {exc!r}") from exc


def affine_cover(matrices: Sequence, offsets: Sequence, depth: int = 4) -> GoodCover:
    """Charts ``phi_k(p) = M_k p + b_k`` of one plane; every intersection is the whole plane."""
    from .subdivision import as_point

    m = len(matrices)
    names = [f"U{k}" for k in range(m)]
    n = len(matrices[0])
    inverses = []
    for M, b in zip(matrices, offsets):
        Mf = [[to_fraction(x) for x in row] for row in M]
        inverses.append((_inverse(Mf), [to_fraction(x) for x in b]))

    def transition(src: int, dst: int) -> PolyMap:
        # x_dst = M_dst (M_src^-1 (x_src - b_src)) + b_dst
        Minv, bsrc = inverses[src]
        Md = [[to_fraction(x) for x in row] for row in matrices[dst]]
        bd = [to_fraction(x) for x in offsets[dst]]
        A = [[sum(Md[i][k] * Minv[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        off = [bd[i] - sum(A[i][j] * bsrc[j] for j in range(n)) for i in range(n)]
        return PolyMap.affine(A, off)

    inters = []
    for size in range(2, min(depth, m) + 1):
        for I in combinations(range(m), size):
            ref = I[0]
            inters.append(Intersection(tuple(names[i] for i in I), names[ref], {names[k]: transition(ref, k) for k in I}))
    return GoodCover({nm: n for nm in names}, inters)


def _inverse(M):
    n = len(M)
    A = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]


# ---------------------------------------------------------------------------
# Phases


class Phase:
    """The unit complex function ``N/|N|`` for ``N = re + i*im``."""

    __slots__ = ("re", "im")

    def __init__(self, re: RationalFunction, im: RationalFunction):
        self.re, self.im = re, im
        if re.nvars != im.nvars:
            raise ValueError("real and imaginary parts live in different rings")
        if re.is_zero() and im.is_zero():
            raise ValueError("the phase of the zero function is undefined")

    @property
    def nvars(self) -> int:
        return self.re.nvars

    @classmethod
    def one(cls, n: int) -> "Phase":
        return cls(RationalFunction.const(n, 1), RationalFunction.const(n, 0))

    @classmethod
    def of(cls, re, im, n: int) -> "Phase":
        return cls(RationalFunction.lift(re, n), RationalFunction.lift(im, n))

    @classmethod
    def from_unit(cls, re, im, n: int) -> "Phase":
        """A function already of modulus one; rejects anything else."""
        re, im = RationalFunction.lift(re, n), RationalFunction.lift(im, n)
        if re * re + im * im != RationalFunction.const(n, 1):
            raise ValueError("|g| != 1: the given function does not have unit modulus")
        return cls(re, im)

    def __mul__(self, other: "Phase") -> "Phase":
        return Phase(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)

    def inverse(self) -> "Phase":
        return Phase(self.re, -self.im)

    def __pow__(self, k: int) -> "Phase":
        base = self if k >= 0 else self.inverse()
        out = Phase.one(self.nvars)
        for _ in range(abs(k)):
            out = out * base
        return out

    def pullback(self, f: PolyMap) -> "Phase":
        return Phase(self.re.compose(f.components), self.im.compose(f.components))

    def value(self, point) -> complex:
        z = complex(float(self.re.evaluate(point)), float(self.im.evaluate(point)))
        if z == 0:
            raise PoleError(f"phase undefined at {point}")
        return z / abs(z)

    def value_float(self, point) -> complex:
        z = complex(self.re.evaluate_float(point), self.im.evaluate_float(point))
        if z == 0:
            raise PoleError(f"phase undefined at {point}")
        return z / abs(z)

    def identity_status(self, points: Sequence) -> tuple[bool, object, str]:
        """Is this phase identically 1?  Returns ``(ok, witness, method)``.

        ``Im N == 0`` is decided exactly; positivity of ``Re N`` is decided
        exactly when ``Re N`` is a constant and by sampling otherwise.
        """
        if not self.im.is_zero():
            for p in points:
                try:
                    if self.im.evaluate(p) != 0:
                        return False, p, "exact"
                except PoleError:
                    continue
            return False, None, "exact"
        if self.re.is_polynomial() and self.re.num.is_constant():
            return self.re.num.constant_value() > 0, None, "exact"
        for p in points:
            try:
                if self.re.evaluate(p) <= 0:
                    return False, p, "sampled"
            except PoleError:
                continue
        return True, None, "exact+sampled sign"

    def __eq__(self, other):
        if not isinstance(other, Phase):
            return NotImplemented
        return (self * other.inverse()).im.is_zero()

    def to_json(self) -> dict:
        return {"re": self.re.to_json(), "im": self.im.to_json()}

    @classmethod
    def from_json(cls, data: Mapping, n: int) -> "Phase":
        re = RationalFunction.from_json(data["re"], n)
        im = RationalFunction.from_json(data["im"], n)
        if data.get("unit", False):
            return cls.from_unit(re, im, n)
        return cls(re, im)

    def __repr__(self):
        return f"phase({self.re!r} + i*({self.im!r}))"


def dlog(g: Phase) -> RationalForm:
    """``d arg g`` (= 2*pi times the normalized ``dlog``) as an exact rational 1-form."""
    n = g.nvars
    re, im = g.re, g.im
    coeffs = {}
    den = re * re + im * im
    for j in range(n):
        c = (re * im.diff(j) - im * re.diff(j)) / den
        if not c.is_zero():
            coeffs[(j,)] = c
    return RationalForm(n, 1, coeffs)


# ---------------------------------------------------------------------------
# Cech and Cech-Deligne cochains


def _restrict(value, f: PolyMap):
    if isinstance(value, Phase):
        return value.pullback(f)
    return pullback(value, f)


def cech_delta(cover: GoodCover, cochain: Mapping, cdeg: int, q: int, n_dim: int | None = None) -> dict:
    """Cech coboundary of a cochain of Cech degree ``cdeg`` and form degree ``q``.

    Values are phases (``q == 0``, multiplicative) or ``q``-forms.
    """
    out = {}
    for I in cover.intersections(cdeg + 2):
        acc = None
        for k in range(cdeg + 2):
            J = I[:k] + I[k + 1:]
            if J not in cochain:
                continue
            val = _restrict(cochain[J], cover.restriction(I, J))
            if q == 0:
                val = val if k % 2 == 0 else val.inverse()
                acc = val if acc is None else acc * val
            else:
                val = val if k % 2 == 0 else -val
                acc = val if acc is None else acc + val
        if acc is None:
            dim = cover.dim(I)
            acc = Phase.one(dim) if q == 0 else RationalForm.zero(dim, q)
        out[I] = acc
    return out


@dataclass
class DeligneCochain:
    """A cochain of total degree ``degree`` in the complex ``U(1) -> Omega^1 -> ... -> Omega^level``."""

    level: int
    degree: int
    slots: dict  # (q, c) -> {I: value}

    def slot(self, q: int) -> dict:
        return self.slots.get((q, self.degree - q), {})


def _zero_value(cover: GoodCover, I, q: int):
    return Phase.one(cover.dim(I)) if q == 0 else RationalForm.zero(cover.dim(I), q)


def total_differential(cover: GoodCover, c: DeligneCochain) -> DeligneCochain:
    """``D = d + (-1)^q delta``; ``d`` is ``dlog`` on the ``U(1)`` slot and zero on ``Omega^level``."""
    p = c.degree
    out: dict = {}
    for q in range(0, min(p + 1, c.level) + 1):
        cd = p + 1 - q
        if cd < 0:
            continue
        comp: dict = {}
        # vertical part: d of the (q-1, cd) slot
        if q >= 1 and (q - 1, cd) in c.slots:
            for I, v in c.slots[(q - 1, cd)].items():
                comp[I] = dlog(v) if q == 1 else exterior_d(v)
        # Cech part: (-1)^q delta of the (q, cd-1) slot
        if cd >= 1 and (q, cd - 1) in c.slots:
            delta = cech_delta(cover, c.slots[(q, cd - 1)], cd - 1, q)
            for I, v in delta.items():
                if q == 0:
                    comp[I] = comp[I] * v if I in comp else v
                else:
                    v = v if q % 2 == 0 else -v
                    comp[I] = comp[I] + v if I in comp else v
        for I in cover.intersections(cd + 1):
            if I not in comp:
                comp[I] = _zero_value(cover, I, q)
        out[(q, cd)] = comp
    return DeligneCochain(c.level, p + 1, out)


def degree1_cochain(g: Mapping, A: Mapping) -> DeligneCochain:
    """Bundle data: ``g[(i, j)]`` on double overlaps, ``A[i]`` on charts."""
    return DeligneCochain(1, 1, {(0, 1): {tuple(k): v for k, v in g.items()}, (1, 0): {(k,): v for k, v in A.items()}})


def degree2_cochain(g: Mapping, A: Mapping, B: Mapping) -> DeligneCochain:
    return DeligneCochain(
        2,
        2,
        {
            (0, 2): {tuple(k): v for k, v in g.items()},
            (1, 1): {tuple(k): v for k, v in A.items()},
            (2, 0): {(k,): v for k, v in B.items()},
        },
    )


# ---------------------------------------------------------------------------
# verification


def _check_zero_form(w: RationalForm, points) -> tuple[bool, object, float]:
    if w.is_zero():
        return True, None, 0.0
    for p in points:
        try:
            for idx, c in w.coeffs.items():
                v = c.evaluate(p)
                if v != 0:
                    return False, {"point": [str(x) for x in p], "index": [i + 1 for i in idx]}, float(abs(v))
        except PoleError:
            continue
    # nonzero form that vanished at all samples: still not identically zero
    return False, None, float("nan")


_SLOT_NAMES = {
    1: {(1, 1): "A_j - A_i = dlog g_ij", (0, 2): "g_jk g_ik^-1 g_ij = 1"},
    2: {
        (2, 1): "dA_ij = B_i - B_j",
        (1, 2): "A_jk - A_ik + A_ij = dlog g_ijk",
        (0, 3): "g_jkl g_ikl^-1 g_ijl g_ijk^-1 = 1",
    },
}


def verify_cocycle(cover: GoodCover, c: DeligneCochain, samples: int = 200, tol: float = 1e-9, seed: int = 0) -> list[dict]:
    """Check ``D c = 0`` slot by slot; one record per identity and intersection."""
    rng = random.Random(seed)
    Dc = total_differential(cover, c)
    records = []
    for key in sorted(Dc.slots, key=lambda k: -k[0]):
        q, cd = key
        if q == c.level + 1:
            continue
        name = _SLOT_NAMES.get(c.level, {}).get(key, f"slot (form {q}, cech {cd})")
        for I, v in sorted(Dc.slots[key].items()):
            pts = cover.sample_points(I, rng, min(samples, 50) if q else samples)
            if q == 0:
                ok, wit, method = v.identity_status(pts)
                resid = 0.0 if ok else (abs(v.value(wit) - 1) if wit is not None else float("nan"))
                witness = None if wit is None else {"point": [str(x) for x in wit]}
            else:
                ok, witness, resid = _check_zero_form(v, pts)
                method = "exact"
            records.append(
                {
                    "name": f"{name} on {'/'.join(I)}",
                    "status": "pass" if ok else "fail",
                    "method": method,
                    "witness": witness,
                    "residual": resid,
                }
            )
    return records


def verify_cocycle_deg1(cover: GoodCover, c: DeligneCochain, **kw) -> list[dict]:
    if c.level != 1 or c.degree != 1:
        raise ValueError("expected a degree-1 cochain of the level-1 complex")
    return verify_cocycle(cover, c, **kw)


def verify_cocycle_deg2(cover: GoodCover, c: DeligneCochain, **kw) -> list[dict]:
    if c.level != 2 or c.degree != 2:
        raise ValueError("expected a degree-2 cochain of the level-2 complex")
    return verify_cocycle(cover, c, **kw)


def all_pass(records: Sequence[dict]) -> bool:
    return all(r["status"] == "pass" for r in records)


def curvature(cover: GoodCover, c: DeligneCochain, check: bool = True) -> dict:
    """``F_i = dA_i`` per chart; verifies ``F_i = F_j`` on overlaps."""
    if check and not all_pass(verify_cocycle_deg1(cover, c)):
        raise ValueError("curvature needs a cocycle")
    F = {I[0]: exterior_d(A) for I, A in c.slots[(1, 0)].items()}
    for I in cover.intersections(2):
        ref = cover.intersection(I).ref
        vals = [pullback(F[k], cover.intersection(I).maps[k]) for k in I]
        if any(v != vals[0] for v in vals[1:]):
            raise ValueError(f"curvature does not glue on {I}")
    return F


# ---------------------------------------------------------------------------
# quadrature


def _gauss(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def line_integral(w: RationalForm, path: PolyMap, order: int = 12, panels: int = 16) -> float:
    """``integral_0^1 w(path(t)) . path'(t) dt`` by composite Gauss-Legendre."""
    jac = [c.diff(0) for c in path.components]
    nodes, weights = _gauss(order)
    total = 0.0
    for p in range(panels):
        a = p / panels
        for x, wt in zip(nodes, weights):
            t = a + x / panels
            pt = path.evaluate_float([t])
            vec = [d.evaluate_float([t]) for d in jac]
            total += wt / panels * w.evaluate_float(pt, [vec])
    return total


@dataclass
class Segment:
    chart: str
    path: PolyMap  # [0,1] -> chart coordinates


@dataclass
class ChartPath:
    """A loop cut into chart-wise segments.

    ``transitions[s]`` is the point (in the reference coordinates of the
    overlap of the charts of segments ``s`` and ``s+1``) where the loop
    changes chart; the last entry closes the loop back to segment 0.
    """

    segments: list
    transitions: list

    def to_json(self) -> dict:
        return {
            "segments": [{"chart": s.chart, "map": s.path.to_json()} for s in self.segments],
            "transitions": [[str(x) for x in p] if p is not None else None for p in self.transitions],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "ChartPath":
        segs = [Segment(str(s["chart"]), PolyMap.from_json(s["map"])) for s in data["segments"]]
        trans = [None if p is None else tuple(to_fraction(x) for x in p) for p in data.get("transitions", [None] * len(segs))]
        return cls(segs, trans)


def holonomy(cover: GoodCover, c: DeligneCochain, path: ChartPath, order: int = 12, panels: int = 16, tol: float = 1e-9) -> complex:
    """``prod exp(i * integral_seg A) * prod g_{ij}(transition)`` around a loop."""
    A = {I[0]: v for I, v in c.slots[(1, 0)].items()}
    g = c.slots[(0, 1)]
    hol = 1.0 + 0.0j
    nseg = len(path.segments)
    if len(path.transitions) != nseg:
        raise CoverError("need one transition entry per segment")
    for s, seg in enumerate(path.segments):
        if seg.chart not in A:
            raise CoverError(f"no connection form on chart {seg.chart}")
        hol *= cmath.exp(1j * line_integral(A[seg.chart], seg.path, order, panels))
        nxt = path.segments[(s + 1) % nseg]
        end = seg.path.evaluate_float([1.0])
        start = nxt.path.evaluate_float([0.0])
        i, j = seg.chart, nxt.chart
        if i == j:
            if max(abs(a - b) for a, b in zip(end, start)) > tol:
                raise CoverError(f"segments {s} and {(s + 1) % nseg} do not meet")
            continue
        p = path.transitions[s]
        if p is None:
            raise CoverError(f"segment {s} changes chart without a transition point")
        it = cover.intersection((i, j))
        pi = it.maps[i].evaluate_float([float(x) for x in p])
        pj = it.maps[j].evaluate_float([float(x) for x in p])
        if max(abs(a - b) for a, b in zip(pi, end)) > tol or max(abs(a - b) for a, b in zip(pj, start)) > tol:
            raise CoverError(f"transition point {p} is not the junction of segments {s} and {(s + 1) % nseg}")
        if any(q.evaluate_float([float(x) for x in p]) == 0 for q in it.avoid):
            raise CoverError(f"transition point {p} lies outside the overlap")
        key = tuple(sorted((i, j)))
        val = g[key].value_float([float(x) for x in p])
        hol *= val if (i, j) == key else val.conjugate()
    return hol


def circle_loop(center: Sequence[float], radius: float):
    """Closed curve ``t -> center + radius*(cos 2 pi t, sin 2 pi t)`` with derivative."""

    def gamma(t):
        a = 2 * math.pi * t
        return (center[0] + radius * math.cos(a), center[1] + radius * math.sin(a)), (
            -2 * math.pi * radius * math.sin(a),
            2 * math.pi * radius * math.cos(a),
        )

    return gamma


def chern_number(cover: GoodCover, c: DeligneCochain, loop=None, overlap=None, samples: int = 256) -> dict:
    """``(1/2 pi) * integral of dlog g_ji`` around a loop in ``U_i cap U_j``.

    The loop (in reference coordinates of the overlap, default the unit
    circle) should bound the part of the manifold covered by chart ``i``.
    Periodic trapezoid rule with ``samples`` nodes.
    """
    if overlap is None:
        overs = cover.intersections(2)
        if len(overs) != 1:
            raise CoverError("name the overlap explicitly for covers with several double intersections")
        overlap = overs[0]
    overlap = tuple(sorted(overlap))
    if loop is None:
        loop = circle_loop((0.0, 0.0), 1.0)
    w = dlog(c.slots[(0, 1)][overlap].inverse())
    total = 0.0
    for k in range(samples):
        pt, vel = loop(k / samples)
        total += w.evaluate_float(pt, [vel])
    raw = total / samples / (2 * math.pi)
    rounded = round(raw)
    return {"raw": raw, "chern": int(rounded), "deviation": abs(raw - rounded), "flag": abs(raw - rounded) > 0.01}


def disk_flux(F: RationalForm, center: Sequence[float], radius: float, n_r: int = 24, n_theta: int = 128) -> float:
    """``integral_D F`` over a disk, polar coordinates, Gauss-Legendre in r."""
    nodes, weights = _gauss(n_r)
    total = 0.0
    for x, wt in zip(nodes, weights):
        r = radius * x
        acc = 0.0
        for k in range(n_theta):
            th = 2 * math.pi * k / n_theta
            pt = (center[0] + r * math.cos(th), center[1] + r * math.sin(th))
            acc += F.evaluate_float(pt, [(1.0, 0.0), (0.0, 1.0)])
        total += wt * radius * r * acc * (2 * math.pi / n_theta)
    return total


def rational_circle(center: Sequence, radius, chart: str, rotate_from: int = 0, quarters: int = 4) -> list:
    """Quarter arcs ``t -> c + r * R^q ((1-t^2)/(1+t^2), 2t/(1+t^2))``, counterclockwise."""
    t = RationalFunction.var(1, 0)
    one = RationalFunction.const(1, 1)
    cx, sx = (one - t * t) / (one + t * t), (t + t) / (one + t * t)
    rot = [(cx, sx), (-sx, cx), (-cx, -sx), (sx, -cx)]
    c0, c1, r = to_fraction(center[0]), to_fraction(center[1]), to_fraction(radius)
    segs = []
    for q in range(rotate_from, rotate_from + quarters):
        a, b = rot[q % 4]
        segs.append(Segment(chart, PolyMap(1, [a * r + c0, b * r + c1])))
    return segs


# ---------------------------------------------------------------------------
# The monopole bundle on the two-sphere


def _inversion(n: int = 2) -> PolyMap:
    x, y = RationalFunction.var(2, 0), RationalFunction.var(2, 1)
    r2 = x * x + y * y
    return PolyMap(2, [x / r2, -y / r2])


def sphere_cover() -> GoodCover:
    """Two stereographic charts ``N`` (coordinate z) and ``S`` (coordinate w = 1/z)."""
    r2 = Poly.var(2, 0) ** 2 + Poly.var(2, 1) ** 2
    return GoodCover({"N": 2, "S": 2}, [Intersection(("N", "S"), "N", {"S": _inversion()}, [r2])])


def _angular_form(k: int) -> RationalForm:
    x, y = RationalFunction.var(2, 0), RationalFunction.var(2, 1)
    den = RationalFunction.const(2, 1) + x * x + y * y
    return RationalForm(2, 1, {(0,): -y * k / den, (1,): x * k / den})


def conj_power(k: int) -> Phase:
    """Phase of ``conj(z)^k`` (``z^|k|`` for negative ``k``)."""
    x, y = RationalFunction.var(2, 0), RationalFunction.var(2, 1)
    base = Phase(x, -y) if k >= 0 else Phase(x, y)
    return base ** abs(k)


def monopole(k: int) -> tuple[GoodCover, DeligneCochain]:
    """Charge-``k`` monopole: ``A_N = k(x dy - y dx)/(1+|z|^2)``, same shape in ``S``, ``g_NS = phase(conj z^k)``."""
    cover = sphere_cover()
    c = degree1_cochain({("N", "S"): conj_power(k)}, {"N": _angular_form(k), "S": _angular_form(k)})
    return cover, c


def monopole_curvature(k: int) -> RationalForm:
    x, y = RationalFunction.var(2, 0), RationalFunction.var(2, 1)
    den = RationalFunction.const(2, 1) + x * x + y * y
    return RationalForm(2, 2, {(0, 1): RationalFunction.const(2, 2 * k) / (den * den)})


def equator_path() -> ChartPath:
    """Unit circle: upper half in chart ``N``, lower half in chart ``S``."""
    north = rational_circle((0, 0), 1, "N", 0, 2)
    inv = _inversion()
    south = [Segment("S", inv.compose(s.path)) for s in rational_circle((0, 0), 1, "N", 2, 2)]
    segs = north + south
    transitions = [None, (Fraction(-1), Fraction(0)), None, (Fraction(1), Fraction(0))]
    return ChartPath(segs, transitions)


# ---------------------------------------------------------------------------
# serialization and random data


def cochain_to_json(cover: GoodCover, c: DeligneCochain) -> dict:
    slots = []
    for (q, cd), comp in sorted(c.slots.items()):
        entries = []
        for I, v in sorted(comp.items()):
            entries.append({"on": list(I), "value": v.to_json()})
        slots.append({"form_degree": q, "cech_degree": cd, "entries": entries})
    return {"level": c.level, "degree": c.degree, "cover": cover.to_json(), "slots": slots, "normalization": "forms scaled by 2*pi"}


def cochain_from_json(data: Mapping) -> tuple[GoodCover, DeligneCochain]:
    try:
        cover = GoodCover.from_json(data["cover"])
        slots = {}
        for s in data["slots"]:
            q, cd = int(s["form_degree"]), int(s["cech_degree"])
            comp = {}
            for e in s["entries"]:
                I = tuple(sorted(str(x) for x in e["on"]))
                if len(I) != cd + 1:
                    raise CoverError(f"entry on {I} does not have Cech degree {cd}")
                n = cover.dim(I)
                comp[I] = Phase.from_json(e["value"], n) if q == 0 else RationalForm.from_json(e["value"])
            slots[(q, cd)] = comp
        return cover, DeligneCochain(int(data["level"]), int(data["degree"]), slots)
    except (KeyError, TypeError) as exc:
        raise CoverError(f"malformed cochain JSON: {exc!r}") from exc


def random_phase(rng: random.Random, n: int, dominant: int = 20) -> Phase:
    """Phase of an affine complex function whose constant term dominates on the box ``|x| <= 2``."""
    re = Poly.const(n, dominant + rng.randint(0, 5))
    im = Poly.const(n, rng.randint(-5, 5))
    for j in range(n):
        re = re + Poly.var(n, j) * Fraction(rng.randint(-3, 3), rng.randint(1, 3))
        im = im + Poly.var(n, j) * Fraction(rng.randint(-3, 3), rng.randint(1, 3))
    return Phase(RationalFunction(re), RationalFunction(im))


def random_form(rng: random.Random, n: int, q: int, max_deg: int = 2) -> RationalForm:
    from itertools import product

    coeffs = {}
    for idx in combinations(range(n), q):
        terms = {}
        for e in product(range(max_deg + 1), repeat=n):
            if sum(e) <= max_deg and rng.random() < 0.5:
                terms[e] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        coeffs[idx] = RationalFunction(Poly(n, terms))
    return RationalForm(n, q, coeffs)


def random_cochain(cover: GoodCover, rng: random.Random, level: int, degree: int) -> DeligneCochain:
    slots = {}
    for q in range(0, min(degree, level) + 1):
        cd = degree - q
        comp = {}
        for I in cover.intersections(cd + 1):
            n = cover.dim(I)
            comp[I] = random_phase(rng, n) if q == 0 else random_form(rng, n, q)
        slots[(q, cd)] = comp
    return DeligneCochain(level, degree, slots)


def is_zero_cochain(c: DeligneCochain, cover: GoodCover, rng: random.Random) -> bool:
    for (q, cd), comp in c.slots.items():
        for I, v in comp.items():
            if q == 0:
                ok, _, _ = v.identity_status(cover.sample_points(I, rng, 20))
                if not ok:
                    return False
            elif not v.is_zero():
                return False
    return True


def gauge_transform(cover: GoodCover, c: DeligneCochain, h: Mapping[str, Phase]) -> DeligneCochain:
    """``c + D h`` for a degree-0 cochain ``h`` (one phase per chart)."""
    h0 = DeligneCochain(c.level, 0, {(0, 0): {(k,): v for k, v in h.items()}})
    Dh = total_differential(cover, h0)
    slots = {}
    for key, comp in c.slots.items():
        q = key[0]
        new = {}
        for I, v in comp.items():
            w = Dh.slots.get(key, {}).get(I)
            if w is None:
                new[I] = v
            else:
                new[I] = v * w if q == 0 else v + w
        slots[key] = new
    return DeligneCochain(c.level, c.degree, slots)
