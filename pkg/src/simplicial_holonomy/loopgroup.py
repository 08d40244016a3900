"""Simplicial groups: Kan loop groups, abelianization and the W / W-bar constructions.

Free simplicial groups are stored as :class:`SimplicialGroupPresentation`
objects whose face and degeneracy maps send generators to reduced words.
Finite simplicial groups (used for the classifying-space constructions)
are stored by their elements, see :class:`FiniteSimplicialGroup`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Hashable, Sequence

from .chains import AbelianLevels, HomologyGroup, diagonal, smith_normal_form, group_from_factors
from .simpset import Cell, FinSimplicialSet, SimplicialError, connected_components, from_explicit


# ---------------------------------------------------------------------------
# Free group words


class GroupWord(tuple):
    """Reduced word: a tuple of ``(generator, +1 | -1)`` letters.

    >>> w = GroupWord.gen("g") * GroupWord.gen("h") * GroupWord.gen("g").inverse()
    >>> w
    g h g^-1
    >>> (w * GroupWord.gen("g")).exponent_sums()
    {'g': 1, 'h': 1}
    """

    def __new__(cls, letters=()):
        out: list = []
        for g, e in letters:
            if e not in (1, -1):
                raise ValueError(f"exponent {e} is not +-1")
            if out and out[-1][0] == g and out[-1][1] == -e:
                out.pop()
            else:
                out.append((g, e))
        return super().__new__(cls, out)

    @classmethod
    def identity(cls) -> "GroupWord":
        return cls(())

    @classmethod
    def gen(cls, g, power: int = 1) -> "GroupWord":
        e = 1 if power > 0 else -1
        return cls([(g, e)] * abs(power))

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(tuple(self) + tuple(other))

    def inverse(self) -> "GroupWord":
        return GroupWord((g, -e) for g, e in reversed(self))

    def __pow__(self, k: int) -> "GroupWord":
        base = self if k >= 0 else self.inverse()
        out = GroupWord.identity()
        for _ in range(abs(k)):
            out = out * base
        return out

    def is_identity(self) -> bool:
        return len(self) == 0

    def substitute(self, images: Callable[[Hashable], "GroupWord"]) -> "GroupWord":
        out: list = []
        for g, e in self:
            w = images(g)
            out.extend(w if e == 1 else w.inverse())
        return GroupWord(out)

    def exponent_sums(self) -> dict:
        sums: dict = {}
        for g, e in self:
            sums[g] = sums.get(g, 0) + e
        return {g: v for g, v in sums.items() if v}

    def __repr__(self):
        if not self:
            return "e"
        return " ".join(str(g) if e == 1 else f"{g}^-1" for g, e in self)

    def to_json(self) -> list:
        return [[str(g), e] for g, e in self]


def abelianize_word(w: GroupWord) -> dict:
    """Exponent-sum vector of a word, as a sparse dict."""
    return w.exponent_sums()


# ---------------------------------------------------------------------------
# Presentations


@dataclass
class SimplicialGroupPresentation:
    """Degreewise finitely generated simplicial group.

    ``faces[n][g]`` lists ``d_0 g, ..., d_n g`` and ``degens[n][g]`` lists
    ``s_0 g, ..., s_n g``.  Degree ``n`` is the group generated by
    ``gens[n]`` subject to ``relations[n]`` (plus commutators when
    ``abelian`` is set).
    """

    gens: list
    faces: list
    degens: list
    relations: list = field(default_factory=list)
    abelian: bool = False

    def __post_init__(self):
        if not self.relations:
            self.relations = [[] for _ in self.gens]

    @property
    def max_degree(self) -> int:
        return len(self.gens) - 1

    def face(self, n: int, w: GroupWord, i: int) -> GroupWord:
        return w.substitute(lambda g: self.faces[n][g][i])

    def degeneracy(self, n: int, w: GroupWord, i: int) -> GroupWord:
        return w.substitute(lambda g: self.degens[n][g][i])

    def _same(self, a: GroupWord, b: GroupWord) -> bool:
        if self.abelian:
            return a.exponent_sums() == b.exponent_sums()
        return a == b

    def check_identities(self) -> list:
        """Simplicial identities on every generator; returns violations."""
        bad = []
        top = self.max_degree
        for n in range(top + 1):
            for g in self.gens[n]:
                w = GroupWord.gen(g)
                if n >= 2:
                    for j in range(n + 1):
                        for i in range(j):
                            a = self.face(n - 1, self.face(n, w, j), i)
                            b = self.face(n - 1, self.face(n, w, i), j - 1)
                            if not self._same(a, b):
                                bad.append(f"d{i}d{j} on {g}: {a} vs {b}")
                if n + 1 <= top:
                    for j in range(n + 1):
                        sj = self.degeneracy(n, w, j)
                        for i in range(n + 2):
                            lhs = self.face(n + 1, sj, i)
                            if i in (j, j + 1):
                                rhs = w
                            elif n == 0:
                                continue
                            elif i < j:
                                rhs = self.degeneracy(n - 1, self.face(n, w, i), j - 1)
                            else:
                                rhs = self.degeneracy(n - 1, self.face(n, w, i - 1), j)
                            if not self._same(lhs, rhs):
                                bad.append(f"d{i}s{j} on {g}: {lhs} vs {rhs}")
                        if n + 2 <= top:
                            for i in range(j + 1):
                                a = self.degeneracy(n + 1, sj, i)
                                b = self.degeneracy(n + 1, self.degeneracy(n, w, i), j + 1)
                                if not self._same(a, b):
                                    bad.append(f"s{i}s{j} on {g}")
        return bad

    def abelianize(self) -> "SimplicialGroupPresentation":
        return SimplicialGroupPresentation(self.gens, self.faces, self.degens, self.relations, abelian=True)

    def abelian_levels(self) -> AbelianLevels:
        """Integer-matrix form of the abelianization."""
        idx = [{g: k for k, g in enumerate(level)} for level in self.gens]

        def vec(w: GroupWord, n: int) -> list:
            v = [0] * len(self.gens[n])
            for g, e in w.exponent_sums().items():
                v[idx[n][g]] += e
            return v

        face_mats = [[]]
        for n in range(1, self.max_degree + 1):
            mats = []
            for i in range(n + 1):
                cols = [vec(self.faces[n][g][i], n - 1) for g in self.gens[n]]
                mats.append([[cols[b][a] for b in range(len(cols))] for a in range(len(self.gens[n - 1]))])
            face_mats.append(mats)
        rels = [[vec(r, n) for r in self.relations[n]] for n in range(self.max_degree + 1)]
        return AbelianLevels([list(g) for g in self.gens], rels, face_mats)

    def generator_counts(self) -> list:
        return [len(level) for level in self.gens]


# ---------------------------------------------------------------------------
# Maximal trees and the loop group


@dataclass(frozen=True)
class MaximalTree:
    root: str
    vertices: tuple
    edges: tuple

    def contains_cell(self, c: Cell) -> bool:
        return c.base in self.edges or c.base in self.vertices


def maximal_tree(K: FinSimplicialSet, x0: str) -> MaximalTree:
    """Breadth-first spanning tree of the 1-skeleton, visiting vertices in stored order."""
    if x0 not in K.nondeg[0]:
        raise SimplicialError(f"basepoint {x0!r} is not a vertex")
    comps = connected_components(K)
    if len(comps) > 1:
        stray = next(c for c in comps if x0 not in c)
        raise SimplicialError(f"complex is disconnected; vertex {stray[0]!r} is not reachable from {x0!r}")
    order = {v: k for k, v in enumerate(K.nondeg[0])}
    incident: dict = {v: [] for v in K.nondeg[0]}
    if K.max_degree >= 1:
        for e in K.nondeg[1]:
            a, b = K.faces[e][1], K.faces[e][0]
            if a.degens or b.degens or a.base == b.base:
                continue
            incident[a.base].append((order[b.base], b.base, e))
            incident[b.base].append((order[a.base], a.base, e))
    seen, edges = {x0}, []
    q = deque([x0])
    while q:
        u = q.popleft()
        for _, w, e in sorted(incident[u], key=lambda t: (t[0], K.nondeg[1].index(t[2]))):
            if w not in seen:
                seen.add(w)
                edges.append(e)
                q.append(w)
    return MaximalTree(x0, tuple(K.nondeg[0]), tuple(edges))


def _gen_name(c: Cell) -> str:
    return c.base if not c.degens else c.base + "|s" + "".join(str(j) for j in c.degens)


def loop_group(K: FinSimplicialSet, x0: str, T: MaximalTree | None = None, depth: int = 1) -> SimplicialGroupPresentation:
    """Kan's loop group of ``K`` through degree ``depth``.

    Degree ``n`` is free on the ``(n+1)``-cells of ``K`` that are neither in
    the image of ``s_0`` nor in the tree.
    """
    if T is None:
        T = maximal_tree(K, x0)
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if depth + 1 > K.max_degree:
        raise SimplicialError(f"depth {depth} needs K through degree {depth + 1}; have {K.max_degree}")
    for e in T.edges:
        if e not in K.dim_of or K.dim_of[e] != 1:
            raise SimplicialError(f"tree edge {e!r} is not an edge of K")

    def killed(c: Cell) -> bool:
        return (c.degens and c.degens[-1] == 0) or T.contains_cell(c)

    def w(c: Cell) -> GroupWord:
        return GroupWord.identity() if killed(c) else GroupWord.gen(_gen_name(c))

    gens, faces, degens = [], [], []
    cells_by_degree = []
    for n in range(depth + 1):
        cells = [c for c in K.cells(n + 1) if not killed(c)]
        cells_by_degree.append(cells)
        gens.append([_gen_name(c) for c in cells])
    for n in range(depth + 1):
        fn, sn = {}, {}
        for c in cells_by_degree[n]:
            g = _gen_name(c)
            if n >= 1:
                imgs = [w(K.face(c, 1)) * w(K.face(c, 0)).inverse()]
                imgs += [w(K.face(c, i + 1)) for i in range(1, n + 1)]
                fn[g] = imgs
            if n < depth:
                sn[g] = [w(K.degeneracy(c, i + 1)) for i in range(n + 1)]
        faces.append(fn)
        degens.append(sn)
    return SimplicialGroupPresentation(gens, faces, degens)


def abelianize(P: SimplicialGroupPresentation) -> SimplicialGroupPresentation:
    return P.abelianize()


# ---------------------------------------------------------------------------
# pi_0 of a simplicial group


@dataclass
class GroupDescriptor:
    generators: list
    relators: list
    abelianization: HomologyGroup

    def is_trivial(self) -> bool:
        return not self.generators

    def is_free_cyclic(self) -> bool:
        return len(self.generators) == 1 and not self.relators

    def describe(self) -> str:
        if self.is_trivial():
            return "trivial"
        if not self.relators:
            return "Z" if len(self.generators) == 1 else f"free group of rank {len(self.generators)}"
        return f"<{', '.join(map(str, self.generators))} | {', '.join(map(repr, self.relators))}>"

    def to_json(self) -> dict:
        return {
            "generators": [str(g) for g in self.generators],
            "relators": [r.to_json() for r in self.relators],
            "abelianization": self.abelianization.to_json(),
            "description": self.describe(),
        }


def _tietze(gens: list, relators: list) -> tuple[list, list]:
    """Remove generators that a relator of length one sets to the identity."""
    gens, rels = list(gens), [r for r in relators if not r.is_identity()]
    changed = True
    while changed:
        changed = False
        for r in rels:
            if len(r) == 1:
                dead = r[0][0]
                gens.remove(dead)
                rels = [
                    s for s in (x.substitute(lambda g: GroupWord.identity() if g == dead else GroupWord.gen(g)) for x in rels)
                    if not s.is_identity()
                ]
                # drop duplicates and inverse duplicates
                uniq = []
                for s in rels:
                    if s not in uniq and s.inverse() not in uniq:
                        uniq.append(s)
                rels = uniq
                changed = True
                break
    return gens, rels


def pi0_of_group(P: SimplicialGroupPresentation) -> GroupDescriptor:
    """``G_0`` modulo ``d_0(g) d_1(g)^-1`` for the degree-1 generators."""
    if P.max_degree < 1:
        raise SimplicialError("pi_0 needs degrees 0 and 1")
    rels = list(P.relations[0])
    for g in P.gens[1]:
        d0, d1 = P.faces[1][g]
        rels.append(d0 * d1.inverse())
    if P.abelian:
        for a in range(len(P.gens[0])):
            for b in range(a + 1, len(P.gens[0])):
                x, y = GroupWord.gen(P.gens[0][a]), GroupWord.gen(P.gens[0][b])
                rels.append(x * y * x.inverse() * y.inverse())
    gens, rels = _tietze(P.gens[0], rels)
    idx = {g: k for k, g in enumerate(gens)}
    M = []
    for r in rels:
        v = [0] * len(gens)
        for g, e in r.exponent_sums().items():
            v[idx[g]] += e
        M.append(v)
    if M and gens:
        _, D, _ = smith_normal_form(M, len(M), len(gens))
        factors = diagonal(D)
    else:
        factors = []
    return GroupDescriptor(gens, rels, group_from_factors(len(gens) - len(factors), factors))


def constant_presentation(order: int, depth: int) -> SimplicialGroupPresentation:
    """Constant simplicial group ``Z/order`` as an abelian presentation."""
    gens, faces, degens, rels = [], [], [], []
    for n in range(depth + 1):
        g = f"t{n}"
        gens.append([g])
        faces.append({g: [GroupWord.gen(f"t{n - 1}")] * (n + 1)} if n else {})
        degens.append({g: [GroupWord.gen(f"t{n + 1}")] * (n + 1)} if n < depth else {})
        rels.append([GroupWord.gen(g, order)] if order else [])
    return SimplicialGroupPresentation(gens, faces, degens, rels, abelian=True)


# ---------------------------------------------------------------------------
# Finite simplicial groups and W, W-bar


@dataclass
class FiniteSimplicialGroup:
    """A finite group in each degree with explicit face and degeneracy maps."""

    elements: Callable[[int], list]
    mul: Callable[[int, Hashable, Hashable], Hashable]
    inv: Callable[[int, Hashable], Hashable]
    unit: Callable[[int], Hashable]
    face: Callable[[int, Hashable, int], Hashable]
    degeneracy: Callable[[int, Hashable, int], Hashable]
    name: str = "G"


def constant_group(elements: Sequence, mul: Callable, inv: Callable, unit, name: str = "G") -> FiniteSimplicialGroup:
    elems = list(elements)
    return FiniteSimplicialGroup(
        elements=lambda n: elems,
        mul=lambda n, a, b: mul(a, b),
        inv=lambda n, a: inv(a),
        unit=lambda n: unit,
        face=lambda n, g, i: g,
        degeneracy=lambda n, g, i: g,
        name=name,
    )


def cyclic_group(order: int) -> FiniteSimplicialGroup:
    if order < 1:
        raise ValueError("cyclic groups need a positive order")
    return constant_group(range(order), lambda a, b: (a + b) % order, lambda a: (-a) % order, 0, name=f"Z/{order}")


def symmetric_group_3() -> FiniteSimplicialGroup:
    from itertools import permutations

    elems = list(permutations(range(3)))
    return constant_group(
        elems,
        lambda a, b: tuple(a[b[i]] for i in range(3)),
        lambda a: tuple(sorted(range(3), key=lambda i: a[i])),
        (0, 1, 2),
        name="S3",
    )


def parse_group(text: str) -> FiniteSimplicialGroup:
    """Parse ``zmod:N``, ``trivial`` or ``s3``."""
    text = text.strip().lower()
    if text == "trivial":
        return cyclic_group(1)
    if text == "s3":
        return symmetric_group_3()
    if text.startswith("zmod:"):
        try:
            return cyclic_group(int(text[5:]))
        except ValueError as exc:
            raise ValueError(f"bad group order in {text!r}") from exc
    raise ValueError(f"unknown group {text!r}; use zmod:N, trivial or s3")


def _w_face(G: FiniteSimplicialGroup, t: tuple, i: int) -> tuple:
    # t[k] lies in G_{n-k}
    n = len(t) - 1
    if i == n:
        return tuple(G.face(n - k, t[k], n - k) for k in range(n))
    head = tuple(G.face(n - k, t[k], i - k) for k in range(i))
    mid = G.mul(n - i - 1, G.face(n - i, t[i], 0), t[i + 1])
    return head + (mid,) + tuple(t[i + 2:])


def _w_degen(G: FiniteSimplicialGroup, t: tuple, i: int) -> tuple:
    n = len(t) - 1
    head = tuple(G.degeneracy(n - k, t[k], i - k) for k in range(i + 1))
    return head + (G.unit(n - i),) + tuple(t[i + 1:])


def _wbar_face(G: FiniteSimplicialGroup, t: tuple, i: int) -> tuple:
    # t[k] lies in G_{n-1-k}
    n = len(t)
    if i == 0:
        return tuple(t[1:])
    if i == n:
        return tuple(G.face(n - 1 - k, t[k], n - 1 - k) for k in range(n - 1))
    head = tuple(G.face(n - 1 - k, t[k], i - 1 - k) for k in range(i - 1))
    mid = G.mul(n - i - 1, t[i], G.face(n - i, t[i - 1], 0))
    return head + (mid,) + tuple(t[i + 1:])


def _wbar_degen(G: FiniteSimplicialGroup, t: tuple, i: int) -> tuple:
    n = len(t)
    if i == 0:
        return (G.unit(n),) + tuple(t)
    head = tuple(G.degeneracy(n - 1 - k, t[k], i - 1 - k) for k in range(i))
    return head + (G.unit(n - i),) + tuple(t[i:])


def _label(prefix: str) -> Callable:
    return lambda t: prefix + "(" + ",".join(str(x) for x in t) + ")"


def w_levels(G: FiniteSimplicialGroup, depth: int) -> list:
    return [list(product(*[G.elements(n - k) for k in range(n + 1)])) for n in range(depth + 1)]


def wbar_levels(G: FiniteSimplicialGroup, depth: int) -> list:
    return [list(product(*[G.elements(n - 1 - k) for k in range(n)])) for n in range(depth + 1)]


def w_total(G: FiniteSimplicialGroup, depth: int) -> FinSimplicialSet:
    """``WG`` through degree ``depth``; cells are tuples ``(g_n, ..., g_0)``."""
    K, _ = from_explicit(w_levels(G, depth), lambda t, i: _w_face(G, t, i), lambda t, i: _w_degen(G, t, i), _label("W"))
    return K


def wbar(G: FiniteSimplicialGroup, depth: int) -> FinSimplicialSet:
    """``W-bar G`` through degree ``depth``; cells are tuples ``(g_{n-1}, ..., g_0)``."""
    K, _ = from_explicit(
        wbar_levels(G, depth), lambda t, i: _wbar_face(G, t, i), lambda t, i: _wbar_degen(G, t, i), _label("B")
    )
    return K


def check_principal_fibration(G: FiniteSimplicialGroup, depth: int) -> list[dict]:
    """Freeness of the ``G_n`` action on ``WG_n`` and the orbit bijection with ``W-bar G_n``."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    records = []
    wl, bl = w_levels(G, depth), wbar_levels(G, depth)
    for n in range(depth + 1):
        elems = G.elements(n)
        act = lambda h, t: (G.mul(n, h, t[0]),) + tuple(t[1:])
        free = all(act(h, t) != t for t in wl[n] for h in elems if h != G.unit(n))
        orbits = {}
        for t in wl[n]:
            orbits.setdefault(frozenset(act(h, t) for h in elems), t)
        q = lambda t: tuple(t[1:])
        images = {}
        consistent = True
        for orb in orbits:
            imgs = {q(t) for t in orb}
            if len(imgs) != 1:
                consistent = False
            images[orb] = next(iter(imgs))
        bijective = consistent and len(set(images.values())) == len(orbits) == len(bl[n])
        records.append({"name": f"free action degree {n}", "status": "pass" if free else "fail"})
        records.append(
            {
                "name": f"orbit bijection degree {n}",
                "status": "pass" if bijective else "fail",
                "witness": {"orbits": len(orbits), "wbar_cells": len(bl[n])},
            }
        )
    # the quotient map must commute with faces and degeneracies
    simplicial = True
    for n in range(depth + 1):
        for t in wl[n]:
            if n >= 1:
                for i in range(n + 1):
                    if _w_face(G, t, i)[1:] != _wbar_face(G, tuple(t[1:]), i):
                        simplicial = False
            if n + 1 <= depth:
                for i in range(n + 1):
                    if _w_degen(G, t, i)[1:] != _wbar_degen(G, tuple(t[1:]), i):
                        simplicial = False
    records.append({"name": "quotient map simplicial", "status": "pass" if simplicial else "fail"})
    return records


def sset_check_group_identities(G: FiniteSimplicialGroup, depth: int) -> list:
    """Simplicial identities of ``WG`` and ``W-bar G`` on raw tuples."""
    bad = []
    for label, levels, face, degen in (
        ("W", w_levels(G, depth), _w_face, _w_degen),
        ("Wbar", wbar_levels(G, depth), _wbar_face, _wbar_degen),
    ):
        for n, lv in enumerate(levels):
            for t in lv:
                if n >= 2:
                    for j in range(n + 1):
                        for i in range(j):
                            if face(G, face(G, t, j), i) != face(G, face(G, t, i), j - 1):
                                bad.append(f"{label}: d{i}d{j} on {t}")
                if n + 1 <= depth:
                    for j in range(n + 1):
                        s = degen(G, t, j)
                        for i in range(n + 2):
                            lhs = face(G, s, i)
                            if i in (j, j + 1):
                                rhs = t
                            elif n == 0:
                                continue
                            elif i < j:
                                rhs = degen(G, face(G, t, i), j - 1)
                            else:
                                rhs = degen(G, face(G, t, i - 1), j)
                            if lhs != rhs:
                                bad.append(f"{label}: d{i}s{j} on {t}")
    return bad
