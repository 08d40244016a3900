"""Finitely presented simplicial sets.

Only nondegenerate cells are stored.  Every cell is handled as a pair
``Cell(base, degens)`` where ``base`` names a stored nondegenerate cell and
``degens`` is a strictly decreasing tuple ``(j_1 > j_2 > ... > j_k)`` meaning
``s_{j_1} s_{j_2} ... s_{j_k} base`` (Eilenberg-Zilber normal form).

Examples
--------
>>> K = boundary_sphere(2)
>>> [len(K.nondeg[n]) for n in range(K.max_degree + 1)]
[3, 3, 0]
>>> K.face(Cell("0,1", ()), 0)
Cell(base='1', degens=())
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Hashable, Iterable, Iterator, Mapping, NamedTuple, Sequence


class SimplicialError(ValueError):
    """Invalid simplicial data."""


class Cell(NamedTuple):
    base: str
    degens: tuple = ()


def apply_degeneracy(j: int, degens: tuple) -> tuple:
    """Normal form of ``s_j`` composed with the normal-form word ``degens``.

    Uses ``s_i s_k = s_{k+1} s_i`` for ``i <= k``.
    """
    if not degens or j > degens[0]:
        return (j,) + tuple(degens)
    return (degens[0] + 1,) + apply_degeneracy(j, degens[1:])


@dataclass
class FinSimplicialSet:
    """A simplicial set truncated at ``max_degree``.

    Parameters
    ----------
    max_degree
        Highest degree with explicit data.
    nondeg
        ``nondeg[n]`` lists the ids of nondegenerate ``n``-cells.
    faces
        ``faces[id]`` lists the ``n+1`` faces of a nondegenerate ``n``-cell
        (``n >= 1``) as :class:`Cell` values in normal form.
    """

    max_degree: int
    nondeg: list
    faces: dict
    dim_of: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.max_degree < 0:
            raise SimplicialError("max_degree must be nonnegative")
        if len(self.nondeg) != self.max_degree + 1:
            raise SimplicialError(
                f"expected {self.max_degree + 1} degree lists, got {len(self.nondeg)}"
            )
        self.nondeg = [list(level) for level in self.nondeg]
        self.dim_of = {}
        for n, level in enumerate(self.nondeg):
            for cid in level:
                if cid in self.dim_of:
                    raise SimplicialError(f"duplicate cell id {cid!r}")
                self.dim_of[cid] = n
        faces = {}
        for n, level in enumerate(self.nondeg):
            for cid in level:
                fs = self.faces.get(cid, [])
                if n == 0:
                    if fs:
                        raise SimplicialError(f"vertex {cid!r} must not have faces")
                    continue
                if len(fs) != n + 1:
                    raise SimplicialError(f"cell {cid!r} of dim {n} needs {n + 1} faces, got {len(fs)}")
                norm = []
                for f in fs:
                    f = Cell(f[0], tuple(f[1]))
                    self._validate_cell(f, n - 1, context=cid)
                    norm.append(f)
                faces[cid] = norm
        self.faces = faces

    # -- validation -------------------------------------------------------

    def _validate_cell(self, c: Cell, expected_dim: int, context=None):
        if c.base not in self.dim_of:
            raise SimplicialError(f"unknown base cell {c.base!r} (in faces of {context!r})")
        m = self.dim_of[c.base]
        k = len(c.degens)
        if m + k != expected_dim:
            raise SimplicialError(
                f"face {c} of {context!r} has dimension {m + k}, expected {expected_dim}"
            )
        for t, j in enumerate(c.degens):
            if t and j >= c.degens[t - 1]:
                raise SimplicialError(f"degeneracy word {c.degens} is not strictly decreasing")
            if not 0 <= j <= m + k - 1 - t:
                raise SimplicialError(f"degeneracy index {j} out of range in {c}")

    # -- basic structure ---------------------------------------------------

    def dim(self, c: Cell) -> int:
        return self.dim_of[c.base] + len(c.degens)

    def vertices(self) -> list:
        return list(self.nondeg[0])

    def is_degenerate(self, c: Cell) -> bool:
        return bool(c.degens)

    def face(self, c: Cell, i: int) -> Cell:
        """``d_i c`` in normal form."""
        c = Cell(c.base, tuple(c.degens))
        n = self.dim(c)
        if n == 0:
            raise SimplicialError("vertices have no faces")
        if not 0 <= i <= n:
            raise SimplicialError(f"face index {i} out of range for dimension {n}")
        return self._face(c.base, c.degens, i)

    def _face(self, base, degens, i) -> Cell:
        if not degens:
            return self.faces[base][i]
        j, rest = degens[0], degens[1:]
        if i < j:
            inner = self._face(base, rest, i)
            return Cell(inner.base, apply_degeneracy(j - 1, inner.degens))
        if i in (j, j + 1):
            return Cell(base, rest)
        inner = self._face(base, rest, i - 1)
        return Cell(inner.base, apply_degeneracy(j, inner.degens))

    def degeneracy(self, c: Cell, j: int) -> Cell:
        """``s_j c`` in normal form."""
        n = self.dim(c)
        if not 0 <= j <= n:
            raise SimplicialError(f"degeneracy index {j} out of range for dimension {n}")
        return Cell(c.base, apply_degeneracy(j, tuple(c.degens)))

    def cells(self, n: int) -> Iterator[Cell]:
        """All ``n``-cells, degenerate ones included."""
        for m in range(0, n + 1):
            if m > self.max_degree:
                break
            k = n - m
            for base in self.nondeg[m]:
                for subset in combinations(range(n), k):
                    yield Cell(base, tuple(sorted(subset, reverse=True)))

    def count_cells(self, n: int) -> int:
        from math import comb

        return sum(len(self.nondeg[m]) * comb(n, n - m) for m in range(min(n, self.max_degree) + 1))

    # -- checks ------------------------------------------------------------

    def check_identities(self, top: int | None = None) -> list:
        """Exhaustively check the simplicial identities on all cells up to ``top``.

        Returns a list of violation strings (empty when all hold).
        """
        top = self.max_degree if top is None else min(top, self.max_degree)
        bad = []
        for n in range(top + 1):
            for c in self.cells(n):
                if n >= 2:
                    for j in range(n + 1):
                        for i in range(j):
                            a = self.face(self.face(c, j), i)
                            b = self.face(self.face(c, i), j - 1)
                            if a != b:
                                bad.append(f"d{i}d{j} != d{j - 1}d{i} on {c}")
                if n + 1 <= top:
                    for j in range(n + 1):
                        sj = self.degeneracy(c, j)
                        for i in range(n + 2):
                            lhs = self.face(sj, i)
                            if i < j:
                                rhs = self.degeneracy(self.face(c, i), j - 1) if n >= 1 else None
                            elif i in (j, j + 1):
                                rhs = c
                            else:
                                rhs = self.degeneracy(self.face(c, i - 1), j) if n >= 1 else None
                            if rhs is not None and lhs != rhs:
                                bad.append(f"d{i}s{j} identity fails on {c}")
                        if n + 2 <= top:
                            for i in range(j + 1):
                                a = self.degeneracy(self.degeneracy(c, j), i)
                                b = self.degeneracy(self.degeneracy(c, i), j + 1)
                                if a != b:
                                    bad.append(f"s{i}s{j} != s{j + 1}s{i} on {c}")
        return bad

    # -- JSON --------------------------------------------------------------

    def to_json(self) -> dict:
        cells = []
        for n, level in enumerate(self.nondeg):
            for cid in level:
                entry = {"dim": n, "id": cid, "faces": []}
                if n:
                    entry["faces"] = [{"base": f.base, "degens": list(f.degens)} for f in self.faces[cid]]
                cells.append(entry)
        return {"max_degree": self.max_degree, "cells": cells}

    @classmethod
    def from_json(cls, data: Mapping) -> "FinSimplicialSet":
        try:
            max_degree = int(data["max_degree"])
            nondeg = [[] for _ in range(max_degree + 1)]
            faces = {}
            for pos, cell in enumerate(data["cells"]):
                d = int(cell["dim"])
                if not 0 <= d <= max_degree:
                    raise SimplicialError(f"cells[{pos}]: dim {d} outside 0..{max_degree}")
                cid = str(cell["id"])
                nondeg[d].append(cid)
                faces[cid] = [Cell(str(f["base"]), tuple(int(j) for j in f.get("degens", []))) for f in cell.get("faces", [])]
        except (KeyError, TypeError) as exc:
            raise SimplicialError(f"malformed simplicial set JSON: {exc!r}") from exc
        return cls(max_degree, nondeg, faces)


# ---------------------------------------------------------------------------
# Ordered simplicial complexes


@dataclass
class OrderedComplex:
    """Abstract simplicial complex with a vertex order total on each simplex.

    ``order`` is a list of pairs ``(a, b)`` meaning ``a < b``; its transitive
    closure is used.  When ``order`` is empty the vertices are compared
    lexicographically.
    """

    vertices: list
    simplices: list
    order: list = field(default_factory=list)

    def __post_init__(self):
        self.vertices = [str(v) for v in self.vertices]
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise SimplicialError("duplicate vertex id")
        closed = set()
        for s in self.simplices:
            s = frozenset(str(v) for v in s)
            if not s:
                continue
            unknown = s - vset
            if unknown:
                raise SimplicialError(f"simplex {sorted(s)} uses unknown vertices {sorted(unknown)}")
            for k in range(1, len(s) + 1):
                for sub in combinations(sorted(s), k):
                    closed.add(frozenset(sub))
        for v in self.vertices:
            closed.add(frozenset([v]))
        self._less = self._order_closure()
        self._simplices = {}
        for s in closed:
            self._simplices[s] = self._sort(s)
        self.simplices = sorted(self._simplices.values(), key=lambda t: (len(t), [self.rank(v) for v in t]))

    def _order_closure(self):
        if not self.order:
            return None
        less = {v: set() for v in self.vertices}
        for a, b in self.order:
            a, b = str(a), str(b)
            if a not in less or b not in less:
                raise SimplicialError(f"order pair ({a}, {b}) mentions an unknown vertex")
            less[a].add(b)
        # transitive closure by DFS from each vertex
        closure = {}
        for v in self.vertices:
            seen, stack = set(), list(less[v])
            while stack:
                w = stack.pop()
                if w not in seen:
                    seen.add(w)
                    stack.extend(less[w])
            if v in seen:
                raise SimplicialError(f"order has a cycle through {v}")
            closure[v] = seen
        return closure

    def less(self, a, b) -> bool:
        if self._less is None:
            return a < b
        return b in self._less[a]

    def rank(self, v) -> int:
        """Position of ``v`` in a fixed linear extension of the order."""
        if not hasattr(self, "_rank"):
            if self._less is None:
                ext = sorted(self.vertices)
            else:
                # topological sort, ties broken lexicographically
                indeg = {v: 0 for v in self.vertices}
                for a in self.vertices:
                    for b in self._less[a]:
                        indeg[b] += 1
                import heapq

                heap = [v for v in self.vertices if indeg[v] == 0]
                heapq.heapify(heap)
                ext = []
                while heap:
                    a = heapq.heappop(heap)
                    ext.append(a)
                    for b in self._less[a]:
                        indeg[b] -= 1
                        if indeg[b] == 0:
                            heapq.heappush(heap, b)
            self._rank = {v: i for i, v in enumerate(ext)}
        return self._rank[v]

    def _sort(self, s: frozenset) -> tuple:
        verts = sorted(s, key=self.rank)
        for a, b in zip(verts, verts[1:]):
            if not self.less(a, b):
                raise SimplicialError(f"order is not total on simplex {verts}: {a} and {b} incomparable")
        return tuple(verts)

    @property
    def dim(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def simplices_of_dim(self, n: int) -> list:
        return [s for s in self.simplices if len(s) == n + 1]

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "order": [list(p) for p in self.order],
            "simplices": [list(s) for s in self.simplices if len(s) == self._maximal_len(s)],
        }

    def _maximal_len(self, s):
        # keep only maximal simplices in serialized form
        ss = set(s)
        for t in self.simplices:
            if len(t) > len(s) and ss <= set(t):
                return -1
        return len(s)

    @classmethod
    def from_json(cls, data: Mapping) -> "OrderedComplex":
        try:
            return cls(list(data["vertices"]), [list(s) for s in data["simplices"]], [tuple(p) for p in data.get("order", [])])
        except (KeyError, TypeError) as exc:
            raise SimplicialError(f"malformed ordered complex JSON: {exc!r}") from exc


def tuple_id(t: Sequence) -> str:
    return ",".join(str(v) for v in t)


def ordered_to_sset(K: OrderedComplex, max_degree: int | None = None) -> FinSimplicialSet:
    """The simplicial set of weakly monotone vertex tuples of ``K``."""
    if max_degree is None:
        max_degree = K.dim
    if max_degree < K.dim:
        raise SimplicialError(f"max_degree {max_degree} is below dim K = {K.dim}")
    nondeg = [[] for _ in range(max_degree + 1)]
    faces = {}
    for s in K.simplices:
        n = len(s) - 1
        cid = tuple_id(s)
        nondeg[n].append(cid)
        if n:
            faces[cid] = [Cell(tuple_id(s[:i] + s[i + 1:]), ()) for i in range(n + 1)]
    return FinSimplicialSet(max_degree, nondeg, faces)


def boundary_sphere(n: int, max_degree: int | None = None) -> FinSimplicialSet:
    """``S_<=`` of the boundary of the ``n``-simplex on vertices ``0..n``."""
    if n < 1:
        raise SimplicialError("the boundary of a 0-simplex is empty")
    verts = [str(i) for i in range(n + 1)]
    proper = [list(c) for c in combinations(verts, n)]
    K = OrderedComplex(verts, proper)
    return ordered_to_sset(K, n if max_degree is None else max_degree)


def full_simplex(n: int, max_degree: int | None = None) -> FinSimplicialSet:
    verts = [str(i) for i in range(n + 1)]
    K = OrderedComplex(verts, [verts])
    return ordered_to_sset(K, n if max_degree is None else max_degree)


def monotone_tuples(K: OrderedComplex, n: int) -> list:
    """All weakly monotone ``(n+1)``-tuples spanning a simplex of ``K``."""
    out = []
    for s in K.simplices:
        m = len(s) - 1
        if m > n:
            continue
        # surjections [n] -> [m] that are monotone: choose m jump positions among n
        for jumps in combinations(range(1, n + 1), m):
            t, k = [], 0
            for pos in range(n + 1):
                if k < m and pos == jumps[k]:
                    k += 1
                t.append(s[k])
            out.append(tuple(t))
    return out


def tuple_to_cell(t: Sequence) -> Cell:
    """Normal form of a weakly monotone tuple as a cell of ``ordered_to_sset``."""
    base, degens = [t[0]], []
    for pos in range(1, len(t)):
        if t[pos] == t[pos - 1]:
            degens.append(pos - 1)
        else:
            base.append(t[pos])
    return Cell(tuple_id(base), tuple(sorted(degens, reverse=True)))


# ---------------------------------------------------------------------------
# Simplicial sets given by explicit finite levels


def from_explicit(
    levels: Sequence[Iterable[Hashable]],
    face: Callable[[Hashable, int], Hashable],
    degeneracy: Callable[[Hashable, int], Hashable],
    label: Callable[[Hashable], str] = str,
) -> tuple[FinSimplicialSet, Callable[[Hashable], Cell]]:
    """Build a :class:`FinSimplicialSet` from all cells of every level.

    ``levels[n]`` enumerates every ``n``-cell.  Returns the simplicial set and
    a function sending a raw cell to its normal form.
    """
    top = len(levels) - 1
    levels = [list(lv) for lv in levels]
    nondeg = [[] for _ in range(top + 1)]
    nf_cache: dict = {}

    def degenerate_indices(x, n):
        return [i for i in range(n) if degeneracy(face(x, i), i) == x] if n else []

    def normal_form(x, n=None) -> Cell:
        key = x
        if key in nf_cache:
            return nf_cache[key]
        if n is None:
            raise SimplicialError(f"unknown cell {x!r}")
        idx = degenerate_indices(x, n)
        if not idx:
            c = Cell(label(x), ())
        else:
            j = max(idx)
            inner = normal_form(face(x, j), n - 1)
            c = Cell(inner.base, apply_degeneracy(j, inner.degens))
        nf_cache[key] = c
        return c

    faces = {}
    for n, lv in enumerate(levels):
        for x in lv:
            c = normal_form(x, n)
            if not c.degens:
                nondeg[n].append(c.base)
                if n:
                    faces[c.base] = [normal_form(face(x, i), n - 1) for i in range(n + 1)]
    return FinSimplicialSet(top, nondeg, faces), lambda x: nf_cache[x]


# ---------------------------------------------------------------------------
# Nerve of the pair groupoid


class PairSimplex(tuple):
    """An ``n``-simplex ``(x_0, ..., x_n)`` of the nerve of the pair groupoid."""

    @property
    def degree(self) -> int:
        return len(self) - 1

    def face(self, i: int) -> "PairSimplex":
        if not 0 <= i <= self.degree or self.degree == 0:
            raise SimplicialError(f"face d_{i} undefined in degree {self.degree}")
        return PairSimplex(self[:i] + self[i + 1:])

    def degeneracy(self, i: int) -> "PairSimplex":
        if not 0 <= i <= self.degree:
            raise SimplicialError(f"degeneracy s_{i} undefined in degree {self.degree}")
        return PairSimplex(self[: i + 1] + self[i:])

    def is_degenerate(self) -> bool:
        return any(self[k] == self[k + 1] for k in range(self.degree))


def pair_nerve_tuple(points: Sequence, n: int) -> PairSimplex:
    if len(points) != n + 1:
        raise SimplicialError(f"an {n}-simplex of the pair nerve needs {n + 1} points, got {len(points)}")
    return PairSimplex(tuple(tuple(p) if isinstance(p, (list, tuple)) else p for p in points))


def connected_components(K: FinSimplicialSet) -> list[list]:
    adj = {v: set() for v in K.nondeg[0]}
    if K.max_degree >= 1:
        for e in K.nondeg[1]:
            a, b = K.faces[e][1].base, K.faces[e][0].base
            adj[a].add(b)
            adj[b].add(a)
    seen, comps = set(), []
    for v in K.nondeg[0]:
        if v in seen:
            continue
        comp, q = [], deque([v])
        seen.add(v)
        while q:
            u = q.popleft()
            comp.append(u)
            for w in sorted(adj[u], key=K.nondeg[0].index):
                if w not in seen:
                    seen.add(w)
                    q.append(w)
        comps.append(comp)
    return comps


def load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)
