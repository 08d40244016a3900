"""Integer chain complexes, Smith normal form and homology.

All arithmetic uses Python integers, so torsion coefficients are exact no
matter how large intermediate entries become.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .simpset import FinSimplicialSet, OrderedComplex, SimplicialError


Matrix = list  # list of rows of ints


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix, inner: int | None = None) -> Matrix:
    if inner is None:
        inner = len(B)
    cols = len(B[0]) if B else 0
    out = zeros(len(A), cols)
    for i, row in enumerate(A):
        orow = out[i]
        for k in range(inner):
            a = row[k]
            if a:
                for j, b in enumerate(B[k]):
                    if b:
                        orow[j] += a * b
    return out


def transpose(A: Matrix, rows: int | None = None, cols: int | None = None) -> Matrix:
    if rows is None:
        rows = len(A)
    if cols is None:
        cols = len(A[0]) if A else 0
    return [[A[i][j] for i in range(rows)] for j in range(cols)]


def is_zero_matrix(A: Matrix) -> bool:
    return all(not x for row in A for x in row)


def determinant(A: Matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for r in range(k + 1, n):
                if M[r][k]:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(M: Matrix, rows: int | None = None, cols: int | None = None):
    """Return ``(U, D, V)`` with ``U @ M @ V == D``.

    ``U`` and ``V`` are unimodular and ``D`` is diagonal with each nonzero
    diagonal entry positive and dividing the next.  Pivots are chosen with
    the smallest absolute value among the remaining block.

    >>> U, D, V = smith_normal_form([[2, 0], [0, 3]])
    >>> D
    [[1, 0], [0, 6]]
    """
    m = len(M) if rows is None else rows
    n = (len(M[0]) if M else 0) if cols is None else cols
    A = [list(map(int, r)) for r in M] if m else []
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        if i != j:
            A[i], A[j] = A[j], A[i]
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for row in A:
                row[i], row[j] = row[j], row[i]
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row_dst -= q * row_src
        if q:
            rs, rd = A[src], A[dst]
            for k in range(n):
                if rs[k]:
                    rd[k] -= q * rs[k]
            us, ud = U[src], U[dst]
            for k in range(m):
                if us[k]:
                    ud[k] -= q * us[k]

    def add_col(src, dst, q):  # col_dst -= q * col_src
        if q:
            for row in A:
                if row[src]:
                    row[dst] -= q * row[src]
            for row in V:
                if row[src]:
                    row[dst] -= q * row[src]

    t = 0
    while t < min(m, n):
        # smallest nonzero pivot in the remaining block
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(t, i, A[i][t] // p)
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(t, j, A[t][j] // p)
                    if A[t][j]:
                        done = False
            if done:
                # divisibility: pivot must divide every remaining entry
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(bad, t, -1)  # row_t += row_bad
                continue
            # move the smallest remaining entry of row/col t to the pivot
            cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
            cand += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
            _, i, j = min(cand)
            swap_rows(t, i)
            swap_cols(t, j)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, A, V


def diagonal(D: Matrix) -> list[int]:
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i]]


def rank(M: Matrix, rows: int | None = None, cols: int | None = None) -> int:
    return len(diagonal(smith_normal_form(M, rows, cols)[1]))


def integer_kernel(M: Matrix, rows: int, cols: int) -> Matrix:
    """Basis of ``{x in Z^cols : M x = 0}`` returned as columns of a ``cols x k`` matrix."""
    _, D, V = smith_normal_form(M, rows, cols)
    r = len(diagonal(D))
    return [row[r:] for row in V]


def lattice_basis(G: Matrix, rows: int, cols: int) -> Matrix:
    """Basis (as columns) of the lattice spanned by the columns of ``G``."""
    _, D, V = smith_normal_form(G, rows, cols)
    r = len(diagonal(D))
    GV = matmul(G, V, cols) if rows else []
    return [row[:r] for row in GV] if rows else []


def solve_in_lattice(basis: Matrix, b: Sequence[int], rows: int, r: int) -> list[int]:
    """Integer coordinates ``c`` with ``basis @ c == b`` (``basis`` has full column rank)."""
    U, D, V = smith_normal_form(basis, rows, r)
    Ub = [sum(U[i][k] * b[k] for k in range(rows)) for i in range(rows)]
    w = []
    for k in range(r):
        q, rem = divmod(Ub[k], D[k][k])
        if rem:
            raise ValueError("vector is not in the lattice")
        w.append(q)
    if any(Ub[k] for k in range(r, rows)):
        raise ValueError("vector is not in the span of the lattice")
    return [sum(V[i][k] * w[k] for k in range(r)) for i in range(r)]


# ---------------------------------------------------------------------------
# Chain complexes and homology


@dataclass(frozen=True)
class HomologyGroup:
    betti: int
    torsion: tuple = ()

    def __post_init__(self):
        tors = tuple(int(t) for t in self.torsion)
        if any(t <= 1 for t in tors):
            raise ValueError("torsion coefficients must exceed 1")
        if any(b % a for a, b in zip(tors, tors[1:])):
            raise ValueError("torsion coefficients must form a divisibility chain")
        object.__setattr__(self, "torsion", tors)

    def is_trivial(self) -> bool:
        return self.betti == 0 and not self.torsion

    def to_json(self) -> dict:
        return {"betti": self.betti, "torsion": list(self.torsion)}

    def __str__(self):
        parts = []
        if self.betti:
            parts.append("Z" if self.betti == 1 else f"Z^{self.betti}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def group_from_factors(free_rank: int, factors: Sequence[int]) -> HomologyGroup:
    tors = sorted(abs(d) for d in factors if abs(d) > 1)
    return HomologyGroup(free_rank, tuple(tors))


@dataclass
class ChainComplex:
    """Chain complex of free abelian groups in degrees ``0..top``.

    ``boundary[n]`` is the ``ranks[n-1] x ranks[n]`` matrix of ``d_n``
    (``boundary[0]`` is the zero map to the zero group).
    """

    ranks: list
    boundary: list
    labels: list = field(default_factory=list)

    @property
    def top(self) -> int:
        return len(self.ranks) - 1

    def check_d_squared(self) -> bool:
        for n in range(2, self.top + 1):
            prod = matmul(self.boundary[n - 1], self.boundary[n], self.ranks[n - 1]) if self.ranks[n - 2] else []
            if prod and not is_zero_matrix(prod):
                return False
        return True

    def homology(self, n: int) -> HomologyGroup:
        return homology(self, n)


def homology(C: ChainComplex, n: int) -> HomologyGroup:
    """``H_n`` of ``C``; needs the boundary in degree ``n+1``."""
    if n < 0 or n + 1 > C.top:
        raise SimplicialError(
            f"H_{n} needs boundary data through degree {n + 1}; complex stops at {C.top}"
        )
    dn = C.boundary[n]
    rank_n = rank(dn, C.ranks[n - 1], C.ranks[n]) if n > 0 else 0
    _, D, _ = smith_normal_form(C.boundary[n + 1], C.ranks[n], C.ranks[n + 1])
    factors = diagonal(D)
    z = C.ranks[n] - rank_n
    return group_from_factors(z - len(factors), factors)


def normalized_complex(K: FinSimplicialSet, top: int | None = None) -> ChainComplex:
    """Normalized chains: basis the nondegenerate cells, degenerate faces dropped."""
    if top is None:
        top = K.max_degree
    if top > K.max_degree:
        raise SimplicialError(f"top {top} exceeds stored degree {K.max_degree}")
    ranks = [len(K.nondeg[n]) for n in range(top + 1)]
    index = [{cid: k for k, cid in enumerate(K.nondeg[n])} for n in range(top + 1)]
    bd = [zeros(0, ranks[0])]
    for n in range(1, top + 1):
        M = zeros(ranks[n - 1], ranks[n])
        for col, cid in enumerate(K.nondeg[n]):
            for i, f in enumerate(K.faces[cid]):
                if not f.degens:
                    M[index[n - 1][f.base]][col] += -1 if i % 2 else 1
        bd.append(M)
    return ChainComplex(ranks, bd, [list(K.nondeg[n]) for n in range(top + 1)])


def simplicial_chain_complex(K: OrderedComplex, top: int | None = None) -> ChainComplex:
    """Oriented simplicial chains of an ordered complex, computed directly from the simplices."""
    if top is None:
        top = K.dim + 1
    levels = [[s for s in K.simplices if len(s) == n + 1] for n in range(top + 1)]
    index = [{s: k for k, s in enumerate(lv)} for lv in levels]
    ranks = [len(lv) for lv in levels]
    bd = [zeros(0, ranks[0])]
    for n in range(1, top + 1):
        M = zeros(ranks[n - 1], ranks[n])
        for col, s in enumerate(levels[n]):
            for i in range(n + 1):
                M[index[n - 1][s[:i] + s[i + 1:]]][col] += (-1) ** i
        bd.append(M)
    return ChainComplex(ranks, bd, [[",".join(s) for s in lv] for lv in levels])


# ---------------------------------------------------------------------------
# Homotopy groups of simplicial abelian groups


@dataclass
class AbelianLevels:
    """Explicit data of a simplicial abelian group through ``max_degree``.

    Degree ``n`` is ``Z^{gens[n]} / rows(relations[n])``; ``faces[n][i]`` is
    the integer matrix (``gens[n-1] x gens[n]``) of ``d_i`` on generators.
    """

    gens: list
    relations: list
    faces: list

    @property
    def max_degree(self) -> int:
        return len(self.gens) - 1


def _alternating_face_sum(P: AbelianLevels, n: int) -> Matrix:
    r, c = len(P.gens[n - 1]), len(P.gens[n])
    M = zeros(r, c)
    for i, Fi in enumerate(P.faces[n]):
        s = -1 if i % 2 else 1
        for a in range(r):
            for b in range(c):
                if Fi[a][b]:
                    M[a][b] += s * Fi[a][b]
    return M


def simplicial_abelian_homotopy(P, i: int) -> HomologyGroup:
    """``pi_i`` of a simplicial abelian group as homology of its Moore complex.

    ``P`` is an :class:`AbelianLevels` or anything with an ``abelian_levels()``
    method returning one.  Relations are respected:
    ``pi_i = {x : d x in R_{i-1}} / (R_i + im d_{i+1})``.
    """
    if not isinstance(P, AbelianLevels):
        P = P.abelian_levels()
    if i < 0:
        raise ValueError("homotopy degree must be nonnegative")
    if P.max_degree < i + 1:
        raise SimplicialError(f"pi_{i} needs the group through degree {i + 1}; have {P.max_degree}")
    g = len(P.gens[i])
    # cycles relative to relations: kernel of [d_i | -R_{i-1}^T]
    if i == 0:
        cycles = identity(g)
        ncyc = g
    else:
        D = _alternating_face_sum(P, i)
        rel = P.relations[i - 1]
        rows = len(P.gens[i - 1])
        block = [D[a] + [-rel[k][a] for k in range(len(rel))] for a in range(rows)]
        ker = integer_kernel(block, rows, g + len(rel))
        proj = ker[:g]
        cycles = lattice_basis(proj, g, len(ker[0]) if ker and ker[0] else 0) if g else []
        ncyc = len(cycles[0]) if cycles and cycles[0] else 0
    # boundaries: relations in degree i plus image of d_{i+1}
    bcols = [list(r) for r in P.relations[i]]
    Dn1 = _alternating_face_sum(P, i + 1)
    for b in range(len(P.gens[i + 1])):
        bcols.append([Dn1[a][b] for a in range(g)])
    if ncyc == 0:
        return HomologyGroup(0)
    coords = [solve_in_lattice(cycles, col, g, ncyc) for col in bcols if any(col)]
    if not coords:
        return HomologyGroup(ncyc)
    Bmat = transpose(coords, len(coords), ncyc)
    _, Dd, _ = smith_normal_form(Bmat, ncyc, len(coords))
    factors = diagonal(Dd)
    return group_from_factors(ncyc - len(factors), factors)
