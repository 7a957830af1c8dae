"""Exact integer and rational linear algebra.

Matrices are tuples of row tuples of Python ints (or Fractions where noted).
Nothing here touches floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

IntVector = tuple[int, ...]
IntMatrix = tuple[IntVector, ...]


class TorsionError(ValueError):
    """Raised when a quotient by a non-saturated sublattice is requested."""


# ---------------------------------------------------------------------------
# small helpers


def as_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    m = tuple(tuple(int(x) for x in r) for r in rows)
    if m and len({len(r) for r in m}) != 1:
        raise ValueError("matrix rows have unequal lengths")
    return m


def identity(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(r: int, c: int) -> IntMatrix:
    return tuple((0,) * c for _ in range(r))


def transpose(m: Sequence[Sequence], ncols: int | None = None) -> tuple:
    if not m:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*m))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence], inner: int | None = None) -> tuple:
    """Product a·b.  ``inner`` disambiguates shapes when a has no columns."""
    bt = transpose(b)
    if not a:
        return ()
    if not b:
        return tuple(() for _ in a)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def vec_add(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def vec_neg(a: Sequence) -> tuple:
    return tuple(-x for x in a)


def vec_scale(c, a: Sequence) -> tuple:
    return tuple(c * x for x in a)


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def primitive(v: Sequence[int]) -> IntVector:
    """Divide an integer vector by the gcd of its entries."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive generator")
    return tuple(x // g for x in v)


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant of a square integer matrix."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rref(rows: Sequence[Sequence]) -> tuple[tuple[tuple[Fraction, ...], ...], tuple[int, ...]]:
    """Reduced row echelon form over Q.  Returns (nonzero rows, pivot columns)."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return (), ()
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return tuple(tuple(row) for row in a[:r]), tuple(pivots)


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1]) if rows else 0


def solve(columns: Sequence[Sequence], v: Sequence) -> tuple[Fraction, ...] | None:
    """Coefficients c with sum_j c_j columns[j] = v, or None if inconsistent.

    The columns are assumed linearly independent, so a solution is unique.
    """
    k = len(columns)
    n = len(v)
    aug = [[columns[j][i] for j in range(k)] + [v[i]] for i in range(n)]
    red, piv = rref(aug)
    if k in piv:
        return None
    if len(piv) < k:
        raise ValueError("columns are linearly dependent")
    out = [Fraction(0)] * k
    for row, c in zip(red, piv):
        out[c] = row[k]
    return tuple(out)


@lru_cache(maxsize=200_000)
def _adjugate(cols: tuple[IntVector, ...]) -> tuple[IntMatrix, int]:
    # inverse of the square matrix with these columns, as (adj, det)
    m = transpose(cols)
    n = len(m)
    det = determinant(m)
    if det == 0:
        raise ValueError("singular")
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    red, _ = rref(aug)
    inv = [row[n:] for row in red]
    adj = tuple(tuple(int(x * det) for x in row) for row in inv)
    return adj, det


def cone_coordinates(cols: tuple[IntVector, ...], v: Sequence[int]) -> tuple[Fraction, ...] | None:
    """Coordinates of v in the basis ``cols`` (linearly independent columns)."""
    if cols and len(cols) == len(cols[0]):
        adj, det = _adjugate(cols)
        return tuple(Fraction(x, det) for x in matvec(adj, v))
    return solve(cols, v)


# ---------------------------------------------------------------------------
# normal forms


def hermite_normal_form(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U·m = H``.  Pivots are
    positive, entries above a pivot are reduced into ``[0, pivot)``, zero rows
    sit at the bottom.
    """
    m = as_matrix(m)
    nr = len(m)
    nc = len(m[0]) if m else 0
    a = [list(r) + [int(i == j) for j in range(nr)] for i, r in enumerate(m)]
    r = 0
    for c in range(nc):
        if r == nr:
            break
        while True:
            nz = [i for i in range(r, nr) if a[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: (abs(a[i][c]), i))
            a[r], a[p] = a[p], a[r]
            done = True
            for i in range(r + 1, nr):
                if a[i][c] != 0:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][c] != 0:
                        done = False
            if done:
                break
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        r += 1
    h = tuple(tuple(row[:nc]) for row in a)
    u = tuple(tuple(row[nc:]) for row in a)
    return h, u


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form ``U·m·V = S`` with ``U, V`` unimodular.

    The pivot rule is deterministic: the smallest nonzero absolute value in
    the active block, ties broken by (row, column).  Diagonal entries are
    nonnegative and satisfy ``d1 | d2 | ...``.
    """
    m = as_matrix(m)
    nr = len(m)
    nc = len(m[0]) if m else 0
    a = [list(r) for r in m]
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in a:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    t = 0
    while t < min(nr, nc):
        cand = [(abs(a[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if a[i][j] != 0]
        if not cand:
            break
        _, pi, pj = min(cand)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            changed = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, a[i][t] // a[t][t])
                    if a[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, a[t][j] // a[t][t])
                    if a[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            # enforce divisibility against the rest of the block
            bad = next(
                ((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return (
        tuple(tuple(r) for r in u),
        tuple(tuple(r) for r in a),
        tuple(tuple(r) for r in v),
    )


def invariant_factors(m: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Nonzero diagonal entries of the Smith normal form."""
    _, s, _ = smith_normal_form(m)
    return tuple(s[i][i] for i in range(min(len(s), len(s[0]) if s else 0)) if s[i][i] != 0)


def inverse_unimodular(m: Sequence[Sequence[int]]) -> IntMatrix:
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    red, piv = rref(aug)
    if len(piv) < n or piv[n - 1] >= n:
        raise ValueError("matrix is singular")
    out = []
    for row in red:
        tail = row[n:]
        if any(x.denominator != 1 for x in tail):
            raise ValueError("matrix is not unimodular")
        out.append(tuple(int(x) for x in tail))
    return tuple(out)


# ---------------------------------------------------------------------------
# lattices


@dataclass(frozen=True)
class Sublattice:
    ambient_rank: int
    generators: tuple[IntVector, ...] = ()

    def __post_init__(self):
        gens = tuple(tuple(int(x) for x in g) for g in self.generators)
        for g in gens:
            if len(g) != self.ambient_rank:
                raise ValueError(f"generator {g} does not live in rank {self.ambient_rank}")
        object.__setattr__(self, "generators", gens)

    @property
    def rank(self) -> int:
        return rank(self.generators)

    def basis(self) -> tuple[IntVector, ...]:
        """Canonical basis: nonzero rows of the Hermite normal form."""
        if not self.generators:
            return ()
        h, _ = hermite_normal_form(self.generators)
        return tuple(r for r in h if not is_zero(r))

    def same_lattice(self, other: "Sublattice") -> bool:
        return self.ambient_rank == other.ambient_rank and self.basis() == other.basis()

    def contains(self, v: Sequence[int]) -> bool:
        b = self.basis()
        if not b:
            return is_zero(v)
        c = solve(b, v)
        return c is not None and all(x.denominator == 1 for x in c)


@dataclass(frozen=True)
class QuotientPresentation:
    ambient_rank: int
    relation_generators: tuple[IntVector, ...]
    coordinate_map: IntMatrix
    quotient_rank: int

    def __call__(self, v: Sequence[int]) -> IntVector:
        return tuple(matvec(self.coordinate_map, v)) if self.coordinate_map else ()


def kernel_lattice(m: Sequence[Sequence[int]], ncols: int | None = None) -> Sublattice:
    """Integer kernel ``{x : m·x = 0}`` as a saturated sublattice.

    ``ncols`` is only needed when ``m`` has no rows.
    """
    m = as_matrix(m)
    n = len(m[0]) if m else ncols
    if n is None:
        raise ValueError("column count unknown for an empty matrix")
    if not m:
        return Sublattice(n, identity(n))
    h, u = hermite_normal_form(transpose(m))
    gens = tuple(u[i] for i in range(n) if is_zero(h[i]))
    lat = Sublattice(n, gens)
    return Sublattice(n, lat.basis())


def saturate(s: Sublattice) -> Sublattice:
    """All ambient lattice points in the rational span of ``s``."""
    n = s.ambient_rank
    if not s.generators or is_zero(sum((list(g) for g in s.generators), [])):
        return Sublattice(n, ())
    perp = kernel_lattice(s.generators)
    if not perp.generators:
        return Sublattice(n, identity(n))
    return kernel_lattice(perp.generators)


def is_saturated(s: Sublattice) -> bool:
    return saturate(s).same_lattice(Sublattice(s.ambient_rank, s.basis()))


def quotient(ambient_rank: int, relations: Sublattice, *, canonical: bool = True,
             reverse_pivots: bool = False) -> QuotientPresentation:
    """Present ``Z^ambient_rank / relations`` by an integer coordinate map.

    The map comes from a Smith normal form of the relation matrix.  With
    ``canonical`` it is replaced by the Hermite normal form of its row
    lattice, which depends only on the relation lattice.  ``reverse_pivots``
    reverses the column order fed to the SNF; it only matters for the raw
    (non-canonical) map.
    """
    if relations.ambient_rank != ambient_rank:
        raise ValueError("relations live in a different rank")
    if not is_saturated(relations):
        raise TorsionError("relation lattice is not saturated; the quotient has torsion")
    basis = relations.basis()
    if not basis:
        cmap = identity(ambient_rank)
    else:
        perm = list(range(ambient_rank))
        if reverse_pivots:
            perm.reverse()
        mat = tuple(tuple(row[p] for p in perm) for row in basis)
        _, s, v = smith_normal_form(mat)
        rho = len(basis)
        if any(s[i][i] != 1 for i in range(rho)):
            raise TorsionError("relation lattice is not saturated; the quotient has torsion")
        # relations·V vanishes on the trailing columns of V, which therefore
        # give the quotient coordinates; undo the column permutation
        tail = transpose(v)[rho:]
        cmap = tuple(tuple(row[perm.index(j)] for j in range(ambient_rank)) for row in tail)
        if canonical and cmap:
            cmap, _ = hermite_normal_form(cmap)
    q = ambient_rank - len(basis)
    pres = QuotientPresentation(ambient_rank, basis, tuple(cmap), q)
    check_quotient(pres)
    return pres


def check_quotient(q: QuotientPresentation) -> None:
    """Assert the two defining properties of a quotient presentation."""
    for g in q.relation_generators:
        if not is_zero(q(g)):
            raise AssertionError(f"coordinate map does not annihilate relation {g}")
    if q.quotient_rank:
        if len(q.coordinate_map) != q.quotient_rank:
            raise AssertionError("coordinate map has the wrong number of rows")
        if invariant_factors(q.coordinate_map) != (1,) * q.quotient_rank:
            raise AssertionError("coordinate map is not surjective onto the quotient lattice")
    kern = kernel_lattice(q.coordinate_map, q.ambient_rank) if q.coordinate_map else Sublattice(
        q.ambient_rank, identity(q.ambient_rank))
    if not kern.same_lattice(Sublattice(q.ambient_rank, q.relation_generators)):
        raise AssertionError("kernel of the coordinate map differs from the relation lattice")


def transition_matrix(a: QuotientPresentation, b: QuotientPresentation) -> IntMatrix:
    """Unimodular ``T`` with ``b.coordinate_map = T · a.coordinate_map``."""
    if a.quotient_rank != b.quotient_rank:
        raise ValueError("presentations have different ranks")
    q = a.quotient_rank
    if q == 0:
        return ()
    # right inverse of a's map from its SNF: U A V = [I 0]  =>  A · (V[:, :q] U) = I
    u, s, v = smith_normal_form(a.coordinate_map)
    right = matmul(tuple(row[:q] for row in v), u)
    t = matmul(b.coordinate_map, right)
    if abs(determinant(t)) != 1:
        raise AssertionError("transition is not unimodular")
    if matmul(t, a.coordinate_map) != tuple(tuple(r) for r in b.coordinate_map):
        raise AssertionError("presentations have different kernels")
    return t
