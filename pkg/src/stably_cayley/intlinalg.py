"""Exact integer linear algebra.

Everything here works over Python integers, so there is no overflow at any
magnitude.  Matrices are small immutable row-major objects (:class:`IntMatrix`);
the elimination routines copy them into lists of lists, mutate, and wrap the
result again.

The main entry points are

* :func:`smith_normal_form` and :func:`hermite_normal_form`,
* :func:`kernel_basis`, :func:`cokernel`, :func:`saturation`,
* :class:`Subquotient`, a finitely generated abelian group ``A/B`` presented by
  two lattices ``B ⊆ A ⊆ Z^k`` together with a reduction map,
* :func:`homology_at` and :func:`finab_map_kernel`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Iterable, Sequence


class LinAlgError(ValueError):
    pass


class NotAComplex(LinAlgError):
    """Raised when ``d_out @ d_in`` is not the zero matrix."""


class IllDefinedMap(LinAlgError):
    """Raised when a map on generators does not respect the source relations."""


class IntMatrix:
    """An immutable integer matrix stored row-major as a tuple of tuples."""

    __slots__ = ("rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if rows:
            ncols = len(rows[0])
        elif ncols is None:
            ncols = 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols
        self._hash = None

    # construction helpers -------------------------------------------------

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> IntMatrix:
        return cls([[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def diagonal(cls, entries: Sequence[int]) -> IntMatrix:
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int | None = None) -> IntMatrix:
        columns = [tuple(c) for c in columns]
        if not columns:
            return cls([[] for _ in range(nrows or 0)], 0)
        n = len(columns[0])
        return cls([[c[i] for c in columns] for i in range(n)], len(columns))

    @classmethod
    def block_diagonal(cls, blocks: Sequence[IntMatrix]) -> IntMatrix:
        n = sum(b.nrows for b in blocks)
        m = sum(b.ncols for b in blocks)
        out = [[0] * m for _ in range(n)]
        r0 = c0 = 0
        for b in blocks:
            for i, row in enumerate(b.rows):
                out[r0 + i][c0:c0 + b.ncols] = row
            r0 += b.nrows
            c0 += b.ncols
        return cls(out, m)

    @classmethod
    def hstack(cls, mats: Sequence[IntMatrix], nrows: int | None = None) -> IntMatrix:
        mats = [m for m in mats]
        if not mats:
            return cls.zeros(nrows or 0, 0)
        n = mats[0].nrows
        if any(m.nrows != n for m in mats):
            raise ValueError("row counts differ")
        return cls([sum((m.rows[i] for m in mats), ()) for i in range(n)], sum(m.ncols for m in mats))

    @classmethod
    def vstack(cls, mats: Sequence[IntMatrix], ncols: int | None = None) -> IntMatrix:
        mats = list(mats)
        if not mats:
            return cls.zeros(0, ncols or 0)
        c = mats[0].ncols
        if any(m.ncols != c for m in mats):
            raise ValueError("column counts differ")
        return cls([r for m in mats for r in m.rows], c)

    # basic protocol --------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple(x for r in self.rows for x in r)

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.ncols == other.ncols and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ncols, self.rows))
        return self._hash

    def __lt__(self, other: IntMatrix) -> bool:
        return self.entries < other.entries

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self.rows]})"

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def select_columns(self, idx: Sequence[int]) -> IntMatrix:
        return IntMatrix([[r[j] for j in idx] for r in self.rows], len(idx))

    def select_rows(self, idx: Sequence[int]) -> IntMatrix:
        return IntMatrix([self.rows[i] for i in idx], self.ncols)

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(zip(*self.rows), self.nrows) if self.nrows else IntMatrix.zeros(self.ncols, 0)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
            return IntMatrix(
                [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows],
                other.ncols,
            )
        v = tuple(other)
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.rows)

    def __add__(self, other: IntMatrix) -> IntMatrix:
        return IntMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return IntMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self) -> IntMatrix:
        return IntMatrix([[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, c: int) -> IntMatrix:
        return IntMatrix([[c * a for a in r] for r in self.rows], self.ncols)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def det(self) -> int:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        return bareiss_det(self.tolist())


def as_matrix(a) -> IntMatrix:
    if isinstance(a, IntMatrix):
        return a
    return IntMatrix(a)


def bareiss_det(a: list[list[int]]) -> int:
    """Fraction-free determinant (modifies ``a``)."""
    n = len(a)
    if n == 0:
        return 1
    a = [row[:] for row in a]
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
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (akk * ri[j] - aik * rk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


# ---------------------------------------------------------------------------
# Hermite normal form
# ---------------------------------------------------------------------------


def _row_echelon(a: list[list[int]], u: list[list[int]] | None, reduce_above: bool) -> list[int]:
    """In-place row echelon form by unimodular row operations.

    Returns the pivot columns.  Pivots are made positive.  If ``reduce_above``
    the entries above each pivot are reduced into ``[0, pivot)``.
    """
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        while True:
            best = -1
            best_abs = 0
            for i in range(r, nrows):
                v = a[i][c]
                if v:
                    av = v if v > 0 else -v
                    if best < 0 or av < best_abs:
                        best, best_abs = i, av
                        if av == 1:
                            break
            if best < 0:
                break
            if best != r:
                a[r], a[best] = a[best], a[r]
                if u is not None:
                    u[r], u[best] = u[best], u[r]
            pr = a[r]
            p = pr[c]
            clean = True
            for i in range(r + 1, nrows):
                ri = a[i]
                v = ri[c]
                if v:
                    q = v // p
                    for j in range(c, ncols):
                        if pr[j]:
                            ri[j] -= q * pr[j]
                    if u is not None:
                        ui, ur = u[i], u[r]
                        for j, x in enumerate(ur):
                            if x:
                                ui[j] -= q * x
                    if ri[c]:
                        clean = False
            if clean:
                break
        if best < 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            if u is not None:
                u[r] = [-x for x in u[r]]
        if reduce_above:
            p = a[r][c]
            pr = a[r]
            for i in range(r):
                v = a[i][c]
                if v < 0 or v >= p:
                    q = v // p
                    ri = a[i]
                    for j in range(c, ncols):
                        if pr[j]:
                            ri[j] -= q * pr[j]
                    if u is not None:
                        ui, ur = u[i], u[r]
                        for j, x in enumerate(ur):
                            if x:
                                ui[j] -= q * x
        pivots.append(c)
        r += 1
    return pivots


def hermite_normal_form(A) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ A == H``.  ``H`` is upper
    triangular in echelon form, pivots are positive and the entries above a
    pivot lie in ``[0, pivot)``.  Zero rows come last.
    """
    A = as_matrix(A)
    a = A.tolist()
    u = IntMatrix.identity(A.nrows).tolist()
    _row_echelon(a, u, reduce_above=True)
    return IntMatrix(a, A.ncols), IntMatrix(u, A.nrows)


def hnf(A) -> IntMatrix:
    """Hermite normal form without the transform."""
    A = as_matrix(A)
    a = A.tolist()
    _row_echelon(a, None, reduce_above=True)
    return IntMatrix(a, A.ncols)


def rank(A) -> int:
    A = as_matrix(A)
    a = A.tolist()
    return len(_row_echelon(a, None, reduce_above=False))


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmithForm:
    """``U @ A @ V == S`` with ``U``, ``V`` unimodular and ``S`` diagonal."""

    U: IntMatrix | None
    S: IntMatrix
    V: IntMatrix | None
    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def _snf_core(d, u, v):
    """Diagonalize ``d`` in place.  ``u`` (rows) and ``v`` (columns) track the
    transforms when not ``None``.  Returns the diagonal entries."""
    m = len(d)
    n = len(d[0]) if m else 0

    def row_op(i, k, q):  # row_i -= q * row_k
        di, dk = d[i], d[k]
        for j in range(n):
            if dk[j]:
                di[j] -= q * dk[j]
        if u is not None:
            ui, uk = u[i], u[k]
            for j in range(len(uk)):
                if uk[j]:
                    ui[j] -= q * uk[j]

    def col_op(j, k, q):  # col_j -= q * col_k
        for row in d:
            if row[k]:
                row[j] -= q * row[k]
        if v is not None:
            for row in v:
                if row[k]:
                    row[j] -= q * row[k]

    def swap_rows(i, k):
        d[i], d[k] = d[k], d[i]
        if u is not None:
            u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for row in d:
            row[j], row[k] = row[k], row[j]
        if v is not None:
            for row in v:
                row[j], row[k] = row[k], row[j]

    t = 0
    while t < min(m, n):
        # pivot: entry of minimal absolute value in the trailing block
        bi = bj = -1
        best = 0
        for i in range(t, m):
            row = d[i]
            for j in range(t, n):
                x = row[j]
                if x:
                    ax = abs(x)
                    if bi < 0 or ax < best:
                        bi, bj, best = i, j, ax
                        if ax == 1:
                            break
            if best == 1:
                break
        if bi < 0:
            break
        if bi != t:
            swap_rows(t, bi)
        if bj != t:
            swap_cols(t, bj)
        while True:
            p = d[t][t]
            dirty = False
            for i in range(t + 1, m):
                x = d[i][t]
                if x:
                    row_op(i, t, x // p)
                    if d[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                x = d[t][j]
                if x:
                    col_op(j, t, x // p)
                    if d[t][j]:
                        dirty = True
            if not dirty:
                break
            # move the smallest remainder in row/column t onto the pivot
            bi, bj, best = t, t, abs(d[t][t])
            for i in range(t + 1, m):
                x = d[i][t]
                if x and abs(x) < best:
                    bi, bj, best = i, t, abs(x)
            for j in range(t + 1, n):
                x = d[t][j]
                if x and abs(x) < best:
                    bi, bj, best = t, j, abs(x)
            if bi != t:
                swap_rows(t, bi)
            if bj != t:
                swap_cols(t, bj)
        t += 1
    return [d[i][i] for i in range(min(m, n))]


def _fix_divisibility(d, u, v, diag):
    """Turn a diagonal matrix into Smith form with 2x2 gcd moves."""
    r = 0
    while r < len(diag) and diag[r] != 0:
        r += 1
    # zeros were pushed to the end by the pivot choice
    for i in range(r):
        if diag[i] < 0:
            diag[i] = -diag[i]
            d[i] = [-x for x in d[i]]
            if u is not None:
                u[i] = [-x for x in u[i]]
    for i in range(r):
        for j in range(i + 1, r):
            a, b = diag[i], diag[j]
            if b % a == 0:
                continue
            g, x, y = xgcd(a, b)
            # [[x, y], [-b/g, a/g]] diag(a, b) [[1, -y b/g], [1, x a/g]] = diag(g, ab/g)
            if u is not None:
                ui, uj = u[i], u[j]
                u[i] = [x * p + y * q for p, q in zip(ui, uj)]
                u[j] = [(-b // g) * p + (a // g) * q for p, q in zip(ui, uj)]
            if v is not None:
                for row in v:
                    p, q = row[i], row[j]
                    row[i] = p + q
                    row[j] = (-y * b // g) * p + (x * a // g) * q
            diag[i], diag[j] = g, a * b // g
            d[i][i], d[j][j] = diag[i], diag[j]
    return diag[:r]


def smith_normal_form(A, *, transforms: bool = True) -> SmithForm:
    """Smith normal form ``U @ A @ V = S`` with ``d_1 | d_2 | ... | d_r``.

    With ``transforms=False`` only the invariant factors and ``S`` are computed.
    """
    A = as_matrix(A)
    m, n = A.shape
    d = A.tolist()
    u = IntMatrix.identity(m).tolist() if transforms else None
    v = IntMatrix.identity(n).tolist() if transforms else None
    diag = _snf_core(d, u, v)
    factors = _fix_divisibility(d, u, v, diag)
    S = IntMatrix(d, n)
    return SmithForm(
        IntMatrix(u, m) if transforms else None,
        S,
        IntMatrix(v, n) if transforms else None,
        tuple(factors),
    )


def snf_right(A) -> tuple[tuple[int, ...], IntMatrix]:
    """Invariant factors of ``A`` together with a unimodular ``V`` such that
    ``U @ A @ V`` is the Smith form for *some* unimodular ``U``.

    The left transform is never formed, so this is cheap for tall matrices:
    the rows are first compressed by an untracked echelon pass.
    """
    A = as_matrix(A)
    m, n = A.shape
    a = A.tolist()
    piv = _row_echelon(a, None, reduce_above=False)
    a = a[: len(piv)]
    v = IntMatrix.identity(n).tolist()
    if not a:
        return (), IntMatrix(v, n)
    diag = _snf_core(a, None, v)
    factors = _fix_divisibility(a, None, v, diag)
    return tuple(factors), IntMatrix(v, n)


def invariant_factors(A) -> tuple[int, ...]:
    A = as_matrix(A)
    a = A.tolist()
    piv = _row_echelon(a, None, reduce_above=False)
    a = a[: len(piv)]
    if not a:
        return ()
    diag = _snf_core(a, None, None)
    return tuple(_fix_divisibility(a, None, None, diag))


# ---------------------------------------------------------------------------
# Kernels, lattices, solving
# ---------------------------------------------------------------------------


def kernel_basis(A) -> IntMatrix:
    """Columns form a basis of ``{x in Z^n : A x = 0}``; the basis is saturated."""
    A = as_matrix(A)
    n = A.ncols
    if A.nrows == 0:
        return IntMatrix.identity(n)
    h, u = hermite_normal_form(A.T)
    r = sum(1 for row in h.rows if any(row))
    rows = u.rows[r:]
    if not rows:
        return IntMatrix.zeros(n, 0)
    # canonical representative of the kernel lattice
    k = hnf(IntMatrix(rows, n))
    return k.T


def lattice_basis(gens) -> IntMatrix:
    """A basis (as columns, in Hermite form) of the lattice spanned by the
    columns of ``gens``."""
    gens = as_matrix(gens)
    if gens.ncols == 0:
        return gens
    h = hnf(gens.T)
    rows = [r for r in h.rows if any(r)]
    if not rows:
        return IntMatrix.zeros(gens.nrows, 0)
    return IntMatrix(rows, gens.nrows).T


def same_lattice(a, b) -> bool:
    """Column spans of ``a`` and ``b`` coincide."""
    return lattice_basis(a) == lattice_basis(b)


def saturation(A) -> IntMatrix:
    """Basis of ``(Q-span of columns) ∩ Z^n``."""
    A = as_matrix(A)
    if A.ncols == 0:
        return IntMatrix.zeros(A.nrows, 0)
    left = kernel_basis(A.T)  # equations of the span
    if left.ncols == 0:
        return IntMatrix.identity(A.nrows)
    return kernel_basis(left.T)


def cokernel(A) -> "FinAbGroup":
    """The group ``Z^rows / column span(A)``."""
    A = as_matrix(A)
    f = invariant_factors(A)
    return FinAbGroup(A.nrows - len(f), tuple(x for x in f if x != 1))


class FullColumnSolver:
    """Exact solver for ``B y = x`` when ``B`` has full column rank.

    A set of independent rows is located modulo a large prime (independence
    mod p implies independence over Q); the square subsystem is inverted over
    Q and every solution is verified against the full system, so results are
    exact regardless of the prime.
    """

    _P = (1 << 61) - 1

    def __init__(self, B):
        B = as_matrix(B)
        self.B = B
        k = B.ncols
        self.rows = self._pivot_rows(B)
        if self.rows is None:
            raise LinAlgError("matrix does not have full column rank")
        sub = [[Fraction(B.rows[i][j]) for j in range(k)] for i in self.rows]
        self.inv = _fraction_inverse(sub)

    def _pivot_rows(self, B):
        k = B.ncols
        if k == 0:
            return []
        p = self._P
        # eliminate on the transpose: pick rows of B greedily
        basis: list[tuple[int, list[int]]] = []  # (pivot col, reduced row)
        chosen = []
        for i, row in enumerate(B.rows):
            r = [x % p for x in row]
            for pc, br in basis:
                c = r[pc]
                if c:
                    r = [(x - c * y) % p for x, y in zip(r, br)]
            pc = next((j for j, x in enumerate(r) if x), None)
            if pc is None:
                continue
            inv = pow(r[pc], -1, p)
            r = [(x * inv) % p for x in r]
            basis.append((pc, r))
            chosen.append(i)
            if len(chosen) == k:
                return chosen
        # fall back to exact elimination (only if p divided a minor)
        return _exact_pivot_rows(B)

    def solve(self, x, *, integral: bool = True):
        """Return ``y`` with ``B y = x``, or ``None`` if there is no solution
        (or no integral one when ``integral``)."""
        x = tuple(x)
        B = self.B
        if len(x) != B.nrows:
            raise ValueError("length mismatch")
        x0 = [x[i] for i in self.rows]
        y = [sum(c * v for c, v in zip(row, x0)) for row in self.inv]
        if integral:
            if any(t.denominator != 1 for t in y):
                return None
            y = [int(t) for t in y]
        if B @ y != x if integral else any(
            sum(Fraction(b) * t for b, t in zip(row, y)) != xi for row, xi in zip(B.rows, x)
        ):
            return None
        return tuple(y)


def _exact_pivot_rows(B: IntMatrix):
    k = B.ncols
    basis: list[tuple[int, list[Fraction]]] = []
    chosen = []
    for i, row in enumerate(B.rows):
        r = [Fraction(x) for x in row]
        for pc, br in basis:
            c = r[pc]
            if c:
                r = [a - c * b for a, b in zip(r, br)]
        pc = next((j for j, x in enumerate(r) if x), None)
        if pc is None:
            continue
        inv = 1 / r[pc]
        basis.append((pc, [a * inv for a in r]))
        chosen.append(i)
        if len(chosen) == k:
            return chosen
    return None


def _fraction_inverse(a: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(a)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        p = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def solve_rational(B, x) -> tuple[Fraction, ...] | None:
    """A rational solution of ``B y = x`` for full-column-rank ``B``."""
    return FullColumnSolver(B).solve(x, integral=False)


def unimodular_inverse(U) -> IntMatrix:
    U = as_matrix(U)
    h, t = hermite_normal_form(U)
    if h != IntMatrix.identity(U.nrows):
        raise LinAlgError("matrix is not unimodular")
    return t


def preimage(M, target, within=None) -> IntMatrix:
    """Basis of ``{x in within : M x in span(target)}``.

    ``within`` is a basis (columns) of the lattice to search in; default is the
    whole of ``Z^{M.ncols}``.  ``target`` may be any generating set.
    """
    M = as_matrix(M)
    target = as_matrix(target)
    n = M.ncols
    W = IntMatrix.identity(n) if within is None else as_matrix(within)
    MW = M @ W
    big = IntMatrix.hstack([MW, -target]) if target.ncols else MW
    ker = kernel_basis(big)
    z = ker.select_rows(range(W.ncols))
    return lattice_basis(W @ z)


# ---------------------------------------------------------------------------
# Finitely generated abelian groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class FinAbGroup:
    """``Z^free_rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k`` with ``d_1 | ... | d_k``, ``d_i >= 2``."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        t = tuple(int(x) for x in self.torsion)
        object.__setattr__(self, "torsion", t)
        if self.free_rank < 0:
            raise ValueError("negative rank")
        for i, x in enumerate(t):
            if x < 2:
                raise ValueError("torsion coefficients must be >= 2")
            if i and x % t[i - 1]:
                raise ValueError("torsion coefficients must form a divisibility chain")

    @classmethod
    def from_relations(cls, ngens: int, factors: Iterable[int]) -> FinAbGroup:
        """``Z^ngens`` modulo a diagonal relation matrix with the given entries,
        in any order, canonicalized through the Smith form."""
        f = list(factors)
        if len(f) > ngens:
            raise ValueError("too many relations")
        f = invariant_factors(IntMatrix.diagonal(f)) if f else ()
        return cls(ngens - len(f), tuple(x for x in f if x != 1))

    @classmethod
    def cyclic(cls, n: int) -> FinAbGroup:
        if n == 0:
            return cls(1)
        return cls(0, (n,) if n != 1 else ())

    @property
    def order(self) -> int | None:
        """Group order, ``None`` when infinite."""
        return None if self.free_rank else prod(self.torsion)

    @property
    def torsion_order(self) -> int:
        return prod(self.torsion)

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.free_rank

    @property
    def moduli(self) -> tuple[int, ...]:
        """Order of each canonical generator, 0 for the free ones."""
        return self.torsion + (0,) * self.free_rank

    def __str__(self):
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


def _reduce(coords: Sequence[int], moduli: Sequence[int]) -> tuple[int, ...]:
    return tuple(c % m if m else c for c, m in zip(coords, moduli))


class Subquotient:
    """The abelian group ``A/B`` for lattices ``B ⊆ A ⊆ Z^k``.

    ``basis`` is a basis of ``A`` (columns, full column rank) and ``relations``
    holds the generators of ``B`` written in that basis.  The canonical
    generators of the group are available as vectors of ``Z^k`` and any
    element of ``A`` can be reduced to canonical coordinates.
    """

    def __init__(self, basis, relations):
        self.basis = as_matrix(basis)
        rel = as_matrix(relations)
        a = self.basis.ncols
        if rel.nrows != a:
            raise ValueError("relations must be written in the basis of A")
        snf = smith_normal_form(rel)
        diag = list(snf.invariant_factors) + [0] * (a - snf.rank)
        keep = [i for i, d in enumerate(diag) if d != 1]
        torsion = [i for i in keep if diag[i] != 0]
        free = [i for i in keep if diag[i] == 0]
        self._order = torsion + free
        self._moduli = tuple(diag[i] for i in self._order)
        self._U = snf.U
        self.group = FinAbGroup(len(free), tuple(diag[i] for i in torsion))
        self._solver = None
        uinv = unimodular_inverse(snf.U)
        self.generators = [
            self.basis @ uinv.column(i) for i in self._order
        ]

    @classmethod
    def from_lattices(cls, numerator, denominator) -> Subquotient:
        """``span(numerator) / span(denominator)``; the second must lie in the first."""
        numerator = as_matrix(numerator)
        basis = lattice_basis(numerator)
        den = as_matrix(denominator)
        solver = FullColumnSolver(basis) if basis.ncols else None
        cols = []
        for c in den.columns():
            if basis.ncols == 0:
                if any(c):
                    raise LinAlgError("denominator is not contained in numerator")
                continue
            y = solver.solve(c)
            if y is None:
                raise LinAlgError("denominator is not contained in numerator")
            cols.append(y)
        rel = IntMatrix.from_columns(cols) if cols else IntMatrix.zeros(basis.ncols, 0)
        out = cls(basis, rel)
        out._solver = solver
        return out

    @property
    def moduli(self) -> tuple[int, ...]:
        return self._moduli

    def basis_coordinates(self, x) -> tuple[int, ...] | None:
        if self.basis.ncols == 0:
            return () if not any(x) else None
        if self._solver is None:
            self._solver = FullColumnSolver(self.basis)
        return self._solver.solve(x)

    def reduce(self, x) -> tuple[int, ...]:
        """Canonical coordinates of the class of ``x`` (which must lie in ``A``)."""
        y = self.basis_coordinates(x)
        if y is None:
            raise LinAlgError("vector does not lie in the numerator lattice")
        return self.reduce_basis_coordinates(y)

    def reduce_basis_coordinates(self, y) -> tuple[int, ...]:
        z = self._U @ tuple(y)
        return _reduce([z[i] for i in self._order], self._moduli)

    def contains(self, x) -> bool:
        return self.basis_coordinates(x) is not None

    def is_zero(self, x) -> bool:
        return not any(self.reduce(x))


def homology_at(d_in, d_out) -> Subquotient:
    """``ker(d_out) / im(d_in)`` for ``Z^a --d_in--> Z^b --d_out--> Z^c``.

    The returned :class:`Subquotient` carries the canonical group, an integer
    representative for each canonical generator, and ``reduce`` for sending
    any cycle to its class coordinates.
    """
    d_in = as_matrix(d_in)
    d_out = as_matrix(d_out)
    if d_in.nrows != d_out.ncols:
        raise ValueError("shape mismatch")
    if not (d_out @ d_in).is_zero():
        raise NotAComplex("d_out @ d_in is nonzero")
    ker = kernel_basis(d_out)
    if ker.ncols == 0:
        return Subquotient(ker, IntMatrix.zeros(0, 0))
    solver = FullColumnSolver(ker)
    cols = [solver.solve(c) for c in d_in.columns()]
    rel = IntMatrix.from_columns(cols) if cols else IntMatrix.zeros(ker.ncols, 0)
    out = Subquotient(ker, rel)
    out._solver = solver
    return out


def subgroup_presentation(moduli: Sequence[int]) -> IntMatrix:
    """Relation matrix ``diag(moduli)`` of ``⊕ Z/moduli_i`` (free summands get 0)."""
    return IntMatrix.diagonal(list(moduli))


def finab_map_kernel(source: FinAbGroup, target: FinAbGroup, f) -> FinAbGroup:
    """Kernel of the homomorphism ``source -> target`` given on canonical
    generators: column ``j`` of ``f`` is the image of generator ``j``."""
    f = as_matrix(f)
    if f.shape != (target.ngens, source.ngens):
        raise ValueError("map has the wrong shape")
    tm = target.moduli
    for j, m in enumerate(source.moduli):
        col = f.column(j)
        for i, (c, n) in enumerate(zip(col, tm)):
            if (m * c) % n if n else m * c:
                raise IllDefinedMap(f"generator {j} of order {m} maps to an element of larger order")
    src = IntMatrix.identity(source.ngens)
    kernel = preimage(f, subgroup_presentation(tm), within=src)
    sq = Subquotient.from_lattices(kernel, subgroup_presentation(source.moduli))
    return sq.group
