"""Shared helpers for the test-suite: random inputs, small group catalogue and
independent oracles."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from math import factorial

from stably_cayley.glattice import GLattice
from stably_cayley.groups import (
    MatGroup,
    cyclic_group,
    direct_product,
    elementary_abelian_group,
    permutation_matrix,
    symmetric_group,
)
from stably_cayley.intlinalg import FullColumnSolver, IntMatrix, cokernel, kernel_basis, unimodular_inverse

# ---------------------------------------------------------------------------
# random integer matrices
# ---------------------------------------------------------------------------


def random_matrix(rng: random.Random, max_dim: int = 5, bound: int = 12) -> IntMatrix:
    m, n = rng.randint(1, max_dim), rng.randint(1, max_dim)
    rows = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(m)]
    if rng.random() < 0.3 and m > 1:  # force rank deficiency now and then
        rows[-1] = [a + b for a, b in zip(rows[0], rows[-2])]
    return IntMatrix(rows, n)


def random_unimodular(rng: random.Random, n: int, steps: int = 8) -> IntMatrix:
    a = IntMatrix.identity(n).tolist()
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            a[i] = [-x for x in a[i]]
            continue
        c = rng.choice([-2, -1, 1, 2])
        a[i] = [x + c * y for x, y in zip(a[i], a[j])]
    return IntMatrix(a, n)


# ---------------------------------------------------------------------------
# cyclic lattices
# ---------------------------------------------------------------------------

# coefficients c_0..c_{d-1} of the monic cyclotomic polynomial Φ_k
CYCLOTOMIC = {
    1: [-1],
    2: [1],
    3: [1, 1],
    4: [1, 0],
    5: [1, 1, 1, 1],
    6: [1, -1],
    8: [1, 0, 0, 0],
    10: [1, -1, 1, -1],
    12: [1, 0, -1, 0],
}


def companion(coeffs) -> IntMatrix:
    d = len(coeffs)
    rows = [[0] * d for _ in range(d)]
    for i in range(1, d):
        rows[i][i - 1] = 1
    for i in range(d):
        rows[i][d - 1] = -coeffs[i]
    return IntMatrix(rows, d)


def random_cyclic_lattice(rng: random.Random, n: int, max_rank: int = 4) -> GLattice:
    """A ``Z/n``-lattice of rank at most ``max_rank``: a sum of cyclotomic and
    permutation blocks conjugated by a random unimodular matrix."""
    blocks = []
    rank = 0
    choices = [("phi", k) for k in CYCLOTOMIC if n % k == 0] + [("perm", k) for k in (2, 3, 4) if n % k == 0]
    while True:
        kind, k = rng.choice(choices)
        blk = companion(CYCLOTOMIC[k]) if kind == "phi" else permutation_matrix([(i + 1) % k for i in range(k)])
        if rank + blk.nrows > max_rank:
            break
        blocks.append(blk)
        rank += blk.nrows
        if rng.random() < 0.4:
            break
    if not blocks:
        blocks = [IntMatrix.identity(1)]
    A = IntMatrix.block_diagonal(blocks)
    U = random_unimodular(rng, A.nrows)
    A = U @ A @ unimodular_inverse(U)
    G = cyclic_group(n)
    return GLattice(G, [A], rank=A.nrows)


def tate_h0_oracle(A: IntMatrix, n: int):
    """``L^C / N L`` for the generator matrix ``A`` of order dividing ``n``."""
    r = A.nrows
    ident = IntMatrix.identity(r)
    fixed = kernel_basis(A - ident)
    N = ident
    P = ident
    for _ in range(n - 1):
        P = P @ A
        N = N + P
    if fixed.ncols == 0:
        return cokernel(IntMatrix.zeros(0, 0))
    solver = FullColumnSolver(fixed)
    cols = [solver.solve(c) for c in N.columns()]
    return cokernel(IntMatrix.from_columns(cols, nrows=fixed.ncols))


# ---------------------------------------------------------------------------
# small groups as permutation groups
# ---------------------------------------------------------------------------


def _perm_group(perms) -> MatGroup:
    return MatGroup([permutation_matrix(p) for p in perms])


def dihedral_group(n: int) -> MatGroup:
    return _perm_group([[(i + 1) % n for i in range(n)], [(-i) % n for i in range(n)]])


def quaternion_group() -> MatGroup:
    """``Q_8`` in its regular permutation representation."""
    units = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    els = [tuple(s * x for x in u) for u in units for s in (1, -1)]

    def mul(a, b):
        a1, b1, c1, d1 = a
        a2, b2, c2, d2 = b
        return (
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    idx = {e: k for k, e in enumerate(els)}
    gens = [units[1], units[2]]
    return _perm_group([[idx[mul(g, e)] for e in els] for g in gens])


def alternating_group_4() -> MatGroup:
    return _perm_group([[1, 2, 0, 3], [0, 2, 3, 1]])


def small_groups() -> dict[str, MatGroup]:
    """A catalogue of groups of order at most 24."""
    out = {f"C{n}": cyclic_group(n) for n in range(2, 13)}
    out.update(
        {
            "Z2^2": elementary_abelian_group(2, 2),
            "Z2^3": elementary_abelian_group(2, 3),
            "Z3^2": elementary_abelian_group(3, 2),
            "C2xC4": direct_product(cyclic_group(2), cyclic_group(4)),
            "C2xC6": direct_product(cyclic_group(2), cyclic_group(6)),
            "S3": symmetric_group(3),
            "D4": dihedral_group(4),
            "D5": dihedral_group(5),
            "D6": dihedral_group(6),
            "Q8": quaternion_group(),
            "A4": alternating_group_4(),
            "S4": symmetric_group(4),
            "D12": dihedral_group(12),
        }
    )
    return out


# ---------------------------------------------------------------------------
# root system oracles
# ---------------------------------------------------------------------------


def weyl_order_formula(family: str, l: int) -> int:
    if family == "A":
        return factorial(l + 1)
    if family in ("B", "C"):
        return 2**l * factorial(l)
    if family == "D":
        return 2 ** (l - 1) * factorial(l)
    if family == "G2":
        return 12
    raise ValueError(family)


def cartan_matrix(family: str, l: int) -> list[list[int]]:
    """Cartan matrix ``a_ij = 2(α_i, α_j)/(α_j, α_j)`` from the Dynkin diagram
    (Bourbaki numbering: the short simple root of ``B_l`` is ``α_l``)."""
    a = [[2 if i == j else 0 for j in range(l)] for i in range(l)]
    if family == "G2":
        return [[2, -1], [-3, 2]]
    for i in range(l - 1):
        a[i][i + 1] = a[i + 1][i] = -1
    if family == "B" and l >= 2:
        a[l - 2][l - 1] = -2
    if family == "C" and l >= 2:
        a[l - 1][l - 2] = -2
    if family == "D":
        a[l - 2][l - 1] = a[l - 1][l - 2] = 0
        a[l - 3][l - 1] = a[l - 1][l - 3] = -1
    return a


def det_fraction(rows) -> int:
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return int(det)


# ---------------------------------------------------------------------------
# F_p subspace helpers (enumeration based)
# ---------------------------------------------------------------------------


def span_elements(basis, p: int, m: int) -> set[tuple[int, ...]]:
    out = set()
    for coeffs in product(range(p), repeat=len(basis)):
        out.add(tuple(sum(c * b[j] for c, b in zip(coeffs, basis)) % p for j in range(m)))
    if not basis:
        out.add((0,) * m)
    return out


def section_elements(elements, I: set[int]):
    """Elements supported inside the 0-based index set ``I``."""
    return [v for v in elements if all(x == 0 for j, x in enumerate(v) if j not in I)]
