import random

import pytest
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors as sympy_invariant_factors

from stably_cayley.intlinalg import (
    FinAbGroup,
    FullColumnSolver,
    IntMatrix,
    Subquotient,
    cokernel,
    hermite_normal_form,
    homology_at,
    invariant_factors,
    kernel_basis,
    lattice_basis,
    preimage,
    rank,
    same_lattice,
    saturation,
    smith_normal_form,
    snf_right,
    unimodular_inverse,
    xgcd,
)

from _support import random_matrix, random_unimodular


def _is_diagonal_chain(S: IntMatrix, factors) -> bool:
    m, n = S.shape
    for i in range(m):
        for j in range(n):
            want = factors[i] if i == j and i < len(factors) else 0
            if S[i, j] != want:
                return False
    return all(f > 0 for f in factors) and all(factors[i + 1] % factors[i] == 0 for i in range(len(factors) - 1))


def check_snf_hnf(A: IntMatrix):
    sf = smith_normal_form(A)
    assert sf.U @ A @ sf.V == sf.S
    assert abs(sf.U.det()) == 1 and abs(sf.V.det()) == 1
    assert _is_diagonal_chain(sf.S, sf.invariant_factors)
    oracle = [abs(int(x)) for x in sympy_invariant_factors(Matrix(A.tolist()), domain=ZZ) if x != 0]
    assert list(sf.invariant_factors) == oracle
    assert invariant_factors(A) == sf.invariant_factors
    factors, V = snf_right(A)
    assert factors == sf.invariant_factors and abs(V.det()) == 1
    H, U = hermite_normal_form(A)
    assert U @ A == H and abs(U.det()) == 1
    _check_hnf_shape(H)
    assert rank(A) == len(sf.invariant_factors)


def _check_hnf_shape(H: IntMatrix):
    last = -1
    nonzero_seen_zero = False
    for row in H.tolist():
        if not any(row):
            nonzero_seen_zero = True
            continue
        assert not nonzero_seen_zero, "zero rows must come last"
        p = next(j for j, x in enumerate(row) if x)
        assert p > last and row[p] > 0
        last = p


def test_snf_hnf_random_matrices():
    rng = random.Random(20240601)
    for _ in range(1000):
        check_snf_hnf(random_matrix(rng))


def test_snf_known_example():
    A = IntMatrix([[2, 4, 4], [-6, 6, 12], [10, 4, 16]])
    assert smith_normal_form(A).invariant_factors == (2, 2, 156)


def test_snf_of_zero_and_empty():
    assert smith_normal_form(IntMatrix.zeros(2, 3)).invariant_factors == ()
    assert invariant_factors(IntMatrix.zeros(0, 0)) == ()


@pytest.mark.parametrize("a,b", [(12, 18), (-7, 5), (0, 9), (13, 0), (0, 0)])
def test_xgcd(a, b):
    g, x, y = xgcd(a, b)
    assert a * x + b * y == g and g >= 0


def test_kernel_basis_random():
    rng = random.Random(7)
    for _ in range(200):
        A = random_matrix(rng)
        K = kernel_basis(A)
        assert K.ncols == A.ncols - rank(A)
        if K.ncols:
            assert (A @ K).is_zero()
            # saturated: the kernel lattice has trivial cokernel torsion
            assert cokernel(K).torsion == ()


def test_lattice_basis_and_saturation():
    gens = IntMatrix.from_columns([(2, 0), (0, 2), (2, 2)])
    B = lattice_basis(gens)
    assert B.ncols == 2 and abs(B.det()) == 4
    assert same_lattice(B, IntMatrix.identity(2).scale(2))
    assert same_lattice(saturation(IntMatrix.from_columns([(2, 4)])), IntMatrix.from_columns([(1, 2)]))


def test_solver_and_unimodular_inverse():
    rng = random.Random(3)
    for _ in range(50):
        n = rng.randint(1, 5)
        U = random_unimodular(rng, n)
        assert U @ unimodular_inverse(U) == IntMatrix.identity(n)
        x = tuple(rng.randint(-5, 5) for _ in range(n))
        assert FullColumnSolver(U).solve(U @ x) == x
    B = IntMatrix.from_columns([(2, 0, 0), (0, 3, 0)])
    assert FullColumnSolver(B).solve((1, 0, 0)) is None
    assert FullColumnSolver(B).solve((4, 3, 0)) == (2, 1)


def test_preimage():
    M = IntMatrix([[2, 0], [0, 3]])
    P = preimage(M, IntMatrix.identity(2).scale(6))
    assert same_lattice(P, IntMatrix([[3, 0], [0, 2]]))


def test_finabgroup_canonical_forms():
    assert str(FinAbGroup.from_relations(3, [4, 6])) == "Z/2 + Z/12 + Z"
    assert str(FinAbGroup()) == "0"
    assert FinAbGroup.cyclic(1).is_trivial()
    assert FinAbGroup.from_relations(2, [2, 3]) == FinAbGroup(0, (6,))
    with pytest.raises(ValueError):
        FinAbGroup(0, (2, 3))
    assert cokernel(IntMatrix([[2, 0], [0, 0]])) == FinAbGroup(1, (2,))


def test_subquotient_reduce():
    Q = Subquotient.from_lattices(IntMatrix.identity(2), IntMatrix([[2, 0], [0, 4]]))
    assert Q.group == FinAbGroup(0, (2, 4))
    assert Q.is_zero((2, 4)) and not Q.is_zero((1, 0))
    assert Q.contains((3, 5))


def test_homology_of_exact_and_nonexact_complexes():
    # Z --2--> Z --0--> Z: homology in the middle is Z/2
    d_in = IntMatrix([[2]])
    d_out = IntMatrix([[0]])
    assert homology_at(d_in, d_out).group == FinAbGroup(0, (2,))
    # exact: Z --(1,1)--> Z^2 --(1,-1)--> Z
    assert homology_at(IntMatrix([[1], [1]]), IntMatrix([[1, -1]])).group.is_trivial()
