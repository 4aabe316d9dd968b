import pytest

from stably_cayley.cohomology import (
    BudgetExceeded,
    NotACocycle,
    PathDiscrepancy,
    h_n,
    is_cocycle2,
    restriction_h2,
    sha2,
    sha_obstruction_search,
    tate_h2_cyclic,
)
from stably_cayley.glattice import GLattice, j_gamma, natural_lattice, regular_lattice, trivial_lattice
from stably_cayley.groups import cyclic_group, cyclic_subgroups, elementary_abelian_group, symmetric_group
from stably_cayley.intlinalg import FinAbGroup, IntMatrix


def Zn(*t):
    return FinAbGroup(0, tuple(t))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_cyclic_group_cohomology_of_z(n):
    # H^odd(C_n, Z) = 0, H^even(C_n, Z) = Z/n
    L = trivial_lattice(cyclic_group(n))
    assert h_n(L, 0).group == FinAbGroup(1)
    assert h_n(L, 1).group.is_trivial()
    assert h_n(L, 2).group == Zn(n)
    assert h_n(L, 3).group.is_trivial()


@pytest.mark.parametrize("p", [2, 3])
def test_elementary_abelian_cohomology_of_z(p):
    # Künneth: H^2((Z/p)^2, Z) = (Z/p)^2, H^3 = Z/p
    L = trivial_lattice(elementary_abelian_group(p, 2))
    assert h_n(L, 2).group == Zn(p, p)
    assert h_n(L, 3).group == Zn(p)


def test_sign_lattice():
    L = GLattice(cyclic_group(2), [IntMatrix([[-1]])], rank=1)
    assert h_n(L, 1).group == Zn(2)
    assert h_n(L, 1, path="optimized").group == Zn(2)
    assert h_n(L, 2).group.is_trivial()


@pytest.mark.parametrize("p", [2, 3])
def test_sha_of_j_gamma(p):
    L = j_gamma(elementary_abelian_group(p, 2))
    res = sha2(L)
    assert res.sha == Zn(p)
    assert sha2(L, path="baseline").sha == Zn(p)
    assert sha2(L, path="cross-check").sha == Zn(p)
    assert len(res.audit()) == len(cyclic_subgroups(L.group))


def test_cyclic_h2_of_j_gamma_vanishes():
    for p in (2, 3):
        L = j_gamma(elementary_abelian_group(p, 2))
        for C in cyclic_subgroups(L.group):
            assert tate_h2_cyclic(C, L).is_trivial()


def test_sha_of_permutation_lattice_vanishes():
    assert sha2(regular_lattice(symmetric_group(3))).sha.is_trivial()
    assert sha2(natural_lattice(symmetric_group(4))).sha.is_trivial()


def test_h2_representatives_are_cocycles_and_reduce():
    L = trivial_lattice(elementary_abelian_group(2, 2))
    res = h_n(L, 2)
    for i, rep in enumerate(res.cocycle_reps):
        assert is_cocycle2(L, rep)
        want = tuple(int(j == i) for j in range(len(res.cocycle_reps)))
        assert res.reduce(rep) == want
    with pytest.raises(NotACocycle):
        res.reduce((1,) + (0,) * (len(res.cocycle_reps[0]) - 1))


def test_restriction_to_cyclic_subgroup():
    # generator of H^2(C_4, Z) restricts nontrivially to the order-2 subgroup
    L = trivial_lattice(cyclic_group(4))
    rep = h_n(L, 2).cocycle_reps[0]
    C2 = [C for C in cyclic_subgroups(L.group) if C.order == 2][0]
    assert restriction_h2(L, C2, rep) != (0,)


def test_budget_exceeded_reports_dimensions():
    L = regular_lattice(symmetric_group(4))
    with pytest.raises(BudgetExceeded) as e:
        h_n(L, 2, budget=1000)
    assert e.value.rows > 0 and e.value.cols > 0


def test_obstruction_search_finds_klein():
    W = elementary_abelian_group(2, 2)
    L = j_gamma(W)
    res = sha_obstruction_search(W, L)
    assert res.found and res.sha.sha == Zn(2)
    res = sha_obstruction_search(W, regular_lattice(W))
    assert not res.found and not res.budget_exhausted


def test_path_discrepancy_is_an_error_type():
    assert issubclass(PathDiscrepancy, RuntimeError)
