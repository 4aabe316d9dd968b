import pytest

from stably_cayley.cohomology import sha2
from stably_cayley.glattice import restrict
from stably_cayley.groups import all_subgroups
from stably_cayley.intlinalg import FinAbGroup, IntMatrix
from stably_cayley.witnesses import (
    KLEIN_EXPECTED,
    BadM,
    BadVector,
    D4Excluded,
    DiagramSpec,
    EmptyPart,
    ParityViolation,
    Partition3,
    WitnessError,
    a2m_weight_identification,
    default_partition,
    family_witness,
    gamma_embedding,
    klein_b1_lattice,
    lambda6_restricted,
    sl3_lattice,
    sl3_tau_iso,
    so6_betas,
    so6_gamma,
    so6_witness,
    tau_matrix,
)

Z2 = FinAbGroup(0, (2,))


@pytest.mark.parametrize("diagram", ["B1^3", "B1^4", "B2+B1", "D3", "D3+B1", "D5", "D6", "D4+B1", "D5+D3", "B3"])
def test_family_sha_is_z2(diagram):
    w = family_witness(DiagramSpec.parse(diagram))
    assert w.sha.sha == Z2
    assert w.m0_isomorphic_to_j and w.sum_identity
    assert w.embedding.group.order == 4


def test_family_paths_agree():
    w = family_witness(DiagramSpec.parse("B1^3"), path="cross-check")
    assert w.sha.sha == Z2


def test_diagram_parsing():
    assert DiagramSpec.parse("B1^3").components == (("B", 1),) * 3
    assert DiagramSpec.parse("D3+B1").size == 4
    with pytest.raises(WitnessError):
        DiagramSpec.parse("D2")
    with pytest.raises(WitnessError):
        DiagramSpec.parse("A3")


def test_partition_errors():
    with pytest.raises(D4Excluded):
        default_partition(DiagramSpec.parse("D4"))
    d = DiagramSpec.parse("B1^2")
    with pytest.raises(EmptyPart):
        default_partition(d)
    with pytest.raises(EmptyPart):
        gamma_embedding(d, Partition3((((0,), (), ()), ((), (0,), ()))))
    d3 = DiagramSpec.parse("D3")
    with pytest.raises(ParityViolation):
        gamma_embedding(d3, Partition3((((0, 1), (2,), ()),)))


def test_odd_d_default_partition_sizes():
    p = default_partition(DiagramSpec.parse("D7"))
    assert [len(x) for x in p.parts[0]] == [1, 1, 5]


def test_klein_matrices():
    L, cert = klein_b1_lattice()
    assert cert["matches"] and cert["matrices"] == KLEIN_EXPECTED
    assert abs(cert["basis_change_determinant"]) == 1
    assert L.group.order == 8


def test_klein_lattice_obstruction_is_invisible_to_sha():
    # not quasi-invertible, yet Sh^2 vanishes on every subgroup
    L, _ = klein_b1_lattice()
    assert all(sha2(restrict(L, S)).sha.is_trivial() for S in all_subgroups(L.group))


@pytest.mark.parametrize("m", [2, 3])
def test_so6_family(m):
    w = so6_witness(m)
    assert w.sha.sha == Z2
    assert w.basis_check and w.commuting_involutions and w.orbit_formulas
    assert w.index == 2


def test_so6_gamma_and_betas_shapes():
    a, b = so6_gamma(4)
    assert a.nrows == 12 and a @ a == IntMatrix.identity(12)
    assert len(so6_betas(4)) == 8
    with pytest.raises(BadM):
        so6_gamma(1)


def test_sl3_family():
    h = sl3_tau_iso(2, (1, 2))
    assert h.is_isomorphism()
    assert sl3_tau_iso(3, (2, 1, 2)).is_isomorphism()
    T = tau_matrix(2, (2, 2))
    assert T @ T == IntMatrix.identity(6)
    with pytest.raises(BadVector):
        sl3_lattice(2, (1, 3))
    with pytest.raises(BadVector):
        sl3_lattice(2, (1,))
    with pytest.raises(BadM):
        sl3_lattice(1)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_a2m_identification(m):
    r = a2m_weight_identification(m)
    assert r["passed"], r
    assert r["cokernel"] == ("Z" if m == 2 else f"Z^{m - 1}")


def test_lambda6_sha_vanishes_on_small_subgroups():
    L = lambda6_restricted()
    assert L.rank == 5 and L.group.order == 36
    subs = [S for S in all_subgroups(L.group) if S.order <= 4]
    assert all(sha2(restrict(L, S)).sha.is_trivial() for S in subs)
