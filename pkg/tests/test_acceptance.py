"""Acceptance criteria 1-10, all at exact equality of canonical forms.

Each test prints one PASS/FAIL line; the same lines are collected in the
pytest terminal summary under "acceptance criteria".
"""

import time
from contextlib import contextmanager

import pytest

from stably_cayley.classify import QuotientSpec, all_subspaces, almost_coordinate_basis, classify_stably_cayley
from stably_cayley.cohomology import h_n, sha2, tate_h2_cyclic
from stably_cayley.glattice import j_gamma, restrict, trivial_lattice
from stably_cayley.groups import all_subgroups, cyclic_subgroups, elementary_abelian_group
from stably_cayley.intlinalg import FinAbGroup
from stably_cayley.witnesses import (
    KLEIN_EXPECTED,
    DiagramSpec,
    a2m_weight_identification,
    family_witness,
    gamma_embedding,
    klein_b1_lattice,
    lambda6_restricted,
    sl3_tau_iso,
    so6_witness,
)

import _props


def Zp(p):
    return FinAbGroup(0, (p,))


@contextmanager
def criterion(number, title, limit):
    t = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        secs = time.perf_counter() - t
        ok = ok and secs < limit
        print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'}  {title}  ({secs:.2f}s, limit {limit}s)")
    assert secs < limit, f"took {secs:.1f}s, limit {limit}s"


@pytest.mark.acceptance(1, "Sh(Z/p x Z/p, J) = Z/p for p = 2, 3")
def test_criterion_1():
    with criterion(1, "Sh of J over (Z/p)^2", 10):
        for p in (2, 3):
            t = time.perf_counter()
            assert sha2(j_gamma(elementary_abelian_group(p, 2))).sha == Zp(p)
            assert time.perf_counter() - t < 5


@pytest.mark.acceptance(2, "H^2(C, J) = 0 for every cyclic C of (Z/p)^2")
def test_criterion_2():
    with criterion(2, "cyclic H^2 of J vanishes", 1):
        for p in (2, 3):
            L = j_gamma(elementary_abelian_group(p, 2))
            for C in cyclic_subgroups(L.group):
                assert h_n(restrict(L, C), 2).group.is_trivial()
                assert tate_h2_cyclic(C, L).is_trivial()


@pytest.mark.acceptance(3, "H^3((Z/p)^2, Z) = Z/p = Sh((Z/p)^2, J)")
def test_criterion_3():
    with criterion(3, "H^3 of trivial lattice equals Sh of J", 30):
        for p in (2, 3):
            G = elementary_abelian_group(p, 2)
            h3 = h_n(trivial_lattice(G), 3).group
            assert h3 == Zp(p)
            assert sha2(j_gamma(G), path="baseline").sha == h3


@pytest.mark.acceptance(4, "family M: Sh(Klein, M) = Z/2 for five diagrams")
def test_criterion_4():
    with criterion(4, "family M", 50):
        for d in ("B1^3", "B1^4", "B2+B1", "D3", "D3+B1"):
            t = time.perf_counter()
            spec = DiagramSpec.parse(d)
            gamma_embedding(spec)
            w = family_witness(spec)
            assert w.sha.sha == Zp(2), d
            assert time.perf_counter() - t < 10


@pytest.mark.acceptance(5, "Klein lattice matrices reproduced exactly")
def test_criterion_5():
    with criterion(5, "Klein lattice matrices", 1):
        _, cert = klein_b1_lattice()
        assert cert["matrices"] == KLEIN_EXPECTED


@pytest.mark.acceptance(6, "D3^m family: Sh = Z/2 and basis of L_0, m = 2, 3")
def test_criterion_6():
    with criterion(6, "D3^m family", 30):
        for m in (2, 3):
            w = so6_witness(m)
            assert w.sha.sha == Zp(2)
            assert w.basis_check


@pytest.mark.acceptance(7, "A2 family: tau-isomorphism, weight identification, Sh(Λ6) = 0")
def test_criterion_7():
    with criterion(7, "A2 family and Λ6", 600):
        assert sl3_tau_iso(2, (1, 2)).is_isomorphism()
        assert a2m_weight_identification(2)["passed"]
        L = lambda6_restricted()
        subs = all_subgroups(L.group)
        assert len(subs) == 60
        for S in subs:
            assert sha2(restrict(L, S), path="optimized").sha.is_trivial()


@pytest.mark.acceptance(8, "A1 sweep: verdict iff almost coordinate, m <= 4")
def test_criterion_8():
    with criterion(8, "A1 exhaustive sweep", 10):
        for m in range(1, 5):
            for V in all_subspaces(2, m):
                v = classify_stably_cayley(QuotientSpec("A", 1, m, "character", list(V)))
                assert v.stably_cayley == (almost_coordinate_basis(V, m) is not None)
        v = classify_stably_cayley(QuotientSpec("A", 1, 2, "character", [(1, 1)]))
        assert [d["factor"] for d in v.decomposition] == ["SO4"]


SPOT = [
    # PGL5 / SL5
    (("A", 4, 1, "character", []), True),
    (("A", 4, 1, "character", [(1,)]), False),
    # SO7 / Spin7
    (("B", 3, 1, "character", []), True),
    (("B", 3, 1, "character", [(1,)]), False),
    # Sp4 = Spin5 and SO5; PSp6
    (("C", 2, 1, "character", [(1,)]), True),
    (("B", 2, 1, "character", []), True),
    (("C", 3, 1, "character", []), False),
    # SO6, Spin6 = SL4, PGL4
    (("D", 3, 1, "character", [(2,)]), True),
    (("D", 3, 1, "character", [(1,)]), False),
    (("A", 3, 1, "character", []), True),
    # G2^m
    (("G2", 2, 4, "character", []), True),
    # type C with nontrivial C
    (("C", 3, 2, "center", [(1, 1)]), False),
    # E6 adjoint
    (("E6", 6, 1, "character", []), False),
]


@pytest.mark.acceptance(9, "classifier spot verdicts")
def test_criterion_9():
    with criterion(9, "spot verdicts", 5):
        for args, want in SPOT:
            assert classify_stably_cayley(QuotientSpec(*args)).stably_cayley == want, args


@pytest.mark.acceptance(10, "property suites")
def test_criterion_10():
    with criterion(10, "property suites", 900):
        assert _props.snf_hnf_identities(1000) == 1000
        assert _props.bar_dd_zero() > 0
        cyc = _props.cyclic_h2_equals_tate()
        assert _props.regular_vanishing() > 0
        assert _props.optimized_vs_baseline(extra=cyc) > 0
        for m in (4, 5):
            assert _props.combinatorics_almost_coordinate(m) > 0
        for p in (2, 3):
            for m in range(1, 5):
                _props.combinatorics_coordinate(p, m)
