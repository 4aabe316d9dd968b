import json
import os
from fractions import Fraction

import pytest

from stably_cayley.rootdata import (
    InvalidGenerators,
    InvalidSpec,
    RootSystemSpec,
    center_annihilator,
    character_lattice_pms,
    fundamental_weights,
    lam,
    quotient_group,
    root_datum,
    simple_roots,
    so_character_lattice,
    subgroup_order,
    weyl_group,
    weyl_order,
)
from stably_cayley.glattice import ambient_index

from _support import cartan_matrix, det_fraction, weyl_order_formula

SPECS = [("A", l) for l in range(1, 6)] + [("B", l) for l in range(1, 5)] + [("C", l) for l in range(1, 5)]
SPECS += [("D", l) for l in range(3, 6)] + [("G2", 2)]


def _dot(a, b):
    return sum(Fraction(x) * Fraction(y) for x, y in zip(a, b))


@pytest.mark.parametrize("family,l", SPECS)
def test_weyl_order_matches_formula(family, l):
    spec = RootSystemSpec(family, l)
    assert weyl_order(spec) == weyl_order_formula(family, l)
    if weyl_order_formula(family, l) <= 2000:
        assert weyl_group(spec).order == weyl_order_formula(family, l)


@pytest.mark.parametrize("family,l", SPECS)
def test_cartan_matrix_and_index(family, l):
    spec = RootSystemSpec(family, l)
    roots = simple_roots(spec)
    want = cartan_matrix(family, l)
    got = [[int(2 * _dot(roots[i], roots[j]) / _dot(roots[j], roots[j])) for j in range(l)] for i in range(l)]
    assert got == want
    # |P/Q| is the determinant of the Cartan matrix
    assert (quotient_group(spec).order or 1) == det_fraction(want)


@pytest.mark.parametrize("family,l", SPECS)
def test_weights_dual_to_coroots(family, l):
    spec = RootSystemSpec(family, l)
    roots, weights = simple_roots(spec), fundamental_weights(spec)
    for i, w in enumerate(weights):
        for j, a in enumerate(roots):
            assert 2 * _dot(w, a) / _dot(a, a) == int(i == j)


@pytest.mark.parametrize("family,l", SPECS)
def test_lambda_vanishes_on_roots(family, l):
    spec = RootSystemSpec(family, l)
    k = len(quotient_group(spec).torsion)
    for a in simple_roots(spec):
        assert lam(spec, a) == (0,) * k


def test_known_weights():
    half = Fraction(1, 2)
    assert fundamental_weights(RootSystemSpec("B", 3))[2] == (half, half, half)
    assert fundamental_weights(RootSystemSpec("D", 4))[0] == (1, 0, 0, 0)
    assert fundamental_weights(RootSystemSpec("C", 3))[1] == (1, 1, 0)


def test_golden_file():
    path = os.path.join(os.path.dirname(__file__), "golden", "rootdata.json")
    with open(path) as fh:
        golden = json.load(fh)
    from make_golden import records

    assert records() == golden


def test_intermediate_lattices():
    d4 = root_datum(RootSystemSpec("D", 4))
    assert sum(1 for x in d4.intermediates if x["proper"]) == 3
    a3 = root_datum(RootSystemSpec("A", 3))
    assert sum(1 for x in a3.intermediates if x["proper"]) == 1
    assert ambient_index(d4.Q, d4.P) == 4


def test_character_lattice_index():
    spec = RootSystemSpec("A", 1)
    full = character_lattice_pms(spec, 2, [(1, 0), (0, 1)])
    line = character_lattice_pms(spec, 2, [(1, 1)])
    assert ambient_index(line, full) == 2
    assert subgroup_order(spec, 2, [(1, 1)]) == 2


def test_so_character_lattice():
    so = so_character_lattice(RootSystemSpec("D", 3))
    assert so.subgroup == ((2,),)
    assert so_character_lattice(RootSystemSpec("D", 4)).triality_ambiguous


def test_center_annihilator():
    assert center_annihilator(RootSystemSpec("A", 1), 2, [(1, 1)]) == [(1, 1)]
    assert center_annihilator(RootSystemSpec("D", 4), 1, [(1, 0)]) == [(0, 1)]
    # trivial C: S is everything
    assert len(center_annihilator(RootSystemSpec("C", 3), 2, [])) == 2
    with pytest.raises(InvalidGenerators):
        center_annihilator(RootSystemSpec("A", 1), 2, [(1,)])


@pytest.mark.parametrize("family,l", [("D", 2), ("D", 1), ("A", 0), ("X", 3), ("G2", 3)])
def test_invalid_specs(family, l):
    with pytest.raises(InvalidSpec):
        RootSystemSpec(family, l)
