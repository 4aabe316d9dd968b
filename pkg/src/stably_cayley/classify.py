"""Stably Cayley decision for ``G = H^m / C`` with ``H`` simple and simply connected.

Everything is phrased on the character side: ``S ⊆ (P/Q)^m`` is the image of
the character lattice ``X(G)`` in ``(P/Q)^m``.  Center-side input is turned
into ``S`` by :func:`rootdata.center_annihilator`.

Coordinates in index sets and decompositions are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .cohomology import sha_obstruction_search
from .groups import CapExceeded, DEFAULT_ORDER_CAP
from .intlinalg import IntMatrix, lattice_basis, smith_normal_form
from .rootdata import (
    EXCEPTIONAL,
    InvalidGenerators,
    InvalidSpec,
    RootSystemSpec,
    center_annihilator,
    character_lattice_pms,
    quotient_group,
    subgroup_order,
)


class DimensionTooSmall(ValueError):
    pass


# ---------------------------------------------------------------------------
# linear algebra over F_p
# ---------------------------------------------------------------------------


def rref_mod_p(vectors: Sequence[Sequence[int]], p: int, m: int | None = None) -> tuple[list[tuple[int, ...]], list[int]]:
    """Reduced row echelon basis of the span over ``F_p`` and its pivot columns."""
    rows = [[x % p for x in v] for v in vectors]
    if m is None:
        m = len(rows[0]) if rows else 0
    piv: list[int] = []
    r = 0
    for c in range(m):
        k = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
    return [tuple(x) for x in rows[:r]], piv


def dim_mod_p(vectors, p: int, m: int | None = None) -> int:
    return len(rref_mod_p(vectors, p, m)[0])


def _unit(m: int, i: int) -> tuple[int, ...]:
    return tuple(int(j == i) for j in range(m))


def _contains(basis, v, p, m) -> bool:
    return dim_mod_p(list(basis) + [v], p, m) == len(basis)


def all_subspaces(p: int, m: int) -> list[tuple[tuple[int, ...], ...]]:
    """Every subspace of ``F_p^m`` by its RREF basis (small ``p^m`` only)."""
    from itertools import product

    vecs = [v for v in product(range(p), repeat=m) if any(v)]
    seen = {()}
    frontier = [()]
    while frontier:
        nxt = []
        for b in frontier:
            for v in vecs:
                if _contains(b, v, p, m):
                    continue
                nb = tuple(rref_mod_p(list(b) + [v], p, m)[0])
                if nb not in seen:
                    seen.add(nb)
                    nxt.append(nb)
        frontier = nxt
    return sorted(seen, key=lambda b: (len(b), b))


# ---------------------------------------------------------------------------
# subgroup operations
# ---------------------------------------------------------------------------


@dataclass
class Standardized:
    generators: list[tuple[int, ...]]
    automorphism: IntMatrix
    certificate: dict


def standardize_subgroup(gens: Sequence[Sequence[int]], n: int, m: int) -> Standardized:
    """Move ``S ⊆ (Z/n)^m`` to a standard subgroup ``<n_1 e_1, ..., n_r e_r>``.

    With ``B`` a basis of the preimage ``π^{-1}(S) ⊆ Z^m`` and ``U B V`` its
    Smith form, ``U`` maps ``π^{-1}(S)`` onto ``n_1 Z x ... x n_m Z`` and its
    reduction mod ``n`` is the automorphism ``g``.
    """
    cols = [tuple(x % n for x in g) for g in gens]
    for c in cols:
        if len(c) != m:
            raise InvalidGenerators(f"generator {list(c)} must have {m} entries")
    B = lattice_basis(IntMatrix.hstack([IntMatrix.from_columns(cols, nrows=m), IntMatrix.identity(m).scale(n)]))
    sf = smith_normal_form(B)
    U = sf.U
    factors = list(sf.invariant_factors)
    st = [tuple(f if j == i else 0 for j in range(m)) for i, f in enumerate(factors) if f % n]
    g = IntMatrix([[x % n for x in row] for row in U.tolist()], m)
    image = [tuple(x % n for x in (U @ c)) for c in cols]
    target = lattice_basis(IntMatrix.diagonal(factors))
    ok = all(
        all(x % f == 0 for x, f in zip(v, factors)) for v in image
    ) and lattice_basis(U @ B) == target
    order_S = subgroup_order_mod(cols, n, m)
    order_st = subgroup_order_mod(st, n, m)
    cert = {
        "lift": U.tolist(),
        "lift_determinant": U.det(),
        "invariant_factors": factors,
        "maps_preimage_onto_standard": ok,
        "orders": [order_S, order_st],
    }
    return Standardized(st, g, cert)


def subgroup_order_mod(gens, n: int, m: int) -> int:
    B = lattice_basis(IntMatrix.hstack([IntMatrix.from_columns(list(gens), nrows=m), IntMatrix.identity(m).scale(n)]))
    return n**m // abs(B.det())


def is_coordinate_subspace(gens: Sequence[Sequence[int]], p: int, m: int) -> frozenset[int] | None:
    """``I`` (1-based) with ``V = F_I``, or ``None``."""
    basis, _ = rref_mod_p(gens, p, m)
    inside = [i for i in range(m) if _contains(basis, _unit(m, i), p, m)]
    if len(inside) == len(basis):
        return frozenset(i + 1 for i in inside)
    return None


def defective_basis(gens: Sequence[Sequence[int]], p: int, m: int) -> list[tuple[int, ...]]:
    """Basis of vectors with at least one zero coordinate.

    The reduced echelon basis works: each row vanishes on the other pivot
    columns, and there is at least one other when ``dim V >= 2``.
    """
    basis, _ = rref_mod_p(gens, p, m)
    if len(basis) < 2:
        raise DimensionTooSmall("a defective basis needs dim V >= 2")
    return basis


@dataclass(frozen=True)
class AlmostCoordinateBasis:
    singles: tuple[int, ...]  # 1-based i with e_i in the basis
    pairs: tuple[tuple[int, int], ...]  # 1-based (j, h) with e_j + e_h in the basis

    def vectors(self, m: int) -> list[tuple[int, ...]]:
        out = [_unit(m, i - 1) for i in self.singles]
        for j, h in self.pairs:
            out.append(tuple(int(k in (j - 1, h - 1)) for k in range(m)))
        return out


def almost_coordinate_basis(gens: Sequence[Sequence[int]], m: int) -> AlmostCoordinateBasis | None:
    """The unique almost coordinate basis of ``V ⊆ F_2^m``, or ``None``.

    Collect the ``e_i`` in ``V``, then the ``e_j + e_h`` in ``V`` with ``j, h``
    outside that set; ``V`` is almost coordinate iff these are disjoint and
    span ``V``.
    """
    basis, _ = rref_mod_p(gens, 2, m)
    singles = [i for i in range(m) if _contains(basis, _unit(m, i), 2, m)]
    rest = [i for i in range(m) if i not in singles]
    pairs = []
    for j, h in combinations(rest, 2):
        v = tuple(int(k in (j, h)) for k in range(m))
        if _contains(basis, v, 2, m):
            pairs.append((j, h))
    used = [x for pr in pairs for x in pr]
    if len(used) != len(set(used)):
        return None
    if len(singles) + len(pairs) != len(basis):
        return None
    return AlmostCoordinateBasis(tuple(i + 1 for i in singles), tuple((j + 1, h + 1) for j, h in pairs))


# ---------------------------------------------------------------------------
# the decision procedure
# ---------------------------------------------------------------------------


@dataclass
class QuotientSpec:
    """``family`` is ``A``..``D``, ``G``/``G2`` or an exceptional tag
    ``E6, E7, E8, F4``; ``rank`` is the Lie rank."""

    family: str
    rank: int
    m: int
    subgroup_side: str = "character"
    generators: list = field(default_factory=list)

    def __post_init__(self):
        f = str(self.family).upper()
        if f in ("E", "F"):
            f = f"{f}{self.rank}"
        if f == "G":
            f = "G2"
        self.family = f
        if self.m < 1:
            raise InvalidSpec("m must be at least 1")
        if self.subgroup_side not in ("character", "center"):
            raise InvalidSpec("subgroup_side must be 'character' or 'center'")
        if f in EXCEPTIONAL:
            return
        if f == "G2" and self.rank != 2:
            raise InvalidSpec("G2 has rank 2")
        if f not in ("A", "B", "C", "D", "G2"):
            raise InvalidSpec(f"unknown family {self.family!r}")
        if f == "D" and self.rank < 3:
            raise InvalidSpec(f"D{self.rank} is not simple")
        self.root_spec()  # validates
        mods = self.moduli
        gens = []
        for g in self.generators:
            g = tuple(int(x) for x in g)
            if len(g) != len(mods):
                raise InvalidGenerators(f"generator {list(g)} must have {len(mods)} entries")
            gens.append(tuple(x % d for x, d in zip(g, mods)))
        self.generators = gens

    @property
    def is_exceptional(self) -> bool:
        return self.family in EXCEPTIONAL

    def root_spec(self) -> RootSystemSpec:
        return RootSystemSpec(self.family, self.rank)

    @property
    def moduli(self) -> list[int]:
        return list(quotient_group(self.root_spec()).torsion) * self.m

    def character_generators(self) -> list[tuple[int, ...]]:
        if self.subgroup_side == "character":
            return [g for g in self.generators if any(g)]
        return center_annihilator(self.root_spec(), self.m, self.generators)

    @property
    def label(self) -> str:
        return self.family if self.is_exceptional else self.root_spec().label


@dataclass
class Verdict:
    stably_cayley: bool
    decomposition: list[dict] | None
    witness: dict
    basis_certificate: list | None = None

    def to_dict(self) -> dict:
        return {
            "stably_cayley": self.stably_cayley,
            "decomposition": self.decomposition,
            "witness": self.witness,
            "basis_certificate": self.basis_certificate,
        }


def _factors(assign: dict[int, str], pairs: Sequence[tuple[int, int]] = (), pair_name: str = "") -> list[dict]:
    out = [{"factor": f, "coordinates": [i]} for i, f in assign.items()]
    out += [{"factor": pair_name, "coordinates": [j, h]} for j, h in pairs]
    return sorted(out, key=lambda d: d["coordinates"][0])


def _uniform(m: int, name: str) -> list[dict]:
    return [{"factor": name, "coordinates": [i]} for i in range(1, m + 1)]


def _same(gens, mods, target) -> bool:
    k = len(mods)
    rel = IntMatrix.diagonal(mods)
    a = lattice_basis(IntMatrix.hstack([IntMatrix.from_columns(list(gens), nrows=k), rel]))
    b = lattice_basis(IntMatrix.hstack([IntMatrix.from_columns(list(target), nrows=k), rel]))
    return a == b


def classify_stably_cayley(
    spec: QuotientSpec,
    *,
    sha_witness: bool = False,
    max_group_order: int = DEFAULT_ORDER_CAP,
    h2_path: str = "optimized",
    search_budget: int = 200,
) -> Verdict:
    if spec.is_exceptional:
        return Verdict(False, None, {"branch": "type-excluded", "reason": f"{spec.family} is not of type A, B, C, D or G2"})
    rs = spec.root_spec()
    f, l, m = rs.family, rs.rank, spec.m
    S = spec.character_generators()
    mods = spec.moduli
    n_all = len(mods)

    # low-rank coincidences
    if f in ("B", "C") and l == 1:
        f = "A"
    if f == "C" and l == 2:
        f = "B"

    if f == "A" and l == 1:
        v = _decide_a1(S, m)
    elif f == "A" and l == 2:
        v = _decide_coordinate(S, 3, m, "A2-coordinate", "SL3", "PGL3")
    elif f == "B" and l == 2:
        v = _decide_coordinate(S, 2, m, "B2-coordinate", "Sp4", "SO5")
    elif (f == "A" and l == 3) or (f == "D" and l == 3):
        v = _decide_so6(S, m)
    elif f == "A":
        zero = _same(S, mods, [])
        v = Verdict(zero, _uniform(m, f"PGL{l + 1}") if zero else None, {
            "branch": "A-adjoint",
            "reason": "stably Cayley iff S = 0, i.e. G = PGL_n^m" if zero else "S is nonzero",
        })
    elif f == "B":
        zero = _same(S, mods, [])
        v = Verdict(zero, _uniform(m, f"SO{2 * l + 1}") if zero else None, {
            "branch": "spin-SO",
            "reason": "X = Q^m, G = SO^m" if zero else "X is not M^m",
        })
    elif f == "D":
        v = _decide_d(S, l, m)
    elif f == "C":
        full = _same(S, mods, [_unit(n_all, i) for i in range(n_all)])
        v = Verdict(full, _uniform(m, f"Sp{2 * l}") if full else None, {
            "branch": "C-trivial-center",
            "reason": "C is trivial" if full else "C is nontrivial",
        })
    else:  # G2
        v = Verdict(True, _uniform(m, "G2"), {"branch": "G2", "reason": "the center of G2 is trivial"})

    v.witness["label"] = spec.label
    v.witness["m"] = m
    v.witness["character_subgroup"] = [list(g) for g in S]
    v.witness["character_subgroup_order"] = subgroup_order(rs, m, S)
    if sha_witness and not v.stably_cayley:
        v.witness["sha_search"] = _search(rs, m, S, max_group_order, h2_path, search_budget)
    return v


def _decide_a1(S, m) -> Verdict:
    ac = almost_coordinate_basis(S, m)
    if ac is None:
        return Verdict(False, None, {"branch": "A1-almost-coordinate", "reason": "S is not almost coordinate"})
    used = set(ac.singles) | {x for p in ac.pairs for x in p}
    assign = {i: "SL2" for i in ac.singles}
    assign.update({i: "PGL2" for i in range(1, m + 1) if i not in used})
    return Verdict(
        True,
        _factors(assign, ac.pairs, "SO4"),
        {"branch": "A1-almost-coordinate", "reason": "S has an almost coordinate basis"},
        [list(x) for x in ac.vectors(m)],
    )


def _decide_coordinate(S, p, m, branch, inside, outside) -> Verdict:
    I = is_coordinate_subspace(S, p, m)
    if I is None:
        return Verdict(False, None, {"branch": branch, "reason": "S is not a coordinate subspace"})
    assign = {i: (inside if i in I else outside) for i in range(1, m + 1)}
    return Verdict(True, _factors(assign), {"branch": branch, "reason": "S is a coordinate subspace"},
                   [list(_unit(m, i - 1)) for i in sorted(I)])


def _decide_so6(S, m) -> Verdict:
    branch = "SO6"
    if any(x % 2 for g in S for x in g):
        return Verdict(False, None, {"branch": branch, "reason": "X is not contained in M^m"})
    half = [tuple((x // 2) % 2 for x in g) for g in S]
    I = is_coordinate_subspace(half, 2, m)
    if I is None:
        return Verdict(False, None, {"branch": branch, "reason": "X/Q^m is not coordinate in (M/Q)^m"})
    assign = {i: ("SO6" if i in I else "PGL4") for i in range(1, m + 1)}
    return Verdict(True, _factors(assign), {"branch": branch, "reason": "X ⊆ M^m with coordinate image"},
                   [[2 * int(j == i - 1) for j in range(m)] for i in sorted(I)])


def _decide_d(S, l, m) -> Verdict:
    branch = "spin-SO"
    if l % 2:
        target = [tuple(2 * int(j == i) for j in range(m)) for i in range(m)]
        ok = _same(S, [4] * m, target)
        return Verdict(ok, _uniform(m, f"SO{2 * l}") if ok else None,
                       {"branch": branch, "reason": "X = M^m" if ok else "X is not M^m"})
    # (Z/2)^2 per block; S must be the direct sum of one order-2 class per block
    k = 2 * m
    basis, _ = rref_mod_p(S, 2, k)
    classes = []
    for i in range(m):
        blk = {2 * i, 2 * i + 1}
        inside = [v for v in ((1, 0), (0, 1), (1, 1)) if _contains(basis, tuple(v[j - 2 * i] if j in blk else 0 for j in range(k)), 2, k)]
        classes.append(inside)
    reason = None
    if len(basis) != m or any(len(c) != 1 for c in classes):
        reason = "X is not a product of index-2 intermediate lattices"
    elif l != 4 and any(c[0] != (1, 1) for c in classes):
        reason = "X is not M^m"
    if reason:
        return Verdict(False, None, {"branch": branch, "reason": reason})
    w = {"branch": branch, "reason": "X = M^m"}
    name = f"SO{2 * l}"
    if l == 4:
        chosen = [list(c[0]) for c in classes]
        w["triality_classes"] = chosen
        w["triality_nonuniform"] = len({tuple(c) for c in chosen}) > 1
        w["reason"] = "X = M^m up to triality in each D4 block"
    return Verdict(True, _uniform(m, name), w)


def _search(rs: RootSystemSpec, m: int, S, cap: int, path: str, budget: int) -> dict:
    try:
        L = character_lattice_pms(rs, m, S, order_cap=cap)
        res = sha_obstruction_search(L.group, L, budget=budget, path=path)
    except CapExceeded as e:
        return {"found": False, "budget_exhausted": True, "reason": str(e), "inspected": 0}
    out = {"found": res.found, "budget_exhausted": res.budget_exhausted, "inspected": len(res.inspected)}
    if res.found:
        out["subgroup_generators"] = [g.tolist() for g in res.subgroup.generators]
        out["sha"] = str(res.sha.sha)
    return out
