"""Explicit lattices that carry obstructions, each with its verification.

* ``family_lattice_m``: the lattice ``M = Z^S + Zβ``, ``β = ½Σε_s``, for a
  diagram whose components are of type ``B_l`` or ``D_l``, together with
  the Klein four-group ``ι(Γ) ⊂ W`` built from a three-way partition.
* ``klein_b1_lattice``: the even-sum lattice in ``Z^3`` under sign changes.
* ``so6_lattice``: ``(ZD_3)^m + Z v_e``.
* ``sl3_lattice``: ``(ZA_2)^m + Z x_a`` and the diagram-twist isomorphism.
* ``a2m_weight_identification`` and ``lambda6_restricted`` for ``Λ_{3m}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cohomology import ShaResult, sha2
from .glattice import (
    GLattice,
    LatticeHom,
    ambient_index,
    intersection_with_coordinate_block,
    j_gamma,
    lattice_from_ambient,
    restrict,
    sublattice_with_action,
)
from .groups import MatGroup, permutation_matrix
from .intlinalg import FullColumnSolver, IntMatrix, cokernel, lattice_basis, kernel_basis
from .rootdata import RootSystemSpec, fundamental_weights, simple_roots, weyl_generators, weyl_power


class WitnessError(ValueError):
    pass


class EmptyPart(WitnessError):
    pass


class ParityViolation(WitnessError):
    pass


class NotInWeylGroup(WitnessError):
    pass


class D4Excluded(WitnessError):
    pass


class BadM(WitnessError):
    pass


class BadVector(WitnessError):
    pass


# ---------------------------------------------------------------------------
# the family M
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiagramSpec:
    components: tuple[tuple[str, int], ...]

    def __post_init__(self):
        comps = tuple((f.upper(), int(l)) for f, l in self.components)
        for f, l in comps:
            if f == "B" and l < 1 or f == "D" and l < 3 or f not in ("B", "D"):
                raise WitnessError(f"component {f}{l} is not of type B_l (l>=1) or D_l (l>=3)")
        object.__setattr__(self, "components", comps)

    @classmethod
    def parse(cls, text: str) -> DiagramSpec:
        """``"B1^3"``, ``"B2+B1"``, ``"D3+B1"`` style descriptions."""
        comps = []
        for part in text.replace(" ", "").split("+"):
            base, _, power = part.partition("^")
            k = int(power) if power else 1
            comps.extend([(base[0], int(base[1:]))] * k)
        return cls(tuple(comps))

    @property
    def size(self) -> int:
        return sum(l for _, l in self.components)

    @property
    def offsets(self) -> list[int]:
        out, k = [], 0
        for _, l in self.components:
            out.append(k)
            k += l
        return out

    @property
    def label(self) -> str:
        return "+".join(f"{f}{l}" for f, l in self.components)


@dataclass(frozen=True)
class Partition3:
    """Per component, three disjoint lists of local indices covering it."""

    parts: tuple[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]], ...]

    def unions(self, d: DiagramSpec) -> tuple[frozenset, frozenset, frozenset]:
        U = [set(), set(), set()]
        for off, comp in zip(d.offsets, self.parts):
            for k in range(3):
                U[k].update(off + i for i in comp[k])
        return tuple(frozenset(u) for u in U)


def diagram_weyl_group(d: DiagramSpec) -> MatGroup:
    n = d.size
    gens = []
    for off, (f, l) in zip(d.offsets, d.components):
        for g in weyl_generators(RootSystemSpec(f, l)):
            gens.append(IntMatrix.block_diagonal([IntMatrix.identity(off), g, IntMatrix.identity(n - off - l)]))
    return MatGroup(gens, degree=n)


def family_lattice_m(d: DiagramSpec) -> GLattice:
    """``M`` generated by ``β = ½Σε_s`` and all ``ε_s`` (ambient denominator 2)."""
    n = d.size
    gens = [tuple(2 * int(i == j) for j in range(n)) for i in range(n)] + [(1,) * n]
    return lattice_from_ambient(diagram_weyl_group(d), IntMatrix.from_columns(gens), 2, name=f"M({d.label})")


def default_partition(d: DiagramSpec) -> Partition3:
    """Three-way partition with every union non-empty.

    Odd ``D_l`` components split as ``(1, 1, l-2)``.  Without odd ``D``, the
    first ``D_l`` with ``l >= 6`` splits as ``(2, 2, l-4)``, failing that a
    ``D_4`` splits as ``(2, 2, 0)``; other even ``D`` go whole to part 3.
    ``B`` indices fill empty parts first, then part 3.
    """
    comps = d.components
    if len(comps) == 1 and comps[0] == ("D", 4):
        raise D4Excluded("the diagram D4 alone admits no such partition")
    parts: list = [None] * len(comps)
    odd = [i for i, (f, l) in enumerate(comps) if f == "D" and l % 2]
    for i in odd:
        l = comps[i][1]
        parts[i] = ((0,), (1,), tuple(range(2, l)))
    if not odd:
        even = [i for i, (f, l) in enumerate(comps) if f == "D" and l % 2 == 0]
        big = [i for i in even if comps[i][1] >= 6]
        first = big[0] if big else (even[0] if even else None)
        if first is not None:
            l = comps[first][1]
            parts[first] = ((0, 1), (2, 3), tuple(range(4, l)))
    for i, (f, l) in enumerate(comps):
        if f == "D" and parts[i] is None:
            parts[i] = ((), (), tuple(range(l)))
    filled = [False, False, False]
    for p in parts:
        if p is not None:
            for k in range(3):
                filled[k] = filled[k] or bool(p[k])
    for i, (f, l) in enumerate(comps):
        if f != "B":
            continue
        buckets = [[], [], []]
        for s in range(l):
            k = next((k for k in range(3) if not filled[k]), 2)
            buckets[k].append(s)
            filled[k] = True
        parts[i] = tuple(tuple(b) for b in buckets)
    P = Partition3(tuple(parts))
    if not all(P.unions(d)):
        raise EmptyPart("could not make all three parts non-empty")
    return P


@dataclass
class GammaEmbedding:
    diagram: DiagramSpec
    partition: Partition3
    unions: tuple
    images: tuple[IntMatrix, IntMatrix, IntMatrix]
    group: MatGroup


def gamma_embedding(d: DiagramSpec, p: Partition3 | None = None) -> GammaEmbedding:
    """``ι(γ_κ) = ∏_{s ∉ U_κ} c_s`` for ``κ = 1, 2, 3``."""
    if p is None:
        p = default_partition(d)
    if len(p.parts) != len(d.components):
        raise WitnessError("one partition entry per component is required")
    for (f, l), comp in zip(d.components, p.parts):
        flat = sorted(i for part in comp for i in part)
        if flat != list(range(l)):
            raise WitnessError(f"parts do not partition the component {f}{l}")
        if f == "D" and any((len(part) - l) % 2 for part in comp):
            raise ParityViolation(f"part sizes of {f}{l} must all be congruent to {l} mod 2")
    U = p.unions(d)
    if not all(U):
        raise EmptyPart("each of U_1, U_2, U_3 must be non-empty")
    n = d.size
    imgs = tuple(IntMatrix.diagonal([1 if s in U[k] else -1 for s in range(n)]) for k in range(3))
    for g in imgs:
        _check_in_weyl(d, g)
    G = MatGroup(imgs[:2], degree=n)
    if imgs[0] @ imgs[1] != imgs[2] or G.order != 4:
        raise NotInWeylGroup("images do not form a Klein four-group")
    return GammaEmbedding(d, p, U, imgs, G)


def _check_in_weyl(d: DiagramSpec, g: IntMatrix):
    for off, (f, l) in zip(d.offsets, d.components):
        signs = [g[off + i, off + i] for i in range(l)]
        if f == "D" and signs.count(-1) % 2:
            raise NotInWeylGroup(f"odd number of sign changes on component {f}{l}")


@dataclass
class FamilyWitness:
    lattice: GLattice
    embedding: GammaEmbedding
    restricted: GLattice
    sha: ShaResult
    m0_isomorphic_to_j: bool
    sum_identity: bool


def family_witness(d: DiagramSpec, p: Partition3 | None = None, path: str = "optimized") -> FamilyWitness:
    M = family_lattice_m(d)
    emb = gamma_embedding(d, p)
    R = restrict(M, emb.group)
    res = sha2(R, path=path)
    return FamilyWitness(M, emb, R, res, _m0_check(M, R, emb), _sum_identity(d, emb))


def _in_coords(L: GLattice, v) -> tuple[int, ...]:
    y = FullColumnSolver(L.ambient[0]).solve(v)
    if y is None:
        raise WitnessError("vector is not in the lattice")
    return y


def _m0_check(M: GLattice, R: GLattice, emb: GammaEmbedding) -> bool:
    """``M_0 = span(Γβ)`` has rank 3 and ``e_g ↦ gβ`` is an isomorphism
    ``J_Γ -> M_0``."""
    n = emb.diagram.size
    beta = (1,) * n
    orbit = {g: g @ beta for g in emb.group.elements}
    b = [_in_coords(M, orbit[g]) for g in emb.group.elements if g != emb.group.identity]
    if len(b) != 3:
        return False
    basis = IntMatrix.from_columns(b)
    M0, _ = sublattice_with_action(R, basis)
    J = j_gamma(emb.group)
    # column for e_g is the coordinate vector of gβ in the basis b: unit vectors
    hom = LatticeHom(J, M0, IntMatrix.identity(3))
    return hom.is_isomorphism() and M0.rank == 3


def _sum_identity(d: DiagramSpec, emb: GammaEmbedding) -> bool:
    """``β + β_κ = Σ_{s∈U_κ} ε_s`` (numerators over 2)."""
    n = d.size
    beta = (1,) * n
    for g, U in zip(emb.images, emb.unions):
        bk = g @ beta
        lhs = tuple(x + y for x, y in zip(beta, bk))
        rhs = tuple(2 if s in U else 0 for s in range(n))
        if lhs != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# the Klein lattice in Z^3
# ---------------------------------------------------------------------------

KLEIN_EXPECTED = {
    "sigma": [[0, 0, 1], [-1, -1, -1], [1, 0, 0]],
    "tau": [[-1, -1, -1], [0, 0, 1], [0, 1, 0]],
    "rho": [[-1, 0, 0], [0, -1, 0], [0, 0, -1]],
}


def klein_b1_lattice() -> tuple[GLattice, dict]:
    """``M = {a ∈ Z^3 : a_1+a_2+a_3 even}`` with ``σ = c_2c_3``, ``τ = c_1c_2``,
    ``ρ = c_1c_2c_3``, in the basis ``e_1 = ε_2-ε_1``, ``e_2 = ε_2-ε_3``,
    ``e_3 = -ε_1-ε_3``.  Returns the lattice and a certificate."""
    c = [IntMatrix.diagonal([-1 if i == k else 1 for i in range(3)]) for k in range(3)]
    sigma, tau, rho = c[1] @ c[2], c[0] @ c[1], c[0] @ c[1] @ c[2]
    E = IntMatrix.from_columns([(-1, 1, 0), (0, 1, -1), (-1, 0, -1)])
    G = MatGroup([sigma, tau, rho])
    L = GLattice(G, [_conj(E, g) for g in (sigma, tau, rho)], rank=3, ambient=(E, 1), name="M(klein)")
    L.check_homomorphism()
    even = lattice_basis(IntMatrix.from_columns([(1, 1, 0), (1, -1, 0), (0, 1, -1)]))
    det_rel = IntMatrix.from_columns([FullColumnSolver(even).solve(v) for v in E.columns()]).det()
    got = dict(zip(("sigma", "tau", "rho"), (m.tolist() for m in L.images)))
    cert = {
        "matrices": got,
        "expected": KLEIN_EXPECTED,
        "matches": got == KLEIN_EXPECTED,
        "basis_change_determinant": det_rel,
        "group_order": G.order,
    }
    return L, cert


def _conj(E: IntMatrix, g: IntMatrix) -> IntMatrix:
    solver = FullColumnSolver(E)
    return IntMatrix.from_columns([solver.solve(c) for c in (g @ E).columns()])


# ---------------------------------------------------------------------------
# the D3^m lattice
# ---------------------------------------------------------------------------


def _eps(n: int, *idx, signs=None) -> tuple[int, ...]:
    v = [0] * n
    for k, i in enumerate(idx):
        v[i - 1] += 1 if signs is None else signs[k]
    return tuple(v)


def so6_lattice(m: int) -> GLattice:
    """``L = (ZD_3)^m + Z v_e`` with ``v_e = ε_1 + ε_4 + ... + ε_{3m-2}``,
    acted on by ``W(D_3)^m``."""
    if m < 2:
        raise BadM("m must be at least 2")
    n = 3 * m
    gens = []
    for i in range(m):
        o = 3 * i
        gens += [_eps(n, o + 1, o + 2), _eps(n, o + 1, o + 2, signs=(1, -1)), _eps(n, o + 2, o + 3, signs=(1, -1))]
    gens.append(_eps(n, *[3 * i + 1 for i in range(m)]))
    return lattice_from_ambient(weyl_power(RootSystemSpec("D", 3), m), IntMatrix.from_columns(gens), 1, name=f"L(D3^{m})")


def _signed_perm(n: int, perm: dict, flips: Sequence[int]) -> IntMatrix:
    """1-based: ``ε_i ↦ ±ε_{perm(i)}``, the sign negative for ``i`` in ``flips``."""
    p = [perm.get(i + 1, i + 1) - 1 for i in range(n)]
    P = permutation_matrix(p)
    return P @ IntMatrix.diagonal([-1 if i + 1 in flips else 1 for i in range(n)])


def so6_gamma(m: int) -> tuple[IntMatrix, IntMatrix]:
    """``a = (12) c_4c_5 c_7c_8 ... c_{3m-2}c_{3m-1}`` and ``b = c_1c_2 (45)``."""
    if m < 2:
        raise BadM("m must be at least 2")
    n = 3 * m
    flips_a = [x for i in range(1, m) for x in (3 * i + 1, 3 * i + 2)]
    a = _signed_perm(n, {1: 2, 2: 1}, flips_a)
    b = _signed_perm(n, {4: 5, 5: 4}, [1, 2])
    return a, b


@dataclass
class SO6Witness:
    lattice: GLattice
    a: IntMatrix
    b: IntMatrix
    sha: ShaResult
    index: int
    basis_check: bool
    commuting_involutions: bool
    orbit_formulas: bool


def so6_betas(m: int) -> list[tuple[int, ...]]:
    n = 3 * m
    delta = [0] * n
    for i in range(2, m):
        delta[3 * i] = 1
    d = tuple(delta)

    def add(*vs):
        return tuple(sum(x) for x in zip(*vs))

    v_e = add(_eps(n, 1, 4), d)
    v_a = add(_eps(n, 2, 4, signs=(1, -1)), tuple(-x for x in d))
    v_b = add(_eps(n, 1, 5, signs=(-1, 1)), d)
    betas = [v_e, v_a, v_b, _eps(n, 4, 5, signs=(1, -1))]
    for i in range(2, m):
        o = 3 * i
        betas += [_eps(n, o + 1, o + 2), _eps(n, o + 1, o + 2, signs=(1, -1))]
    return betas


def so6_witness(m: int, path: str = "optimized") -> SO6Witness:
    L = so6_lattice(m)
    a, b = so6_gamma(m)
    n = 3 * m
    ident = IntMatrix.identity(n)
    comm = a @ a == ident and b @ b == ident and a @ b == b @ a and a != ident and b != ident
    G = MatGroup([a, b], degree=n)
    R = restrict(L, G)
    res = sha2(R, path=path)
    # index over (ZD3)^m
    root = lattice_from_ambient(
        weyl_power(RootSystemSpec("D", 3), m),
        IntMatrix.block_diagonal([IntMatrix.from_columns([(1, 1, 0), (1, -1, 0), (0, 1, -1)])] * m),
        1,
    )
    idx = ambient_index(root, L)
    # orbit of v_e
    betas = so6_betas(m)
    v_e = betas[0]
    orbit_ok = a @ v_e == betas[1] and b @ v_e == betas[2]
    v_ab = (a @ b) @ v_e
    orbit_ok = orbit_ok and all(sum(x) == 0 for x in zip(v_e, betas[1], betas[2], v_ab))
    # L_0 = L ∩ V_0 with V_0 spanned by ε_{3i+1}, ε_{3i+2}
    V0 = [x for i in range(m) for x in (3 * i, 3 * i + 1)]
    K = intersection_with_coordinate_block(L, V0)
    L0 = lattice_basis(L.ambient[0] @ K)
    B = IntMatrix.from_columns(betas)
    in_L = all(FullColumnSolver(L.ambient[0]).solve(v) is not None for v in betas)
    basis_ok = in_L and len(betas) == 2 * m == K.ncols and lattice_basis(B) == L0
    return SO6Witness(L, a, b, res, idx, basis_ok, comm, orbit_ok)


# ---------------------------------------------------------------------------
# the A2^m lattices
# ---------------------------------------------------------------------------

_A2_ROOTS = [(1, -1, 0), (0, 1, -1)]
_OMEGA1 = (2, -1, -1)  # numerator over 3


def _check_a(m: int, a: Sequence[int]):
    if m < 2:
        raise BadM("m must be at least 2")
    if len(a) != m or any(x not in (1, 2) for x in a):
        raise BadVector("a must have m entries, each 1 or 2")


def sl3_lattice(m: int, a: Sequence[int] | None = None) -> GLattice:
    """``L_a = (ZA_2)^m + Z x_a`` with ``x_a = Σ a_i ω_1^{(i)}`` (ambient
    ``Q^{3m}``, denominator 3) under ``(Sym_3)^m``."""
    a = tuple(a) if a is not None else (1,) * m
    _check_a(m, a)
    n = 3 * m
    gens = []
    for i in range(m):
        for r in _A2_ROOTS:
            v = [0] * n
            v[3 * i:3 * i + 3] = [3 * x for x in r]
            gens.append(tuple(v))
    x = [0] * n
    for i, ai in enumerate(a):
        x[3 * i:3 * i + 3] = [ai * t for t in _OMEGA1]
    gens.append(tuple(x))
    return lattice_from_ambient(weyl_power(RootSystemSpec("A", 2), m), IntMatrix.from_columns(gens), 3, name=f"L_{''.join(map(str, a))}")


def tau_matrix(m: int, a: Sequence[int]) -> IntMatrix:
    """``τ``: the diagram automorphism ``-(1 3)`` on the blocks with ``a_i = 2``."""
    blk = IntMatrix([[0, 0, -1], [0, -1, 0], [-1, 0, 0]])
    return IntMatrix.block_diagonal([blk if x == 2 else IntMatrix.identity(3) for x in a])


def sl3_tau_iso(m: int, a: Sequence[int]) -> LatticeHom:
    """The ``τ_*``-isomorphism ``L_1 -> L_a``; ``φ`` is conjugation by ``τ``."""
    a = tuple(a)
    _check_a(m, a)
    L1 = sl3_lattice(m)
    La = sl3_lattice(m, a)
    T = tau_matrix(m, a)
    solver = FullColumnSolver(La.ambient[0])
    cols = []
    for c in (T @ L1.ambient[0]).columns():
        y = solver.solve(c)
        if y is None:
            raise WitnessError("τ does not map L_1 into L_a")
        cols.append(y)
    mat = IntMatrix.from_columns(cols)
    return LatticeHom(L1, La, mat, phi=lambda g: T @ g @ T)


def _weights_a(n: int):
    spec = RootSystemSpec("A", n - 1)
    return spec, simple_roots(spec), fundamental_weights(spec)


def _num(v, d) -> tuple[int, ...]:
    out = []
    for x in v:
        y = Fraction(x) * d
        assert y.denominator == 1
        out.append(int(y))
    return tuple(out)


def a2m_weight_identification(m: int) -> dict:
    """Checks that ``Λ_{3m} ∩ ψ((QA_2)^m)`` has basis ``Ξ' ∪ {μ}`` and equals
    ``ψ(L_1)``, and that ``Λ_{3m}/M`` is free of rank ``m - 1``."""
    if m < 2:
        raise BadM("m must be at least 2")
    n = 3 * m
    D = n  # common denominator
    spec, alpha, lam = _weights_a(n)
    A = [_num(v, D) for v in alpha]  # alpha[k-1] = α_k
    lam1 = _num(lam[0], D)
    out: dict = {}
    # λ_1 = (1/3m) Σ (3m-k) α_k
    comb = [sum((n - k) * A[k - 1][j] for k in range(1, n)) for j in range(n)]
    out["lambda1_formula"] = all(c == n * x for c, x in zip(comb, lam1))
    # ψ(α_k^{(i)}) = α_{3(i-1)+k}
    psi_ok = True
    for i in range(m):
        for k, r in enumerate(_A2_ROOTS, start=1):
            v = [0] * n
            v[3 * i:3 * i + 3] = [D * x for x in r]
            psi_ok = psi_ok and tuple(v) == A[3 * i + k - 1]
    out["psi_on_roots"] = psi_ok
    Lam = lattice_basis(IntMatrix.from_columns(A + [lam1]))
    Xi = IntMatrix.from_columns(A[: n - 2] + [lam1])
    out["xi_basis"] = Xi.ncols == n - 1 and lattice_basis(Xi) == Lam
    xi_prime = [A[k - 1] for k in range(1, n - 1) if k % 3 != 0]
    mu = tuple(m * x - sum((m - i) * A[3 * i - 1][j] for i in range(1, m)) for j, x in enumerate(lam1))
    coeffs = [n - k for k in range(1, n)]
    for k in range(3, n, 3):
        coeffs[k - 1] = 0
    mu_formula = tuple(
        sum(Fraction(coeffs[k - 1], 3) * A[k - 1][j] for k in range(1, n)) for j in range(n)
    )
    out["mu_formula"] = all(Fraction(x) == y for x, y in zip(mu, mu_formula))
    # M = Λ ∩ span ψ((QA_2)^m): coordinates y with Λ y in the span
    span = IntMatrix.from_columns([A[k - 1] for k in range(1, n) if k % 3 != 0])
    eqs = kernel_basis(span.T).T  # rows vanish on the span
    K = kernel_basis(eqs @ Lam)
    M = lattice_basis(Lam @ K)
    basis = IntMatrix.from_columns(xi_prime + [mu])
    out["xi_prime_mu_basis"] = basis.ncols == 2 * m == M.ncols and lattice_basis(basis) == M
    L1 = sl3_lattice(m)
    psiL1 = lattice_basis(L1.ambient[0].scale(D // 3))
    out["equals_psi_L1"] = psiL1 == M
    # Λ / M
    solver = FullColumnSolver(Lam)
    rel = IntMatrix.from_columns([solver.solve(c) for c in M.columns()])
    q = cokernel(rel)
    out["cokernel"] = str(q)
    out["cokernel_free_rank_m_minus_1"] = q.free_rank == m - 1 and not q.torsion
    out["passed"] = all(v for k, v in out.items() if isinstance(v, bool))
    return out


def sym3_squared() -> MatGroup:
    """``Sym_3 x Sym_3`` acting on ``Q^6`` by permuting the blocks ``{1,2,3}``
    and ``{4,5,6}``."""
    gens = []
    for o in (0, 3):
        for i in (0, 1):
            p = list(range(6))
            p[o + i], p[o + i + 1] = p[o + i + 1], p[o + i]
            gens.append(permutation_matrix(p))
    return MatGroup(gens)


def lambda6_restricted() -> GLattice:
    """The weight lattice ``Λ_6`` of ``A_5`` as a ``Sym_3 x Sym_3``-lattice."""
    spec, alpha, lam = _weights_a(6)
    gens = [_num(v, 6) for v in lam]
    return lattice_from_ambient(sym3_squared(), IntMatrix.from_columns(gens), 6, name="Lambda6")
