"""Root data for the classical types and G2 in Bourbaki coordinates.

Vectors are stored as integer numerators over a family-wide denominator:
``n`` for ``A_{n-1}`` (the hyperplane ``Σx = 0`` in ``Q^n``), 2 for ``B`` and
``D``, 1 for ``C`` and ``G2``.  The Weyl group acts on the ambient ``Q^N``
by the integer matrices of its simple reflections.

The quotient map ``λ: P -> P/Q`` is fixed by its values on the fundamental
weights (``coordinates_of_weights``); any weight is first written in the
fundamental-weight basis through the coroot pairings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .glattice import GLattice, lattice_from_ambient
from .groups import MatGroup
from .intlinalg import FinAbGroup, IntMatrix, Subquotient, lattice_basis, preimage

FAMILIES = ("A", "B", "C", "D", "G2")
EXCEPTIONAL = ("E6", "E7", "E8", "F4")


class RootDataError(ValueError):
    pass


class InvalidSpec(RootDataError):
    pass


class WrongFamily(RootDataError):
    pass


class InvalidGenerators(RootDataError):
    pass


@dataclass(frozen=True)
class RootSystemSpec:
    """``family`` in ``A, B, C, D, G2`` and the Lie rank (``A_l`` has rank ``l``)."""

    family: str
    rank: int

    def __post_init__(self):
        f = self.family.upper()
        if f == "G":
            f = "G2"
        object.__setattr__(self, "family", f)
        if f not in FAMILIES:
            raise InvalidSpec(f"unsupported family {self.family!r}")
        r = self.rank
        if f == "G2":
            if r not in (2,):
                raise InvalidSpec("G2 has rank 2")
        elif f == "D":
            if r < 3:
                raise InvalidSpec("type D needs rank >= 3")
        elif r < 1:
            raise InvalidSpec("rank must be positive")

    @property
    def label(self) -> str:
        return "G2" if self.family == "G2" else f"{self.family}{self.rank}"

    @property
    def ambient_dim(self) -> int:
        if self.family == "A":
            return self.rank + 1
        if self.family == "G2":
            return 3
        return self.rank

    @property
    def denominator(self) -> int:
        return {"A": self.rank + 1, "B": 2, "C": 1, "D": 2, "G2": 1}[self.family]


def _vec(n, d, entries):
    """Numerator vector of a rational vector with denominator ``d``."""
    out = []
    for x in entries:
        y = Fraction(x) * d
        if y.denominator != 1:
            raise RootDataError("vector not representable over the denominator")
        out.append(int(y))
    return tuple(out)


def simple_roots(spec: RootSystemSpec) -> list[tuple[Fraction, ...]]:
    f, l, N = spec.family, spec.rank, spec.ambient_dim

    def e(i):
        return [Fraction(int(j == i)) for j in range(N)]

    def add(a, b, s=1):
        return [x + s * y for x, y in zip(a, b)]

    if f == "G2":
        return [tuple(map(Fraction, (1, -1, 0))), tuple(map(Fraction, (-2, 1, 1)))]
    roots = [add(e(i), e(i + 1), -1) for i in range(l - 1)] if f != "A" else [add(e(i), e(i + 1), -1) for i in range(l)]
    if f == "B":
        roots.append(e(l - 1))
    elif f == "C":
        roots.append([2 * x for x in e(l - 1)])
    elif f == "D":
        roots.append(add(e(l - 2), e(l - 1)))
    return [tuple(r) for r in roots]


def fundamental_weights(spec: RootSystemSpec) -> list[tuple[Fraction, ...]]:
    f, l, N = spec.family, spec.rank, spec.ambient_dim
    half = Fraction(1, 2)
    if f == "A":
        n = l + 1
        return [tuple(Fraction(int(j < i)) - Fraction(i, n) for j in range(n)) for i in range(1, l + 1)]
    if f == "G2":
        a1, a2 = simple_roots(spec)
        return [tuple(2 * x + y for x, y in zip(a1, a2)), tuple(3 * x + 2 * y for x, y in zip(a1, a2))]
    out = [tuple(Fraction(int(j < i)) for j in range(N)) for i in range(1, l + 1)]
    if f == "B":
        out[l - 1] = tuple(half for _ in range(N))
    elif f == "D":
        out[l - 2] = tuple(half if j < l - 1 else -half for j in range(N))
        out[l - 1] = tuple(half for _ in range(N))
    return out


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def reflection_matrix(alpha) -> IntMatrix:
    n = len(alpha)
    aa = _dot(alpha, alpha)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            # s(e_j) = e_j - 2 <e_j, a>/<a, a> a
            v = Fraction(int(i == j)) - 2 * alpha[j] / aa * alpha[i]
            if v.denominator != 1:
                raise RootDataError("reflection is not integral on the ambient lattice")
            row.append(int(v))
        rows.append(row)
    return IntMatrix(rows, n)


def weyl_generators(spec: RootSystemSpec) -> list[IntMatrix]:
    """Simple reflections as integer matrices on ``Q^N``.

    For G2 the second reflection is replaced by ``-(2 3)``, which agrees
    with it on the plane ``Σx = 0`` and is integral on ``Z^3``.
    """
    roots = simple_roots(spec)
    if spec.family == "G2":
        return [
            IntMatrix([[0, 1, 0], [1, 0, 0], [0, 0, 1]]),
            IntMatrix([[-1, 0, 0], [0, 0, -1], [0, -1, 0]]),
        ]
    return [reflection_matrix(a) for a in roots]


def weyl_order(spec: RootSystemSpec) -> int:
    from math import factorial

    f, l = spec.family, spec.rank
    if f == "A":
        return factorial(l + 1)
    if f in ("B", "C"):
        return 2**l * factorial(l)
    if f == "D":
        return 2 ** (l - 1) * factorial(l)
    return 12


def weyl_group(spec: RootSystemSpec, **kw) -> MatGroup:
    return MatGroup(weyl_generators(spec), **kw)


def weyl_power(spec: RootSystemSpec, m: int, **kw) -> MatGroup:
    """``W^m`` acting blockwise on ``(Q^N)^m``; generators are the simple
    reflections placed in each block."""
    gens = weyl_generators(spec)
    N = spec.ambient_dim
    ident = IntMatrix.identity(N)
    out = []
    for i in range(m):
        for g in gens:
            out.append(IntMatrix.block_diagonal([g if j == i else ident for j in range(m)]))
    return MatGroup(out, degree=N * m, **kw)


def weyl_diagonal(spec: RootSystemSpec, m: int, **kw) -> MatGroup:
    """``W`` acting diagonally on ``(Q^N)^m``."""
    return MatGroup([IntMatrix.block_diagonal([g] * m) for g in weyl_generators(spec)], degree=spec.ambient_dim * m, **kw)


# ---------------------------------------------------------------------------
# P/Q
# ---------------------------------------------------------------------------


def quotient_group(spec: RootSystemSpec) -> FinAbGroup:
    f, l = spec.family, spec.rank
    if f == "A":
        return FinAbGroup.cyclic(l + 1)
    if f in ("B", "C"):
        return FinAbGroup(0, (2,))
    if f == "D":
        return FinAbGroup(0, (4,)) if l % 2 else FinAbGroup(0, (2, 2))
    return FinAbGroup()


def coordinates_of_weights(spec: RootSystemSpec) -> list[tuple[int, ...]]:
    """Image of each fundamental weight in ``P/Q`` in the fixed coordinates.

    A: ``ω_i ↦ i`` in ``Z/n`` (generator ``ω̄_1``); B: only ``ω_l ↦ 1``;
    C: ``ω_i ↦ i mod 2``; D odd: ``Z/4`` generated by ``ω̄_l``, with
    ``ω̄_1 = 2``, ``ω̄_{l-1} = 3``; D even: basis ``(ω̄_{l-1}, ω̄_l)`` of
    ``(Z/2)^2`` with ``ω̄_1 = (1, 1)``.
    """
    f, l = spec.family, spec.rank
    if f == "A":
        return [(i % (l + 1),) for i in range(1, l + 1)]
    if f == "B":
        return [(0,)] * (l - 1) + [(1,)]
    if f == "C":
        return [(i % 2,) for i in range(1, l + 1)]
    if f == "D":
        if l % 2:
            return [((2 * i) % 4,) for i in range(1, l - 1)] + [(3,), (1,)]
        return [(i % 2, i % 2) for i in range(1, l - 1)] + [(1, 0), (0, 1)]
    return [(), ()]


def _coroot_pairings(spec: RootSystemSpec, v) -> tuple[int, ...]:
    out = []
    for a in simple_roots(spec):
        c = 2 * _dot(v, a) / _dot(a, a)
        if c.denominator != 1:
            raise RootDataError("vector is not in the weight lattice")
        out.append(int(c))
    return tuple(out)


def weight_coordinates(spec: RootSystemSpec, v) -> tuple[int, ...]:
    """Coordinates of a weight in the fundamental-weight basis."""
    return _coroot_pairings(spec, [Fraction(x) for x in v])


def lam(spec: RootSystemSpec, v) -> tuple[int, ...]:
    """``λ(v)`` in ``P/Q`` coordinates for a weight ``v`` (rational entries)."""
    G = quotient_group(spec)
    table = coordinates_of_weights(spec)
    c = weight_coordinates(spec, v)
    out = [0] * len(G.torsion)
    for ci, img in zip(c, table):
        for k, x in enumerate(img):
            out[k] += ci * x
    return tuple(x % m for x, m in zip(out, G.torsion))


# ---------------------------------------------------------------------------
# lattices
# ---------------------------------------------------------------------------


@dataclass
class RootDatumLattices:
    spec: RootSystemSpec
    weyl: MatGroup
    Q: GLattice
    P: GLattice
    quotient: FinAbGroup
    weight_images: list
    generator_lifts: list
    intermediates: list = field(default_factory=list)
    roots: list = field(default_factory=list)
    weights: list = field(default_factory=list)


def _numerators(spec, vecs) -> IntMatrix:
    d = spec.denominator
    return IntMatrix.from_columns([_vec(spec.ambient_dim, d, v) for v in vecs], nrows=spec.ambient_dim)


def subgroups_of(G: FinAbGroup) -> list[tuple[tuple[int, ...], ...]]:
    """All subgroups of a finite ``P/Q`` (cyclic or ``(Z/2)^2``) by generators."""
    t = G.torsion
    if not t:
        return [()]
    if len(t) == 1:
        n = t[0]
        return [tuple() if d == n else ((d,),) for d in sorted((d for d in range(1, n + 1) if n % d == 0), reverse=True)]
    if t == (2, 2):
        return [(), ((1, 0),), ((0, 1),), ((1, 1),), ((1, 0), (0, 1))]
    raise RootDataError("unexpected quotient")


def _pms_basis(spec: RootSystemSpec, m: int, S_gens) -> IntMatrix:
    """Numerator basis (columns) of ``P^m_S`` in ``(Q^N)^m``."""
    G = quotient_group(spec)
    mods = list(G.torsion)
    k = len(mods)
    l = spec.rank
    W = _numerators(spec, fundamental_weights(spec))
    table = coordinates_of_weights(spec)
    # λ^m on the fundamental-weight basis of P^m
    lam_rows = []
    for i in range(m):
        for t in range(k):
            row = [0] * (m * l)
            for j in range(l):
                row[i * l + j] = table[j][t]
            lam_rows.append(row)
    Pm = IntMatrix.block_diagonal([W] * m)
    if k == 0:
        return lattice_basis(Pm)
    lam_mat = IntMatrix(lam_rows, m * l)
    gens = [tuple(g) for g in S_gens]
    for g in gens:
        if len(g) != m * k:
            raise InvalidGenerators(f"generator {list(g)} must have {m * k} entries")
    rel = IntMatrix.diagonal(mods * m)
    target = IntMatrix.hstack([IntMatrix.from_columns(gens, nrows=m * k), rel]) if gens else rel
    K = preimage(lam_mat, target)
    return lattice_basis(Pm @ K)


def lattice_in_ambient(G: MatGroup, spec: RootSystemSpec, basis: IntMatrix, name: str = "") -> GLattice:
    return lattice_from_ambient(G, basis, spec.denominator, name=name)


@lru_cache(maxsize=None)
def root_datum(spec: RootSystemSpec) -> RootDatumLattices:
    W = weyl_group(spec)
    roots = simple_roots(spec)
    weights = fundamental_weights(spec)
    Qb = _numerators(spec, roots)
    Q = lattice_from_ambient(W, Qb, spec.denominator, name=f"Q({spec.label})")
    P = lattice_from_ambient(W, _numerators(spec, weights), spec.denominator, name=f"P({spec.label})")
    G = quotient_group(spec)
    table = coordinates_of_weights(spec)
    lifts = []
    for t in range(len(G.torsion)):
        unit = tuple(int(s == t) for s in range(len(G.torsion)))
        j = next(j for j, img in enumerate(table) if img == unit)
        lifts.append(weights[j])
    inter = []
    for sub in subgroups_of(G):
        L = lattice_from_ambient(W, _pms_basis(spec, 1, sub), spec.denominator)
        order = _subgroup_order(G, sub)
        proper = 1 < order < (G.order or 1)
        inter.append({"subgroup": sub, "order": order, "proper": proper, "lattice": L})
    return RootDatumLattices(spec, W, Q, P, G, table, lifts, inter, roots, weights)


def _subgroup_order(G: FinAbGroup, gens) -> int:
    if not G.torsion:
        return 1
    mods = list(G.torsion)
    cols = [tuple(g) for g in gens] + [tuple(m if i == j else 0 for j in range(len(mods))) for i, m in enumerate(mods)]
    sq = Subquotient.from_lattices(IntMatrix.from_columns(cols, nrows=len(mods)), IntMatrix.diagonal(mods))
    return sq.group.order


@dataclass
class SOCharacter:
    lattice: GLattice
    subgroup: tuple
    triality_ambiguous: bool


def so_character_lattice(spec: RootSystemSpec) -> SOCharacter:
    """Character lattice ``M`` of ``SO``: ``Q`` for ``B``, ``Z^l`` for ``D``."""
    if spec.family == "B":
        rd = root_datum(spec)
        return SOCharacter(rd.Q, (), False)
    if spec.family != "D":
        raise WrongFamily("SO character lattices exist for types B and D only")
    sub = (so_vector_class(spec),)
    W = weyl_group(spec)
    L = lattice_from_ambient(W, _pms_basis(spec, 1, sub), spec.denominator, name=f"M({spec.label})")
    return SOCharacter(L, sub, spec.rank == 4)


def so_vector_class(spec: RootSystemSpec) -> tuple[int, ...]:
    """Class of ``ω_1`` (the vector representation) in ``P/Q``."""
    return coordinates_of_weights(spec)[0]


def character_lattice_pms(spec: RootSystemSpec, m: int, S_gens, action: str = "product", **kw) -> GLattice:
    """``P^m_S``: preimage of ``S ⊆ (P/Q)^m`` under ``λ^m``.

    ``S_gens`` lists generators, each a vector of ``m * k`` integers
    (``k`` = number of invariant factors of ``P/Q``).  ``action`` is
    ``"product"`` for ``W^m`` or ``"diagonal"`` for ``W``.
    """
    basis = _pms_basis(spec, m, S_gens)
    if action == "product":
        G = weyl_power(spec, m, **kw)
    elif action == "diagonal":
        G = weyl_diagonal(spec, m, **kw)
    else:
        raise ValueError("action must be 'product' or 'diagonal'")
    return lattice_from_ambient(G, basis, spec.denominator, name=f"P^{m}_S({spec.label})")


def center_annihilator(spec: RootSystemSpec, m: int, C_gens) -> list[tuple[int, ...]]:
    """Annihilator ``S ⊆ (P/Q)^m`` of ``C ⊆ Z(H)^m``.

    ``Z(H)`` is identified with a group of the same shape as ``P/Q`` and
    paired with it by ``<s, c> = Σ_j s_j c_j / d_j  (mod 1)`` where ``d_j``
    runs over the invariant factors, repeated ``m`` times.
    Returns generators of ``S`` reduced modulo the invariant factors.
    """
    G = quotient_group(spec)
    mods = list(G.torsion) * m
    if not mods:
        if any(any(c) for c in C_gens):
            raise InvalidGenerators("the center is trivial")
        return []
    e = max(mods)
    rows = []
    for c in C_gens:
        c = tuple(c)
        if len(c) != len(mods):
            raise InvalidGenerators(f"generator {list(c)} must have {len(mods)} entries")
        rows.append([cj * (e // dj) for cj, dj in zip(c, mods)])
    n = len(mods)
    if not rows:
        K = IntMatrix.identity(n)
    else:
        R = IntMatrix(rows, n)
        K = preimage(R, IntMatrix.identity(len(rows)).scale(e))
    cols = lattice_basis(IntMatrix.hstack([K, IntMatrix.diagonal(mods)]))
    out = []
    for col in cols.columns():
        v = tuple(x % d for x, d in zip(col, mods))
        if any(v):
            out.append(v)
    return sorted(set(out))


def subgroup_order(spec: RootSystemSpec, m: int, gens) -> int:
    G = quotient_group(spec)
    mods = list(G.torsion) * m
    if not mods:
        return 1
    cols = [tuple(g) for g in gens] + [tuple(d if i == j else 0 for j in range(len(mods))) for i, d in enumerate(mods)]
    return Subquotient.from_lattices(IntMatrix.from_columns(cols, nrows=len(mods)), IntMatrix.diagonal(mods)).group.order


def golden_record(spec: RootSystemSpec) -> dict:
    """Regression record: simple roots, fundamental weights (as strings),
    Weyl generator matrices and the ``P/Q`` images."""
    return {
        "label": spec.label,
        "simple_roots": [[str(x) for x in v] for v in simple_roots(spec)],
        "fundamental_weights": [[str(x) for x in v] for v in fundamental_weights(spec)],
        "weyl_generators": [g.tolist() for g in weyl_generators(spec)],
        "quotient": list(quotient_group(spec).torsion),
        "weight_images": [list(x) for x in coordinates_of_weights(spec)],
    }
