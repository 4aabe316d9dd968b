"""Lattices with an action of a finite matrix group.

A :class:`GLattice` is ``Z^rank`` together with the matrices by which the
generators of its group act.  Optionally it remembers an *ambient
embedding*: a basis matrix ``B`` (``N x rank``) and a denominator ``d`` such
that the lattice is ``B Z^rank / d`` inside ``Q^N``, where ``N`` is the degree
of the group and the group acts on ``Q^N`` by its own matrices.  With an
ambient the action of any group element is recovered by solving
``B y = g B x``; without one, a table over the materialized group is built
from the generator images.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .groups import MatGroup, Subgroup
from .intlinalg import (
    FullColumnSolver,
    IntMatrix,
    as_matrix,
    hnf,
    kernel_basis,
    lattice_basis,
    rank as matrix_rank,
)


class LatticeError(ValueError):
    pass


class NonHomomorphism(LatticeError):
    pass


class NotStable(LatticeError):
    def __init__(self, generator_index: int, message: str = ""):
        super().__init__(message or f"span is not stable under generator {generator_index}")
        self.generator_index = generator_index


class NotIndependent(LatticeError):
    pass


class NoAmbient(LatticeError):
    pass


class NotEquivariant(LatticeError):
    pass


class GLattice:
    def __init__(
        self,
        group: MatGroup,
        images: Sequence,
        rank: int | None = None,
        ambient: tuple[IntMatrix, int] | None = None,
        name: str = "",
    ):
        images = [as_matrix(a) for a in images]
        if len(images) != len(group.generators):
            raise LatticeError("one image per group generator is required")
        if rank is None:
            if not images:
                raise LatticeError("rank required when the group has no generators")
            rank = images[0].nrows
        for a in images:
            if a.shape != (rank, rank):
                raise LatticeError("image matrices must be rank x rank")
            if abs(a.det()) != 1:
                raise LatticeError("image matrices must be unimodular")
        self.group = group
        self.rank = rank
        self.images = tuple(images)
        self.name = name
        if ambient is not None:
            basis, denom = ambient
            basis = as_matrix(basis)
            if basis.shape != (group.degree, rank):
                raise LatticeError("ambient basis must be degree x rank")
            if matrix_rank(basis) != rank:
                raise NotIndependent("ambient basis columns are dependent")
            ambient = (basis, int(denom))
        self.ambient = ambient
        self._table: dict[IntMatrix, IntMatrix] | None = None
        self._solver = None

    def __repr__(self):
        tag = f" {self.name}" if self.name else ""
        return f"GLattice({tag.strip() or 'rank'}={self.rank}, group degree={self.group.degree})"

    # action ------------------------------------------------------------------

    def _ambient_solver(self):
        if self._solver is None:
            self._solver = FullColumnSolver(self.ambient[0])
        return self._solver

    def _ambient_action(self, g: IntMatrix) -> IntMatrix:
        basis = self.ambient[0]
        gb = g @ basis
        solver = self._ambient_solver()
        cols = []
        for c in gb.columns():
            y = solver.solve(c)
            if y is None:
                raise NotStable(-1, "ambient lattice is not stable under a group element")
            cols.append(y)
        return IntMatrix.from_columns(cols, nrows=self.rank) if cols else IntMatrix.zeros(0, 0)

    def _build_table(self):
        G = self.group
        ident = G.identity
        table = {ident: IntMatrix.identity(self.rank)}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                ax = table[x]
                for g, a in zip(G.generators, self.images):
                    y = g @ x
                    ay = a @ ax
                    old = table.get(y)
                    if old is None:
                        table[y] = ay
                        nxt.append(y)
                    elif old != ay:
                        raise NonHomomorphism("generator images do not define a homomorphism")
            frontier = nxt
        self._table = table

    def action(self, g) -> IntMatrix:
        g = as_matrix(g)
        if self.ambient is not None:
            return self._ambient_action(g)
        if self._table is None:
            self._build_table()
        try:
            return self._table[g]
        except KeyError:
            raise LatticeError("element is not in the group") from None

    def check_homomorphism(self) -> bool:
        """Exact check over the whole group (materializes it)."""
        if self.ambient is not None:
            for g, a in zip(self.group.generators, self.images):
                if self._ambient_action(g) != a:
                    raise NonHomomorphism("generator image disagrees with the ambient action")
            return True
        self._table = None
        self._build_table()
        return True

    def action_table(self) -> list[IntMatrix]:
        """Action matrices of ``group.elements`` in order."""
        if self.ambient is None:
            if self._table is None:
                self._build_table()
            return [self._table[g] for g in self.group.elements]
        return [self.action(g) for g in self.group.elements]

    # serialization -----------------------------------------------------------

    def to_dict(self) -> dict:
        out = {
            "degree": self.group.degree,
            "rank": self.rank,
            "generators": [g.tolist() for g in self.group.generators],
            "images": [a.tolist() for a in self.images],
        }
        if self.ambient is not None:
            out["ambient"] = {"basis": self.ambient[0].tolist(), "denominator": self.ambient[1]}
        return out

    @classmethod
    def from_dict(cls, data: dict, order_cap: int | None = None) -> GLattice:
        degree = int(data["degree"])
        kw = {} if order_cap is None else {"order_cap": order_cap}
        group = MatGroup([IntMatrix(g) for g in data["generators"]], degree=degree, **kw)
        amb = data.get("ambient")
        ambient = None
        if amb is not None:
            basis = amb["basis"]
            ambient = (IntMatrix(basis, ncols=int(data["rank"])), int(amb.get("denominator", 1)))
        return cls(group, [IntMatrix(a) for a in data["images"]], rank=int(data["rank"]), ambient=ambient)


def _identity_phi(g):
    return g


class LatticeHom:
    """A linear map ``source -> target`` with ``matrix @ A_src(g) == A_tgt(phi(g)) @ matrix``.

    ``phi`` maps elements of the source group to elements of the target group;
    it defaults to the identity (both lattices over the same group).
    """

    def __init__(self, source: GLattice, target: GLattice, matrix, phi: Callable | None = None):
        self.source = source
        self.target = target
        self.matrix = as_matrix(matrix)
        self.phi = phi or _identity_phi
        if self.matrix.shape != (target.rank, source.rank):
            raise LatticeError("hom matrix has the wrong shape")
        for i, (g, a) in enumerate(zip(source.group.generators, source.images)):
            lhs = self.matrix @ a
            rhs = target.action(self.phi(g)) @ self.matrix
            if lhs != rhs:
                raise NotEquivariant(f"not equivariant at generator {i}")

    def is_isomorphism(self) -> bool:
        return self.matrix.nrows == self.matrix.ncols and abs(self.matrix.det()) == 1


# constructors --------------------------------------------------------------


def permutation_lattice(G: MatGroup, perms: Sequence[Sequence[int]]) -> GLattice:
    """Permutation lattice from 0-based images ``perms[j][i]`` of point ``i``
    under generator ``j``."""
    from .groups import permutation_matrix

    mats = []
    for p in perms:
        if sorted(p) != list(range(len(p))):
            raise LatticeError("generator image is not a permutation")
        mats.append(permutation_matrix(p))
    n = len(perms[0]) if perms else 0
    L = GLattice(G, mats, rank=n)
    L.check_homomorphism()
    return L


def regular_lattice(G: MatGroup) -> GLattice:
    """``Z[G]`` with basis ``e_g`` in the element order of ``G``."""
    els = G.elements
    perms = [[G.index(s @ x) for x in els] for s in G.generators]
    return GLattice(G, [_perm(p) for p in perms], rank=len(els))


def _perm(p):
    from .groups import permutation_matrix

    return permutation_matrix(p)


def trivial_lattice(G: MatGroup, rank: int = 1) -> GLattice:
    return GLattice(G, [IntMatrix.identity(rank) for _ in G.generators], rank=rank)


def natural_lattice(G: MatGroup) -> GLattice:
    """``Z^degree`` with the defining action, ambient the identity."""
    n = G.degree
    return GLattice(G, G.generators, rank=n, ambient=(IntMatrix.identity(n), 1))


def j_gamma(G: MatGroup) -> GLattice:
    """``J_G = Z[G] / Z·N`` with basis the images of ``e_g`` for ``g != 1``.

    In that basis ``e_1 = -Σ_{g≠1} e_g``.
    """
    els = [g for g in G.elements if g != G.identity]
    pos = {g: i for i, g in enumerate(els)}
    r = len(els)
    mats = []
    for s in G.generators:
        cols = []
        for g in els:
            h = s @ g
            if h == G.identity:
                cols.append([-1] * r)
            else:
                c = [0] * r
                c[pos[h]] = 1
                cols.append(c)
        mats.append(IntMatrix.from_columns(cols, nrows=r) if cols else IntMatrix.zeros(0, 0))
    return GLattice(G, mats, rank=r, name="J")


def j_gamma_quotient_map(G: MatGroup) -> IntMatrix:
    """Matrix of ``Z[G] -> J_G`` in the bases used by :func:`regular_lattice`
    and :func:`j_gamma`."""
    els = G.elements
    others = [g for g in els if g != G.identity]
    pos = {g: i for i, g in enumerate(others)}
    r = len(others)
    cols = []
    for g in els:
        if g == G.identity:
            cols.append([-1] * r)
        else:
            c = [0] * r
            c[pos[g]] = 1
            cols.append(c)
    return IntMatrix.from_columns(cols, nrows=r)


def direct_sum(L1: GLattice, L2: GLattice) -> GLattice:
    if L1.group is not L2.group:
        raise LatticeError("direct sum needs lattices over the same group")
    imgs = [IntMatrix.block_diagonal([a, b]) for a, b in zip(L1.images, L2.images)]
    return GLattice(L1.group, imgs, rank=L1.rank + L2.rank)


def restrict(L: GLattice, H) -> GLattice:
    """Restriction to a subgroup.

    ``H`` is a :class:`Subgroup` of ``L.group`` or a :class:`MatGroup` of the
    same degree whose elements lie in ``L.group``.  With an ambient the parent
    group is never enumerated.
    """
    if isinstance(H, Subgroup):
        Hg = H.as_group()
    else:
        Hg = H
    if Hg.degree != L.group.degree:
        raise LatticeError("subgroup has the wrong degree")
    imgs = [L.action(h) for h in Hg.generators]
    return GLattice(Hg, imgs, rank=L.rank, ambient=L.ambient)


def diagonal_power(L: GLattice, m: int) -> GLattice:
    imgs = [IntMatrix.block_diagonal([a] * m) for a in L.images]
    return GLattice(L.group, imgs, rank=L.rank * m)


def fixed_sublattice(L: GLattice, H=None) -> IntMatrix:
    """Saturated basis (columns) of ``L^H``; ``H`` defaults to the whole group."""
    if H is None:
        mats = list(L.images)
    elif isinstance(H, Subgroup):
        mats = [L.action(h) for h in (H.generators or ())]
    else:
        mats = [L.action(h) for h in H.generators]
    if not mats:
        return IntMatrix.identity(L.rank)
    ident = IntMatrix.identity(L.rank)
    stacked = IntMatrix.vstack([a - ident for a in mats])
    return kernel_basis(stacked)


def sublattice_with_action(L: GLattice, basis) -> tuple[GLattice, LatticeHom]:
    """The sublattice spanned by the columns of ``basis`` with its own action,
    and the inclusion hom into ``L``."""
    basis = as_matrix(basis)
    if basis.nrows != L.rank:
        raise LatticeError("basis vectors have the wrong length")
    if matrix_rank(basis) != basis.ncols:
        raise NotIndependent("basis columns are linearly dependent")
    k = basis.ncols
    imgs = []
    if k:
        solver = FullColumnSolver(basis)
        for i, a in enumerate(L.images):
            cols = []
            for c in (a @ basis).columns():
                y = solver.solve(c)
                if y is None:
                    raise NotStable(i)
                cols.append(y)
            imgs.append(IntMatrix.from_columns(cols, nrows=k))
    else:
        imgs = [IntMatrix.zeros(0, 0) for _ in L.images]
    ambient = None
    if L.ambient is not None:
        ambient = (L.ambient[0] @ basis, L.ambient[1])
    sub = GLattice(L.group, imgs, rank=k, ambient=ambient)
    return sub, LatticeHom(sub, L, basis)


def lattice_from_ambient(G: MatGroup, generators, denom: int = 1, name: str = "") -> GLattice:
    """The lattice ``span(generators) / denom`` in ``Q^degree`` with the natural
    action; raises :class:`NotStable` when the span is not ``G``-stable."""
    gens = as_matrix(generators)
    basis = lattice_basis(gens)
    solver = FullColumnSolver(basis)
    imgs = []
    for i, g in enumerate(G.generators):
        cols = []
        for c in (g @ basis).columns():
            y = solver.solve(c)
            if y is None:
                raise NotStable(i)
            cols.append(y)
        imgs.append(IntMatrix.from_columns(cols, nrows=basis.ncols))
    return GLattice(G, imgs, rank=basis.ncols, ambient=(basis, denom), name=name)


def intersection_with_coordinate_block(L: GLattice, coords: Iterable[int]) -> IntMatrix:
    """Basis, in the coordinates of ``L``, of ``L ∩ V_I`` where ``V_I`` is the
    span of the ambient coordinates in ``coords`` (0-based).  The result is in
    Hermite form and saturated in ``L``."""
    if L.ambient is None:
        raise NoAmbient("coordinate-block intersection needs an ambient embedding")
    B = L.ambient[0]
    keep = set(coords)
    outside = [i for i in range(B.nrows) if i not in keep]
    if not outside:
        return IntMatrix.identity(L.rank)
    K = kernel_basis(B.select_rows(outside))
    if K.ncols == 0:
        return K
    return hnf(K.T).T


def ambient_span(L: GLattice) -> tuple[IntMatrix, int]:
    """Canonical (Hermite) basis of the ambient image and its denominator."""
    if L.ambient is None:
        raise NoAmbient("lattice has no ambient embedding")
    B, d = L.ambient
    return lattice_basis(B), d


def same_ambient_lattice(L1: GLattice, L2: GLattice) -> bool:
    B1, d1 = ambient_span(L1)
    B2, d2 = ambient_span(L2)
    return lattice_basis(B1.scale(d2)) == lattice_basis(B2.scale(d1))


def ambient_index(sub: GLattice, sup: GLattice) -> int:
    """Index ``[sup : sub]`` of two full-rank lattices in the same ambient."""
    B1, d1 = ambient_span(sub)
    B2, d2 = ambient_span(sup)
    if B1.ncols != B2.ncols:
        raise LatticeError("lattices of different rank")
    # express sub in sup coordinates
    solver = FullColumnSolver(B2.scale(d1))
    cols = []
    for c in B1.scale(d2).columns():
        y = solver.solve(c)
        if y is None:
            raise LatticeError("first lattice is not contained in the second")
        cols.append(y)
    return abs(IntMatrix.from_columns(cols).det())
