"""Cohomology of finite matrix groups with coefficients in lattices.

Two computation paths are provided.

Baseline
    The normalized bar complex: ``n``-cochains are functions on
    ``(G \\ {1})^n`` with values in ``L``, flattened so that the tuple
    ``(g_1, ..., g_n)`` of non-identity element positions occupies the block
    starting at ``(((i_1 N' + i_2) N' + ...) + i_n) * d``.  For ``n >= 1``
    the group ``H^n`` is torsion and ``Z^n`` is saturated in ``C^n``, so
    ``H^n`` is the torsion of ``coker d_{n-1}``; only ``d_{n-1}`` is built.

Optimized (degree 2)
    ``H^2(G, L) = H^1(G, V/L)`` with ``V = L ⊗ Q``.  Every class is killed by
    ``N = |G|``, so cocycles may be taken with values in ``(1/N)L / L``.  A
    cocycle is fixed by its values ``x_j / N`` on the generators; writing
    ``f(g) = F_g x / N`` the cocycle condition is ``C x ≡ 0 (mod N)`` for a
    constraint matrix ``C`` read off the Cayley graph.  Coboundaries form
    ``Sat(Φ)`` with ``Φ`` the stacked ``A_j - 1``.  Hence
    ``H^2 = Λ / (Sat(Φ) + N Z^{kd})`` where ``Λ = {x : C x ≡ 0 mod N}``.

Restriction to a cyclic subgroup ``C = <c>`` lands in
``Ĥ^0(C, L) = L^C / N_C L``.  On a bar 2-cocycle the map is
``f ↦ Σ_{i<|C|} f(c^i, c)``; on a generator cocycle it is
``x ↦ N_C F_c x / N``.  Both equal ``N_C h(c)`` when ``f = δh`` for a
``V``-valued ``h``, so the two paths use the same isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from .groups import CapExceeded, MatGroup, Subgroup, cyclic_subgroups, elementary_abelian_subgroups
from .glattice import GLattice, fixed_sublattice, restrict
from .intlinalg import (
    FinAbGroup,
    FullColumnSolver,
    IntMatrix,
    Subquotient,
    lattice_basis,
    preimage,
    saturation,
    snf_right,
)

DEFAULT_BUDGET = 400_000


class BudgetExceeded(RuntimeError):
    def __init__(self, rows: int, cols: int, budget: int):
        super().__init__(
            f"coboundary matrix would be {rows} x {cols} ({rows * cols} entries), budget is {budget}"
        )
        self.rows = rows
        self.cols = cols
        self.budget = budget


class NotCyclic(ValueError):
    pass


class NotACocycle(ValueError):
    pass


class PathDiscrepancy(RuntimeError):
    pass


@dataclass
class CohomologyResult:
    degree: int
    group: FinAbGroup
    cocycle_reps: list = field(default_factory=list)
    path: str = "baseline"
    _reducer: object = field(default=None, repr=False)

    def reduce(self, cocycle) -> tuple[int, ...]:
        """Coordinates of the class of ``cocycle`` in the canonical generators."""
        if self._reducer is None:
            raise NotImplementedError("no reduction map for this result")
        return self._reducer(cocycle)


@dataclass
class ShaResult:
    sha: FinAbGroup
    ambient_h2: FinAbGroup
    per_cyclic: list = field(default_factory=list)
    path: str = "optimized"

    def audit(self) -> list[dict]:
        return [dict(a) for a in self.per_cyclic]


# ---------------------------------------------------------------------------
# shared set-up
# ---------------------------------------------------------------------------


class _Data:
    """Element lists, action matrices and multiplication for a lattice."""

    def __init__(self, L: GLattice):
        G = L.group
        self.G = G
        self.L = L
        self.d = L.rank
        self.els = G.elements
        self.id_idx = G.index(G.identity)
        self.acts = L.action_table()
        self.nonid = [i for i in range(len(self.els)) if i != self.id_idx]
        self.pos = {e: k for k, e in enumerate(self.nonid)}
        self._mult = None

    @property
    def mult(self):
        if self._mult is None:
            els = self.els
            idx = self.G.index
            self._mult = [[idx(a @ b) for b in els] for a in els]
        return self._mult


def _data(L: GLattice) -> _Data:
    cached = getattr(L, "_cohomology_data", None)
    if cached is None:
        cached = _Data(L)
        L._cohomology_data = cached
    return cached


# ---------------------------------------------------------------------------
# baseline: normalized bar complex
# ---------------------------------------------------------------------------


def bar_dimensions(L: GLattice, n: int) -> int:
    """Rank of the module of normalized ``n``-cochains."""
    return (L.group.order - 1) ** n * L.rank


def bar_differential(L: GLattice, n: int) -> IntMatrix:
    """Matrix of ``δ: C^n -> C^{n+1}`` on normalized cochains."""
    D = _data(L)
    d = D.d
    Np = len(D.nonid)
    mult = D.mult
    nonid = D.nonid
    pos = D.pos
    nrows = Np ** (n + 1) * d
    ncols = Np ** n * d
    rows = [[0] * ncols for _ in range(nrows)]

    def flat(t):
        k = 0
        for x in t:
            k = k * Np + x
        return k

    for t in product(range(Np), repeat=n + 1):
        r0 = flat(t) * d
        g = [nonid[x] for x in t]
        # g_1 . f(g_2, ..., g_{n+1})
        a = D.acts[g[0]].rows
        c0 = flat(t[1:]) * d
        for i in range(d):
            row = rows[r0 + i]
            for j in range(d):
                if a[i][j]:
                    row[c0 + j] += a[i][j]
        # (-1)^i f(..., g_i g_{i+1}, ...)
        for i in range(n):
            p = mult[g[i]][g[i + 1]]
            if p == D.id_idx:
                continue
            tt = t[:i] + (pos[p],) + t[i + 2:]
            c0 = flat(tt) * d
            s = -1 if (i + 1) % 2 else 1
            for k in range(d):
                rows[r0 + k][c0 + k] += s
        # (-1)^{n+1} f(g_1, ..., g_n)
        c0 = flat(t[:-1]) * d
        s = -1 if (n + 1) % 2 else 1
        for k in range(d):
            rows[r0 + k][c0 + k] += s
    return IntMatrix(rows, ncols)


def _check_budget(L: GLattice, n: int, budget: int):
    rows = bar_dimensions(L, n)
    cols = bar_dimensions(L, n - 1)
    if rows * cols > budget:
        raise BudgetExceeded(rows, cols, budget)


def h_n(L: GLattice, n: int, *, budget: int = DEFAULT_BUDGET, path: str = "baseline") -> CohomologyResult:
    """``H^n(G, L)`` for ``0 <= n <= 3`` where ``G = L.group``.

    ``path`` selects the baseline bar complex or, for ``n`` in ``{1, 2}``,
    the generator-level computation (``"optimized"``).
    """
    if not 0 <= n <= 3:
        raise ValueError("degree must be between 0 and 3")
    if n == 0:
        F = fixed_sublattice(L)
        return CohomologyResult(0, FinAbGroup(F.ncols), [F.column(i) for i in range(F.ncols)], "baseline")
    if path == "optimized" and n == 1:
        return h1_generators(L)
    if path == "optimized" and n == 2:
        return h2_optimized(L)
    if path not in ("baseline", "optimized"):
        raise ValueError(f"unknown path {path!r}")
    if L.group.order == 1 or L.rank == 0:
        return CohomologyResult(n, FinAbGroup(), [], "baseline", lambda x: ())
    _check_budget(L, n, budget)
    dm = bar_differential(L, n - 1)
    factors, V = snf_right(dm)
    reps = []
    tors = []
    for i, f in enumerate(factors):
        if f > 1:
            col = dm @ V.column(i)
            reps.append(tuple(x // f for x in col))
            tors.append(f)

    state = {}

    def reducer(x):
        if "solver" not in state:
            cols = [tuple(v // f for v in dm @ V.column(i)) for i, f in enumerate(factors)]
            state["solver"] = FullColumnSolver(IntMatrix.from_columns(cols))
        z = state["solver"].solve(tuple(x))
        if z is None:
            raise NotACocycle("cochain is not a cocycle")
        return tuple(z[i] % f for i, f in enumerate(factors) if f > 1)

    return CohomologyResult(n, FinAbGroup(0, tuple(tors)), reps, "baseline", reducer)


def is_cocycle2(L: GLattice, f: Sequence[int]) -> bool:
    """Pointwise check of the 2-cocycle identity for a normalized bar cochain."""
    D = _data(L)
    d = D.d
    Np = len(D.nonid)
    f = tuple(f)
    if len(f) != Np * Np * d:
        raise ValueError("cochain has the wrong length")

    def val(a, b):
        if a == D.id_idx or b == D.id_idx:
            return (0,) * d
        k = (D.pos[a] * Np + D.pos[b]) * d
        return f[k:k + d]

    mult = D.mult
    for a in D.nonid:
        A = D.acts[a]
        for b in D.nonid:
            ab = mult[a][b]
            for c in D.nonid:
                bc = mult[b][c]
                # a f(b,c) - f(ab,c) + f(a,bc) - f(a,b) = 0
                lhs = A @ val(b, c)
                if any(w - x + y - z for w, x, y, z in zip(lhs, val(ab, c), val(a, bc), val(a, b))):
                    return False
    return True


# ---------------------------------------------------------------------------
# generator-level cocycles
# ---------------------------------------------------------------------------


class _GeneratorCocycles:
    """``F_g`` matrices and the constraint matrix for cocycles determined by
    their values on the generators.

    ``F_g`` is ``d x (k d)`` with ``f(g) = F_g x`` where ``x`` stacks the
    values on the ``k`` generators.  Built by breadth-first search from the
    identity using ``f(s_j h) = f(s_j) + s_j f(h)``.
    """

    def __init__(self, L: GLattice):
        G = L.group
        D = _data(L)
        self.D = D
        d = L.rank
        k = len(G.generators)
        self.k = k
        kd = k * d
        gen_acts = list(L.images)
        F: dict[int, list[list[int]]] = {D.id_idx: [[0] * kd for _ in range(d)]}
        order = [D.id_idx]
        constraints: list[list[int]] = []
        frontier = [D.id_idx]
        idx = G.index
        els = D.els
        while frontier:
            nxt = []
            for h in frontier:
                Fh = F[h]
                for j, (s, A) in enumerate(zip(G.generators, gen_acts)):
                    g = idx(s @ els[h])
                    # E_j + A_j F_h
                    new = [[sum(A.rows[a][b] * Fh[b][c] for b in range(d) if A.rows[a][b]) for c in range(kd)] for a in range(d)]
                    for a in range(d):
                        new[a][j * d + a] += 1
                    if g in F:
                        old = F[g]
                        for a in range(d):
                            row = [x - y for x, y in zip(new[a], old[a])]
                            if any(row):
                                constraints.append(row)
                    else:
                        F[g] = new
                        order.append(g)
                        nxt.append(g)
            frontier = nxt
        self.F = {g: IntMatrix(m, kd) for g, m in F.items()}
        self.C = IntMatrix(constraints, kd) if constraints else IntMatrix.zeros(0, kd)
        self.Phi = IntMatrix.vstack([A - IntMatrix.identity(d) for A in gen_acts], ncols=d) if k else IntMatrix.zeros(0, d)
        self.kd = kd

    def cocycle_value(self, g_idx: int, x) -> tuple[int, ...]:
        return self.F[g_idx] @ tuple(x)


def _gencoc(L: GLattice) -> _GeneratorCocycles:
    cached = getattr(L, "_gencoc", None)
    if cached is None:
        cached = _GeneratorCocycles(L)
        L._gencoc = cached
    return cached


def h1_generators(L: GLattice) -> CohomologyResult:
    """``H^1(G, L)`` from generator-level cocycles: ``ker C / im Φ``."""
    from .intlinalg import kernel_basis

    gc = _gencoc(L)
    Z = kernel_basis(gc.C) if gc.C.nrows else IntMatrix.identity(gc.kd)
    if gc.kd == 0:
        return CohomologyResult(1, FinAbGroup(), [], "optimized", lambda x: ())
    sq = Subquotient.from_lattices(Z, gc.Phi)
    return CohomologyResult(1, sq.group, list(sq.generators), "optimized", sq.reduce)


class _OptimizedH2:
    def __init__(self, L: GLattice):
        gc = _gencoc(L)
        self.gc = gc
        self.L = L
        N = L.group.order
        self.N = N
        kd = gc.kd
        if gc.C.nrows:
            factors, V = snf_right(gc.C)
        else:
            factors, V = (), IntMatrix.identity(kd)
        scale = [N // _gcd(N, f) for f in factors] + [1] * (kd - len(factors))
        self.Lam = lattice_basis(IntMatrix([[v * s for v, s in zip(row, scale)] for row in V.rows], kd))
        satphi = saturation(gc.Phi) if gc.Phi.ncols else IntMatrix.zeros(kd, 0)
        self.B = IntMatrix.hstack([satphi, IntMatrix.identity(kd).scale(N)])
        self.sq = Subquotient.from_lattices(self.Lam, self.B)

    def bar_cocycle(self, x) -> tuple[int, ...]:
        """The normalized bar 2-cocycle ``δ(F_g x / N)`` for ``x`` in ``Λ``."""
        D = self.gc.D
        N = self.N
        vals = {g: self.gc.F[g] @ tuple(x) for g in range(len(D.els))}
        out = []
        for a in D.nonid:
            A = D.acts[a]
            for b in D.nonid:
                ab = D.mult[a][b]
                v = [p - q + r for p, q, r in zip(A @ vals[b], vals[ab], vals[a])]
                if any(t % N for t in v):
                    raise NotACocycle("vector does not define a cocycle modulo N")
                out.extend(t // N for t in v)
        return tuple(out)


def _gcd(a, b):
    from math import gcd

    return gcd(a, b)


def _optimized(L: GLattice) -> _OptimizedH2:
    cached = getattr(L, "_opt_h2", None)
    if cached is None:
        cached = _OptimizedH2(L)
        L._opt_h2 = cached
    return cached


def h2_optimized(L: GLattice) -> CohomologyResult:
    """``H^2(G, L)`` through ``H^1(G, (1/N)L/L)``.

    The stored representatives are generator vectors ``x``; use
    :func:`optimized_bar_cocycle` to turn one into a bar 2-cocycle.
    """
    if L.rank == 0 or L.group.order == 1:
        return CohomologyResult(2, FinAbGroup(), [], "optimized", lambda x: ())
    opt = _optimized(L)
    return CohomologyResult(2, opt.sq.group, list(opt.sq.generators), "optimized", opt.sq.reduce)


def optimized_bar_cocycle(L: GLattice, x) -> tuple[int, ...]:
    return _optimized(L).bar_cocycle(x)


# ---------------------------------------------------------------------------
# cyclic subgroups and Sh
# ---------------------------------------------------------------------------


def _cyclic_generator(C) -> IntMatrix:
    if isinstance(C, Subgroup):
        els = C.elements
        ident = C.parent.identity
    else:
        els = frozenset(C.elements)
        ident = C.identity
    n = len(els)
    if n == 1:
        return ident
    cands = list(C.generators) + sorted(els, key=lambda m: m.entries)
    for g in cands:
        k, x = 1, g
        while x != ident:
            x = x @ g
            k += 1
        if k == n:
            return g
    raise NotCyclic("subgroup is not cyclic")


def _powers(c: IntMatrix) -> list[IntMatrix]:
    ident = IntMatrix.identity(c.nrows)
    out = [ident]
    x = c
    while x != ident:
        out.append(x)
        x = x @ c
    return out


def _norm(L: GLattice, powers: Sequence[IntMatrix]) -> IntMatrix:
    mats = [L.action(p) for p in powers]
    out = mats[0]
    for m in mats[1:]:
        out = out + m
    return out


def _tate_h0(L: GLattice, c: IntMatrix):
    pw = _powers(c)
    A = L.action(c)
    ident = IntMatrix.identity(L.rank)
    from .intlinalg import kernel_basis

    fix = kernel_basis(A - ident)
    Nc = _norm(L, pw)
    return Subquotient.from_lattices(fix, Nc), Nc, pw


def tate_h2_cyclic(C, L: GLattice) -> FinAbGroup:
    """``Ĥ^0(C, L) = L^C / N_C L``, isomorphic to ``H^2(C, L)`` for cyclic ``C``.

    ``C`` is a cyclic :class:`Subgroup` of ``L.group`` or a cyclic
    :class:`MatGroup` acting through ``L``.
    """
    c = _cyclic_generator(C)
    if L.rank == 0:
        return FinAbGroup()
    return _tate_h0(L, c)[0].group


def restriction_h2(L: GLattice, C, class_rep, *, check: bool = True) -> tuple[int, ...]:
    """Image of a bar 2-cocycle of ``L.group`` in ``Ĥ^0(C, L)`` coordinates."""
    D = _data(L)
    c = _cyclic_generator(C)
    if check and not is_cocycle2(L, class_rep):
        raise NotACocycle("class representative is not a 2-cocycle")
    sq, _, pw = _tate_h0(L, c)
    u = _bar_restriction_vector(D, class_rep, pw)
    return sq.reduce(u)


def _bar_restriction_vector(D: _Data, f, pw) -> tuple[int, ...]:
    d = D.d
    Np = len(D.nonid)
    G = D.G
    c = pw[1] if len(pw) > 1 else pw[0]
    u = [0] * d
    if len(pw) == 1:
        return tuple(u)
    jc = D.pos[G.index(c)]
    for p in pw[1:]:
        ip = D.pos[G.index(p)]
        k = (ip * Np + jc) * d
        for t in range(d):
            u[t] += f[k + t]
    return tuple(u)


def _kernel_of_map(src_moduli, images, tgt_moduli) -> FinAbGroup:
    """Kernel of ``⊕Z/src -> ⊕Z/tgt`` with column ``j`` of ``images`` the image
    of generator ``j`` (moduli 0 mean Z)."""
    ns = len(src_moduli)
    if ns == 0:
        return FinAbGroup()
    f = IntMatrix.from_columns(images, nrows=len(tgt_moduli)) if tgt_moduli else IntMatrix.zeros(0, ns)
    rel_t = IntMatrix.diagonal(list(tgt_moduli))
    K = preimage(f, rel_t) if f.nrows else IntMatrix.identity(ns)
    return Subquotient.from_lattices(K, IntMatrix.diagonal(list(src_moduli))).group


def sha2(
    L: GLattice,
    *,
    path: str = "optimized",
    budget: int = DEFAULT_BUDGET,
    cyclics: Iterable | None = None,
) -> ShaResult:
    """``Sh^2(G, L) = ker[H^2(G, L) -> ∏_C H^2(C, L)]`` over all cyclic ``C``."""
    if path == "cross-check":
        a = sha2(L, path="optimized", budget=budget, cyclics=cyclics)
        b = sha2(L, path="baseline", budget=budget, cyclics=cyclics)
        if a.sha != b.sha or a.ambient_h2 != b.ambient_h2:
            raise PathDiscrepancy(
                f"optimized gives Sh={a.sha}, H2={a.ambient_h2}; baseline gives Sh={b.sha}, H2={b.ambient_h2}"
            )
        a.path = "cross-check"
        return a
    G = L.group
    if cyclics is None:
        cyclics = cyclic_subgroups(G)
    cyclics = list(cyclics)
    if L.rank == 0 or G.order == 1:
        return ShaResult(FinAbGroup(), FinAbGroup(), [], path)
    if path == "optimized":
        return _sha2_optimized(L, cyclics)
    if path == "baseline":
        return _sha2_baseline(L, cyclics, budget)
    raise ValueError(f"unknown path {path!r}")


def _audit_entry(c: IntMatrix, order: int, tate: FinAbGroup, image: FinAbGroup) -> dict:
    return {
        "generator": c.tolist(),
        "order": order,
        "h2_cyclic": str(tate),
        "restriction_image": str(image),
    }


def _sha2_optimized(L: GLattice, cyclics) -> ShaResult:
    opt = _optimized(L)
    gc = opt.gc
    N = opt.N
    D = gc.D
    K = opt.Lam
    audit = []
    for C in cyclics:
        c = _cyclic_generator(C)
        sq, Nc, pw = _tate_h0(L, c)
        if len(pw) == 1:
            audit.append(_audit_entry(c, 1, FinAbGroup(), FinAbGroup()))
            continue
        Mc = Nc @ gc.F[D.G.index(c)]
        target = Nc.scale(N)
        img = Subquotient.from_lattices(
            IntMatrix.hstack([Mc @ opt.Lam, target]), target
        ).group
        audit.append(_audit_entry(c, len(pw), sq.group, img))
        if K.ncols:
            K = preimage(Mc, target, within=K)
    sha = Subquotient.from_lattices(K, opt.B).group if K.ncols else FinAbGroup()
    return ShaResult(sha, opt.sq.group, audit, "optimized")


def _sha2_baseline(L: GLattice, cyclics, budget) -> ShaResult:
    H = h_n(L, 2, budget=budget, path="baseline")
    D = _data(L)
    src = H.group.torsion
    tgt_moduli: list[int] = []
    images = [[] for _ in src]
    audit = []
    for C in cyclics:
        c = _cyclic_generator(C)
        sq, _, pw = _tate_h0(L, c)
        coords = [sq.reduce(_bar_restriction_vector(D, rep, pw)) for rep in H.cocycle_reps]
        mods = sq.moduli
        img = _image_group(src, coords, mods)
        audit.append(_audit_entry(c, len(pw), sq.group, img))
        tgt_moduli.extend(mods)
        for j, v in enumerate(coords):
            images[j].extend(v)
    sha = _kernel_of_map(src, images, tgt_moduli)
    return ShaResult(sha, H.group, audit, "baseline")


def _image_group(src, coords, mods) -> FinAbGroup:
    if not mods:
        return FinAbGroup()
    cols = list(coords) + [tuple(m if i == j else 0 for j in range(len(mods))) for i, m in enumerate(mods)]
    rel = IntMatrix.diagonal(list(mods))
    num = IntMatrix.from_columns(cols, nrows=len(mods))
    return Subquotient.from_lattices(num, rel).group


# ---------------------------------------------------------------------------
# obstruction search
# ---------------------------------------------------------------------------


@dataclass
class SearchResult:
    subgroup: Subgroup | None
    sha: ShaResult | None
    budget_exhausted: bool
    inspected: list = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.subgroup is not None


def sha_obstruction_search(
    W: MatGroup,
    L: GLattice,
    primes: Sequence[int] = (2, 3),
    budget: int = 200,
    path: str = "optimized",
) -> SearchResult:
    """Search the subgroups ``(Z/p)^2`` of ``W`` for one with ``Sh^2 != 0``.

    Subgroups are visited prime by prime in the deterministic order of
    :func:`elementary_abelian_subgroups`, one per ``W``-conjugacy class.  ``budget`` caps the number of
    subgroups inspected.  Finding nothing proves nothing.
    """
    inspected = []
    try:
        W.elements
    except CapExceeded:
        return SearchResult(None, None, True, inspected)
    for p in primes:
        seen: set = set()
        for S in elementary_abelian_subgroups(W, p, 2):
            if S.elements in seen:
                continue
            # Sh is constant on W-conjugacy classes of subgroups
            _conjugacy_orbit(W, S.elements, seen)
            if len(inspected) >= budget:
                return SearchResult(None, None, True, inspected)
            res = sha2(restrict(L, S), path=path)
            inspected.append({"prime": p, "generators": [g.tolist() for g in S.generators], "sha": str(res.sha)})
            if not res.sha.is_trivial():
                return SearchResult(S, res, False, inspected)
    return SearchResult(None, None, False, inspected)


def _conjugacy_orbit(W: MatGroup, elements: frozenset, seen: set):
    inv = [_inverse_in(W, g) for g in W.generators]
    frontier = [elements]
    seen.add(elements)
    while frontier:
        nxt = []
        for E in frontier:
            for g, gi in zip(W.generators, inv):
                F = frozenset(g @ x @ gi for x in E)
                if F not in seen:
                    seen.add(F)
                    nxt.append(F)
        frontier = nxt


def _inverse_in(W: MatGroup, g: IntMatrix) -> IntMatrix:
    x = g
    while True:
        y = x @ g
        if y == W.identity:
            return x
        x = y
