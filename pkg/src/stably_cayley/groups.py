"""Finite groups of invertible integer matrices.

A :class:`MatGroup` is stored by generators; the element list is produced on
first use by breadth-first closure and is sorted lexicographically on matrix
entries, so every enumeration below is deterministic.
"""

from __future__ import annotations

import threading
from itertools import combinations
from typing import Iterable, Sequence

from .intlinalg import IntMatrix, as_matrix

DEFAULT_ORDER_CAP = 20_000


class CapExceeded(RuntimeError):
    def __init__(self, cap: int):
        super().__init__(f"group closure exceeded the order cap of {cap}")
        self.cap = cap


class MatGroup:
    def __init__(self, generators: Iterable, order_cap: int = DEFAULT_ORDER_CAP, degree: int | None = None):
        gens = [as_matrix(g) for g in generators]
        if degree is None:
            if not gens:
                raise ValueError("degree required for a group without generators")
            degree = gens[0].nrows
        for g in gens:
            if g.shape != (degree, degree):
                raise ValueError("generators must be square of the same degree")
            if abs(g.det()) != 1:
                raise ValueError("generators must be invertible over Z")
        self.degree = degree
        self.generators = tuple(gens)
        self.order_cap = order_cap
        self.identity = IntMatrix.identity(degree)
        self._elements: tuple[IntMatrix, ...] | None = None
        self._index: dict[IntMatrix, int] | None = None
        self._lock = threading.Lock()

    def __repr__(self):
        return f"MatGroup(degree={self.degree}, generators={len(self.generators)})"

    def _materialize(self):
        with self._lock:
            if self._elements is not None:
                return
            seen = {self.identity}
            frontier = [self.identity]
            while frontier:
                nxt = []
                for x in frontier:
                    for g in self.generators:
                        y = g @ x
                        if y not in seen:
                            seen.add(y)
                            if len(seen) > self.order_cap:
                                raise CapExceeded(self.order_cap)
                            nxt.append(y)
                frontier = nxt
            elems = tuple(sorted(seen, key=lambda m: m.entries))
            self._index = {e: i for i, e in enumerate(elems)}
            self._elements = elems

    @property
    def elements(self) -> tuple[IntMatrix, ...]:
        if self._elements is None:
            self._materialize()
        return self._elements

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, g: IntMatrix) -> int:
        self.elements
        return self._index[g]

    def __contains__(self, g) -> bool:
        self.elements
        return as_matrix(g) in self._index

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return self.order

    def is_abelian(self) -> bool:
        gs = self.generators
        return all(a @ b == b @ a for a, b in combinations(gs, 2))

    def whole(self) -> Subgroup:
        return Subgroup(self, frozenset(self.elements), self.generators)


close = MatGroup


class Subgroup:
    """A subgroup of a materialized :class:`MatGroup` held as an element set."""

    def __init__(self, parent: MatGroup, elements: frozenset, generators: Sequence[IntMatrix] = ()):
        self.parent = parent
        self.elements = frozenset(elements)
        self.generators = tuple(generators)
        self._group = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def sorted_elements(self) -> list[IntMatrix]:
        return sorted(self.elements, key=lambda m: m.entries)

    def is_closed(self) -> bool:
        els = self.elements
        if self.parent.identity not in els:
            return False
        return all(a @ b in els for a in els for b in els)

    def as_group(self) -> MatGroup:
        """The subgroup as a standalone :class:`MatGroup`."""
        if self._group is None:
            gens = self.generators or tuple(e for e in self.sorted_elements() if e != self.parent.identity)
            g = MatGroup(gens, order_cap=max(self.parent.order_cap, self.order), degree=self.parent.degree)
            g._elements = tuple(self.sorted_elements())
            g._index = {e: i for i, e in enumerate(g._elements)}
            self._group = g
        return self._group

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        return f"Subgroup(order={self.order})"


def element_order(g: IntMatrix) -> int:
    g = as_matrix(g)
    ident = IntMatrix.identity(g.nrows)
    x, k = g, 1
    while x != ident:
        x = x @ g
        k += 1
        if k > 10**6:
            raise ValueError("element of infinite order")
    return k


def _closure_within(parent: MatGroup, gens: Sequence[IntMatrix]) -> frozenset:
    seen = {parent.identity}
    frontier = [parent.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = g @ x
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def subgroup_generated(G: MatGroup, elems: Iterable) -> Subgroup:
    gens = tuple(as_matrix(e) for e in elems)
    for g in gens:
        if g not in G:
            raise ValueError("generator is not an element of the group")
    return Subgroup(G, _closure_within(G, gens), gens)


def cyclic_subgroups(G: MatGroup) -> list[Subgroup]:
    """All distinct cyclic subgroups, trivial one included, ordered by
    (order, first generator in the element order)."""
    out: dict[frozenset, Subgroup] = {}
    for g in G.elements:
        els = [G.identity]
        x = g
        while x != G.identity:
            els.append(x)
            x = x @ g
        key = frozenset(els)
        if key not in out:
            out[key] = Subgroup(G, key, (g,) if g != G.identity else ())
    return sorted(out.values(), key=lambda s: (s.order, G.index(s.generators[0]) if s.generators else -1))


def elementary_abelian_subgroups(G: MatGroup, p: int, rank: int) -> list[Subgroup]:
    """All subgroups isomorphic to ``(Z/p)^rank``."""
    ident = G.identity
    order_p = [g for g in G.elements if g != ident and element_order(g) == p]
    found: dict[frozenset, Subgroup] = {}

    def extend(gens, elems):
        if len(gens) == rank:
            if elems not in found:
                found[elems] = Subgroup(G, elems, tuple(gens))
            return
        last = G.index(gens[-1]) if gens else -1
        for h in order_p:
            if G.index(h) <= last or h in elems:
                continue
            if all(h @ a == a @ h for a in gens):
                new = frozenset(a @ x for x in elems for a in _powers(h))
                extend(gens + [h], new)

    extend([], frozenset([ident]))
    return sorted(found.values(), key=lambda s: [G.index(g) for g in s.generators])


def _powers(h: IntMatrix) -> list[IntMatrix]:
    ident = IntMatrix.identity(h.nrows)
    out = [ident]
    x = h
    while x != ident:
        out.append(x)
        x = x @ h
    return out


def all_subgroups(G: MatGroup) -> list[Subgroup]:
    """Every subgroup of ``G``, built as joins of cyclic subgroups.

    Intended for small groups (a few hundred elements)."""
    cyc = cyclic_subgroups(G)
    found: dict[frozenset, Subgroup] = {s.elements: s for s in cyc}
    frontier = list(cyc)
    while frontier:
        nxt = []
        for s in frontier:
            for c in cyc:
                if c.elements <= s.elements:
                    continue
                gens = s.generators + c.generators
                els = _closure_within(G, gens)
                if els not in found:
                    sub = Subgroup(G, els, gens)
                    found[els] = sub
                    nxt.append(sub)
        frontier = nxt
    return sorted(found.values(), key=lambda s: (s.order, sorted(G.index(e) for e in s.elements)))


def direct_product(G: MatGroup, H: MatGroup) -> MatGroup:
    gens = [IntMatrix.block_diagonal([g, H.identity]) for g in G.generators]
    gens += [IntMatrix.block_diagonal([G.identity, h]) for h in H.generators]
    return MatGroup(gens, order_cap=max(G.order_cap, H.order_cap), degree=G.degree + H.degree)


def permutation_matrix(perm: Sequence[int]) -> IntMatrix:
    """Matrix sending ``e_i`` to ``e_{perm[i]}`` (0-based)."""
    n = len(perm)
    rows = [[0] * n for _ in range(n)]
    for i, j in enumerate(perm):
        rows[j][i] = 1
    return IntMatrix(rows, n)


def symmetric_group(n: int) -> MatGroup:
    """``Sym_n`` acting on ``Z^n`` by permutation matrices."""
    if n == 1:
        return MatGroup([IntMatrix.identity(1)])
    gens = []
    for i in range(n - 1):
        p = list(range(n))
        p[i], p[i + 1] = p[i + 1], p[i]
        gens.append(permutation_matrix(p))
    return MatGroup(gens)


def cyclic_group(n: int) -> MatGroup:
    """``Z/n`` as the regular permutation representation."""
    return MatGroup([permutation_matrix([(i + 1) % n for i in range(n)])], degree=n)


def elementary_abelian_group(p: int, rank: int) -> MatGroup:
    """``(Z/p)^rank`` as a block-diagonal product of regular representations."""
    g = cyclic_group(p)
    out = g
    for _ in range(rank - 1):
        out = direct_product(out, g)
    return out
