"""Named groups and lattices for the command line.

Group references::

    klein2, klein3          (Z/2)^2, (Z/3)^2 (regular permutation blocks)
    C<n>, S<n>              cyclic (regular) and symmetric groups
    Z<p>^<k>                elementary abelian (Z/p)^k

Lattice references::

    J:<group>               J_G = Z[G] / Z·norm
    perm:regular-of-<group> Z[G]
    natural:<group>         Z^n with the given matrix action
    m-family:<diagram>      the lattice M restricted to the Klein group
                            (diagram such as B1^3, B2+B1, D3+B1)
    klein-b1                the even-sum lattice in Z^3
    so6-family:m=<m>        (ZD_3)^m + Z v_e over W(D_3)^m
    sl3-family:m=<m>[,a=<digits>]
    lambda6                 Λ_6 over Sym_3 x Sym_3
    <path>.json             a serialized lattice (GLattice.to_dict)
"""

from __future__ import annotations

import json
import os
import re

from .glattice import GLattice, j_gamma, natural_lattice, regular_lattice, restrict
from .groups import DEFAULT_ORDER_CAP, MatGroup, cyclic_group, elementary_abelian_group, symmetric_group
from .witnesses import (
    DiagramSpec,
    family_lattice_m,
    gamma_embedding,
    klein_b1_lattice,
    lambda6_restricted,
    sl3_lattice,
    so6_gamma,
    so6_lattice,
)


class UnknownReference(ValueError):
    pass


def group_from_ref(ref: str, order_cap: int = DEFAULT_ORDER_CAP) -> MatGroup:
    ref = ref.strip()
    if ref == "klein2":
        return elementary_abelian_group(2, 2)
    if ref == "klein3":
        return elementary_abelian_group(3, 2)
    m = re.fullmatch(r"C(\d+)", ref)
    if m:
        return cyclic_group(int(m.group(1)))
    m = re.fullmatch(r"S(\d+)", ref)
    if m:
        G = symmetric_group(int(m.group(1)))
        G.order_cap = order_cap
        return G
    m = re.fullmatch(r"Z(\d+)\^(\d+)", ref)
    if m:
        return elementary_abelian_group(int(m.group(1)), int(m.group(2)))
    raise UnknownReference(f"unknown group reference {ref!r}")


def _params(text: str) -> dict[str, str]:
    out = {}
    for part in filter(None, text.split(",")):
        k, sep, v = part.partition("=")
        if not sep:
            raise UnknownReference(f"expected key=value, got {part!r}")
        out[k.strip()] = v.strip()
    return out


def lattice_from_ref(ref: str, order_cap: int = DEFAULT_ORDER_CAP) -> tuple[GLattice, dict[str, object]]:
    """The lattice and a dictionary of named group elements for ``--subgroup``."""
    ref = ref.strip()
    if ref.endswith(".json") or os.path.sep in ref:
        with open(ref) as fh:
            return GLattice.from_dict(json.load(fh), order_cap=order_cap), {}
    head, _, rest = ref.partition(":")
    if head == "J" and rest:
        return j_gamma(group_from_ref(rest, order_cap)), {}
    if head == "perm" and rest.startswith("regular-of-"):
        return regular_lattice(group_from_ref(rest[len("regular-of-"):], order_cap)), {}
    if head == "natural" and rest:
        return natural_lattice(group_from_ref(rest, order_cap)), {}
    if head == "m-family" and rest:
        d = DiagramSpec.parse(rest)
        emb = gamma_embedding(d)
        return restrict(family_lattice_m(d), emb.group), {f"g{k + 1}": g for k, g in enumerate(emb.images)}
    if head == "klein-b1":
        L, _ = klein_b1_lattice()
        return L, dict(zip(("sigma", "tau", "rho"), L.group.generators))
    if head == "so6-family":
        p = _params(rest)
        m = int(p.get("m", 2))
        L = so6_lattice(m)
        L.group.order_cap = max(order_cap, L.group.order_cap)
        a, b = so6_gamma(m)
        return L, {"a": a, "b": b}
    if head == "sl3-family":
        p = _params(rest)
        m = int(p.get("m", 2))
        a = tuple(int(c) for c in p["a"]) if "a" in p else None
        return sl3_lattice(m, a), {}
    if head == "lambda6":
        return lambda6_restricted(), {}
    raise UnknownReference(f"unknown lattice reference {ref!r}")


def select_subgroup(L: GLattice, named: dict, spec: str) -> GLattice:
    """Restrict to the subgroup generated by ``spec``: comma-separated names
    from ``named`` or indices into the sorted element list."""
    gens = []
    for tok in filter(None, (t.strip() for t in spec.split(","))):
        if tok in named:
            gens.append(named[tok])
        elif tok.isdigit():
            els = L.group.elements
            i = int(tok)
            if i >= len(els):
                raise UnknownReference(f"element index {i} out of range (order {len(els)})")
            gens.append(els[i])
        else:
            raise UnknownReference(f"unknown group element {tok!r}; known: {sorted(named)}")
    if not gens:
        raise UnknownReference("empty subgroup specification")
    return restrict(L, MatGroup(gens, degree=L.group.degree, order_cap=L.group.order_cap))
