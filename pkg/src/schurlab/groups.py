"""Small finite groups given by multiplication tables.

Elements are the integers ``0..n-1`` and ``0`` is always the identity.
Indexing conventions (used by every serialized output):

* cyclic ``C:n``: element ``i`` is ``a^i``;
* dihedral ``D:2p``: element ``i < p`` is ``a^i`` and element ``p + i`` is
  ``a^i b``.

Products are read left to right, ``x*y == mul[x, y]``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from math import gcd

import numpy as np
from sympy import isprime

MAX_ORDER = 64


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    order: int
    mul: np.ndarray
    inv: np.ndarray
    kind: str = "generic"
    gens: tuple[int, ...] = ()
    param: int = 0

    def __post_init__(self):
        self.mul.setflags(write=False)
        self.inv.setflags(write=False)

    @property
    def spec(self) -> str:
        if self.kind == "cyclic":
            return f"C:{self.order}"
        if self.kind == "dihedral":
            return f"D:{self.order}"
        return f"G:{self.order}"

    def __repr__(self):
        return f"FiniteGroup({self.spec})"

    def __len__(self):
        return self.order

    def elements(self) -> range:
        return range(self.order)

    def op(self, x: int, y: int) -> int:
        return int(self.mul[x, y])

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != 0:
            y = int(self.mul[y, x])
            k += 1
        return k

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def is_cyclic(self) -> bool:
        return any(self.element_order(x) == self.order for x in range(self.order))

    def closure(self, elems) -> frozenset[int]:
        """Subgroup generated by ``elems``."""
        seen = {0}
        frontier = [0]
        gens = sorted(set(int(x) for x in elems))
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = int(self.mul[x, s])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def inverse_set(self, elems) -> frozenset[int]:
        return frozenset(int(self.inv[x]) for x in elems)

    def product_set(self, xs, ys) -> frozenset[int]:
        return frozenset(int(self.mul[x, y]) for x in xs for y in ys)

    def same_group(self, other: "FiniteGroup") -> bool:
        return self is other or (self.order == other.order and np.array_equal(self.mul, other.mul))


def _from_table(mul, kind="generic", gens=None, param=0) -> FiniteGroup:
    mul = np.asarray(mul, dtype=np.int64)
    n = mul.shape[0]
    inv = np.empty(n, dtype=np.int64)
    for x in range(n):
        inv[x] = int(np.nonzero(mul[x] == 0)[0][0])
    if gens is None:
        gens = _greedy_generators(mul)
    return FiniteGroup(n, mul, inv, kind, tuple(gens), param)


def _greedy_generators(mul) -> tuple[int, ...]:
    n = mul.shape[0]
    gens: list[int] = []
    span = {0}
    for x in range(1, n):
        if x in span:
            continue
        gens.append(x)
        span = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for y in frontier:
                for s in gens:
                    z = int(mul[y, s])
                    if z not in span:
                        span.add(z)
                        nxt.append(z)
            frontier = nxt
    return tuple(gens)


def from_table(mul) -> FiniteGroup:
    """Generic group from a Cayley table; validates the group axioms."""
    mul = np.asarray(mul, dtype=np.int64)
    n = mul.shape[0]
    if mul.shape != (n, n) or n < 1:
        raise ValueError("multiplication table must be square and nonempty")
    rng = np.arange(n)
    for i in range(n):
        if not (np.array_equal(np.sort(mul[i]), rng) and np.array_equal(np.sort(mul[:, i]), rng)):
            raise ValueError("table is not a Latin square")
    if not (np.array_equal(mul[0], rng) and np.array_equal(mul[:, 0], rng)):
        raise ValueError("element 0 is not the identity")
    # (xy)z == x(yz) for all triples
    left = mul[mul[:, :, None], rng[None, None, :]]
    right = mul[rng[:, None, None], mul[None, :, :]]
    if not np.array_equal(left, right):
        raise ValueError("table is not associative")
    return _from_table(mul)


def make_cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError(f"cyclic group order must be positive, got {n}")
    idx = np.arange(n)
    mul = (idx[:, None] + idx[None, :]) % n
    gens = (1,) if n > 1 else ()
    return _from_table(mul, "cyclic", gens, n)


def make_dihedral(p: int) -> FiniteGroup:
    """Dihedral group of order ``2p`` for odd ``p >= 3``."""
    if p < 3 or p % 2 == 0:
        raise ValueError(f"dihedral parameter must be odd and >= 3, got {p}")
    n = 2 * p
    mul = np.empty((n, n), dtype=np.int64)
    for x in range(n):
        i, s = x % p, x // p
        for y in range(n):
            j, t = y % p, y // p
            k = (i + (j if s == 0 else -j)) % p
            mul[x, y] = k + p * ((s + t) % 2)
    return _from_table(mul, "dihedral", (1, p), p)


_SPEC = re.compile(r"^\s*([CD])\s*:\s*(\d+)\s*$")


def parse_group_spec(spec: str) -> FiniteGroup:
    """Parse ``"C:n"`` or ``"D:2p"`` (order ``2p``, ``p`` an odd prime)."""
    m = _SPEC.match(spec or "")
    if not m:
        raise ValueError(f"bad group spec {spec!r}; expected 'C:n' or 'D:2p'")
    kind, order = m.group(1), int(m.group(2))
    if order < 1:
        raise ValueError(f"bad group spec {spec!r}: order must be positive")
    if kind == "C":
        return make_cyclic(order)
    if order % 2 or order < 6 or not isprime(order // 2):
        raise ValueError(f"bad group spec {spec!r}: dihedral order must be 2p with p an odd prime")
    return make_dihedral(order // 2)


@dataclass(frozen=True)
class Subgroup:
    elements: frozenset[int]
    normal: bool = field(default=False, compare=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.elements

    def __iter__(self):
        return iter(sorted(self.elements))

    def __len__(self):
        return len(self.elements)

    def sort_key(self):
        return (len(self.elements), tuple(sorted(self.elements)))


def is_normal(G: FiniteGroup, H) -> bool:
    H = frozenset(H)
    for g in (G.gens or range(G.order)):
        gi = int(G.inv[g])
        for h in H:
            if int(G.mul[G.mul[gi, h], g]) not in H:
                return False
    return True


def make_subgroup(G: FiniteGroup, elems) -> Subgroup:
    H = G.closure(elems)
    return Subgroup(H, is_normal(G, H))


def _check_cap(G: FiniteGroup):
    if G.order > MAX_ORDER:
        raise ValueError(f"group order {G.order} exceeds cap {MAX_ORDER}")


def all_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every subgroup exactly once, sorted by (order, elements)."""
    _check_cap(G)
    found = {G.closure([x]) for x in range(G.order)}
    frontier = set(found)
    while frontier:
        new = set()
        for H in frontier:
            for K in found:
                J = G.closure(H | K)
                if J not in found and J not in new:
                    new.add(J)
        found |= new
        frontier = new
    subs = [Subgroup(H, is_normal(G, H)) for H in found]
    subs.sort(key=Subgroup.sort_key)
    return subs


def is_automorphism(G: FiniteGroup, perm) -> bool:
    f = np.asarray(perm)
    if sorted(f.tolist()) != list(range(G.order)):
        return False
    return bool(np.array_equal(f[G.mul], G.mul[f[:, None], f[None, :]]))


def _extend_hom(G: FiniteGroup, images: dict[int, int]):
    phi = [-1] * G.order
    phi[0] = 0
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for s, t in images.items():
                y = int(G.mul[x, s])
                v = int(G.mul[phi[x], t])
                if phi[y] < 0:
                    phi[y] = v
                    nxt.append(y)
                elif phi[y] != v:
                    return None
        frontier = nxt
    return phi


def automorphisms(G: FiniteGroup) -> list[tuple[int, ...]]:
    """All automorphisms as image tuples, by brute force over generator images."""
    _check_cap(G)
    gens = G.gens
    if not gens:
        return [tuple(range(G.order))]
    orders = [G.element_order(x) for x in range(G.order)]
    choices = [[y for y in range(G.order) if orders[y] == orders[s]] for s in gens]
    out = []
    for imgs in itertools.product(*choices):
        phi = _extend_hom(G, dict(zip(gens, imgs)))
        if phi is not None and is_automorphism(G, phi):
            out.append(tuple(phi))
    out.sort()
    return out


def automorphism_group(G: FiniteGroup):
    """Aut(G) as a permutation group on element indices."""
    from .permgrp import PermGroup

    auts = automorphisms(G)
    ident = tuple(range(G.order))
    return PermGroup.from_generators(G.order, [f for f in auts if f != ident])


def power_automorphism(G: FiniteGroup, t: int) -> tuple[int, ...]:
    """``x -> x^t`` on a cyclic group (the map sigma_t)."""
    if G.kind != "cyclic":
        raise ValueError("power automorphisms are defined here for cyclic groups only")
    n = G.order
    if gcd(t, n) != 1:
        raise ValueError(f"{t} is not a unit modulo {n}")
    return tuple((t * i) % n for i in range(n))


def quotient_group(G: FiniteGroup, B, A) -> tuple[FiniteGroup, dict[int, int]]:
    """``B/A`` with the canonical epimorphism as a dict ``element -> coset``.

    Cosets are numbered by their least element, so the identity coset is 0.
    """
    B, A = frozenset(B), frozenset(A)
    if not A <= B:
        raise ValueError("A is not contained in B")
    for b in B:
        bi = int(G.inv[b])
        for a in A:
            if int(G.mul[G.mul[bi, a], b]) not in A:
                raise ValueError("A is not normal in B")
    cosets: list[list[int]] = []
    pi: dict[int, int] = {}
    for x in sorted(B):
        if x in pi:
            continue
        c = sorted(int(G.mul[a, x]) for a in A)
        for y in c:
            pi[y] = len(cosets)
        cosets.append(c)
    m = len(cosets)
    table = np.empty((m, m), dtype=np.int64)
    for i, ci in enumerate(cosets):
        for j, cj in enumerate(cosets):
            table[i, j] = pi[int(G.mul[ci[0], cj[0]])]
    Q = _from_table(table)
    if Q.is_cyclic():
        # relabel as the standard cyclic group so quotient indices are powers
        gen = next(x for x in range(m) if Q.element_order(x) == m)
        power = {0: 0}
        y = gen
        for k in range(1, m):
            power[y] = k
            y = int(table[y, gen])
        pi = {x: power[c] for x, c in pi.items()}
        Q = make_cyclic(m)
    return Q, pi


def induced_group(G: FiniteGroup, H) -> tuple[FiniteGroup, list[int]]:
    """The subgroup ``H`` as a standalone group plus the embedding list.

    Local index ``i`` corresponds to ``embed[i]`` in ``G``; ``embed`` is sorted
    so local 0 is the identity.
    """
    embed = sorted(frozenset(H))
    pos = {x: i for i, x in enumerate(embed)}
    m = len(embed)
    table = np.empty((m, m), dtype=np.int64)
    for i, x in enumerate(embed):
        for j, y in enumerate(embed):
            table[i, j] = pos[int(G.mul[x, y])]
    idx = np.arange(m)
    if np.array_equal(table, (idx[:, None] + idx[None, :]) % m):
        return make_cyclic(m), embed
    return _from_table(table), embed
