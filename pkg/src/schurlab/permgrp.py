"""Permutation groups with a deterministic Schreier-Sims stabilizer chain.

A permutation is a tuple ``p`` of images, ``x -> p[x]``.  Products compose
left to right: ``mult(p, q)`` applies ``p`` first, then ``q``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator, Sequence

Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def mult(p: Perm, q: Perm) -> Perm:
    return tuple(q[x] for x in p)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for x, y in enumerate(p):
        out[y] = x
    return tuple(out)


def is_identity(p: Perm) -> bool:
    return all(x == y for x, y in enumerate(p))


def check_perm(p, n: int) -> Perm:
    p = tuple(int(x) for x in p)
    if len(p) != n or sorted(p) != list(range(n)):
        raise ValueError(f"not a permutation of 0..{n - 1}: {p}")
    return p


def cycle_length_of(p: Perm, x: int = 0) -> int:
    k, y = 1, p[x]
    while y != x:
        y = p[y]
        k += 1
    return k


def is_full_cycle(p: Perm) -> bool:
    return cycle_length_of(p, 0) == len(p)


@dataclass
class _Level:
    point: int
    gens: list[Perm] = field(default_factory=list)
    # transversal[y] maps the base point to y
    transversal: dict[int, Perm] = field(default_factory=dict)
    orbit: list[int] = field(default_factory=list)
    checked: set = field(default_factory=set)

    def extend_orbit(self):
        k = 0
        while k < len(self.orbit):
            y = self.orbit[k]
            k += 1
            uy = self.transversal[y]
            for s in self.gens:
                z = s[y]
                if z not in self.transversal:
                    self.transversal[z] = mult(uy, s)
                    self.orbit.append(z)


def _new_level(b: int, n: int) -> _Level:
    return _Level(b, transversal={b: identity(n)}, orbit=[b])


class PermGroup:
    """Permutation group on ``0..n-1`` given by generators."""

    def __init__(self, n: int, gens: Sequence[Perm], levels: list[_Level]):
        self.n = n
        self.gens = list(gens)
        self._levels = levels

    @classmethod
    def from_generators(cls, n: int, gens, base: Sequence[int] = ()) -> "PermGroup":
        """Build the chain.  ``base`` optionally prescribes leading base points;
        further points are chosen as smallest moved points."""
        gens = [check_perm(g, n) for g in gens]
        gens = [g for g in gens if not is_identity(g)]
        grp = cls(n, gens, [_new_level(b, n) for b in base])
        grp._schreier_sims()
        while grp._levels and len(grp._levels[-1].orbit) == 1:
            grp._levels.pop()
        return grp

    # -- chain construction ---------------------------------------------

    def _sift(self, g: Perm, start: int) -> tuple[Perm, int]:
        for i in range(start, len(self._levels)):
            lev = self._levels[i]
            u = lev.transversal.get(g[lev.point])
            if u is None:
                return g, i
            g = mult(g, inverse(u))
        return g, len(self._levels)

    def _schreier_sims(self):
        levels = self._levels
        n = self.n
        for g in self.gens:
            if all(g[lev.point] == lev.point for lev in levels):
                levels.append(_new_level(next(x for x in range(n) if g[x] != x), n))
        for i, lev in enumerate(levels):
            fixed = [lv.point for lv in levels[:i]]
            lev.gens = [g for g in self.gens if all(g[b] == b for b in fixed)]
            lev.extend_orbit()
        i = len(levels) - 1
        while i >= 0:
            lev = levels[i]
            restart = None
            for y in list(lev.orbit):
                for gi, s in enumerate(lev.gens):
                    if (y, gi) in lev.checked:
                        continue
                    lev.checked.add((y, gi))
                    sch = mult(mult(lev.transversal[y], s), inverse(lev.transversal[s[y]]))
                    h, j = self._sift(sch, i + 1)
                    if is_identity(h):
                        continue
                    if j == len(levels):
                        levels.append(_new_level(next(x for x in range(n) if h[x] != x), n))
                    for lv in levels[i + 1 : j + 1]:
                        lv.gens.append(h)
                        lv.extend_orbit()
                    restart = j
                    break
                if restart is not None:
                    break
            if restart is not None:
                i = restart
            else:
                i -= 1

    # -- queries ---------------------------------------------------------

    @property
    def base(self) -> list[int]:
        return [lev.point for lev in self._levels]

    def basic_orbits(self) -> list[list[int]]:
        return [sorted(lev.orbit) for lev in self._levels]

    def strong_generators(self, level: int = 0) -> list[Perm]:
        """Strong generators fixing the first ``level`` base points."""
        if level >= len(self._levels):
            return []
        return list(self._levels[level].gens)

    def order(self) -> int:
        r = 1
        for lev in self._levels:
            r *= len(lev.orbit)
        return r

    def __contains__(self, g) -> bool:
        g = tuple(g)
        if len(g) != self.n:
            return False
        h, i = self._sift(g, 0)
        return i == len(self._levels) and is_identity(h)

    def contains_group(self, other: "PermGroup") -> bool:
        return all(g in self for g in other.gens)

    def orbits(self) -> list[list[int]]:
        """Orbits as a sorted partition of the domain."""
        seen = [False] * self.n
        out = []
        for x in range(self.n):
            if seen[x]:
                continue
            orb = [x]
            seen[x] = True
            k = 0
            while k < len(orb):
                y = orb[k]
                k += 1
                for g in self.gens:
                    z = g[y]
                    if not seen[z]:
                        seen[z] = True
                        orb.append(z)
            out.append(sorted(orb))
        return out

    def orbit(self, x: int) -> list[int]:
        return next(o for o in self.orbits() if x in o)

    def point_stabilizer(self, x: int) -> "PermGroup":
        chain = PermGroup.from_generators(self.n, self.gens, base=[x])
        return PermGroup.from_generators(self.n, chain.strong_generators(1))

    def elements(self) -> Iterator[Perm]:
        """All elements, by traversal of the chain's transversals."""
        levels = self._levels
        ident = identity(self.n)

        def rec(i: int, acc: Perm):
            if i < 0:
                yield acc
                return
            for y in levels[i].orbit:
                yield from rec(i - 1, mult(acc, levels[i].transversal[y]))

        yield from rec(len(levels) - 1, ident)

    def random_element(self, rng: random.Random) -> Perm:
        g = identity(self.n)
        for lev in reversed(self._levels):
            g = mult(g, lev.transversal[rng.choice(lev.orbit)])
        return g

    def __repr__(self):
        return f"PermGroup(degree={self.n}, order={self.order()}, gens={len(self.gens)})"


def symmetric_group(n: int) -> PermGroup:
    gens = []
    if n >= 2:
        gens.append(tuple([1, 0] + list(range(2, n))))
    if n >= 3:
        gens.append(tuple(list(range(1, n)) + [0]))
    return PermGroup.from_generators(n, gens)


def right_regular_representation(G) -> PermGroup:
    """The permutations ``x -> x*g``; generated by the group's generators."""
    n = G.order
    gens = [tuple(int(G.mul[x, g]) for x in range(n)) for g in G.gens]
    return PermGroup.from_generators(n, gens)


def right_translation(G, g: int) -> Perm:
    return tuple(int(G.mul[x, g]) for x in range(G.order))


@dataclass(frozen=True)
class RegularCyclicVerdict:
    """``found`` is True/False, or None when the budget ran out."""

    found: bool | None
    witness: Perm | None = None
    examined: int = 0
    exhaustive: bool = False


def contains_regular_cyclic(
    K: PermGroup, n: int, budget: int = 10**7, samples: int = 20000, seed: int = 0
) -> RegularCyclicVerdict:
    """Decide whether ``K`` contains an ``n``-cycle (a regular cyclic subgroup).

    Groups of order at most ``budget`` are enumerated completely.  Larger
    groups are probed with ``samples`` seeded uniform random elements; a miss
    yields ``found=None`` (unknown), never False.
    """
    if K.n != n:
        raise ValueError(f"degree {K.n} does not match n={n}")
    if n == 1:
        return RegularCyclicVerdict(True, identity(1), 0, True)
    order = K.order()
    rng = random.Random(seed)
    examined = 0
    if order > budget:
        for _ in range(min(samples, budget)):
            g = K.random_element(rng)
            examined += 1
            if is_full_cycle(g):
                return RegularCyclicVerdict(True, g, examined, False)
        return RegularCyclicVerdict(None, None, examined, False)
    for g in K.elements():
        examined += 1
        if is_full_cycle(g):
            return RegularCyclicVerdict(True, g, examined, True)
    return RegularCyclicVerdict(False, None, examined, True)
