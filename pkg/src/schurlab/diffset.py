"""Difference sets in cyclic groups, multipliers and quartic cyclotomy.

Sets in ``Z_v`` are given by exponents: ``d`` stands for ``a^d``, so the group
operation is addition mod ``v`` and ``D^{(t)}`` is ``t*D``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import gcd, isqrt

import numpy as np
from sympy import factorint, isprime, primitive_root

from . import BudgetExceeded
from . import _kernels
from .permgrp import PermGroup

log = logging.getLogger(__name__)

MAX_SEARCH_PRIME = 61
DEFAULT_SEARCH_BUDGET = 10**10


class DifferenceSetAlarm(RuntimeError):
    """A construction or a cited existence statement failed to check out."""


@dataclass(frozen=True)
class DifferenceSetRecord:
    v: int
    k: int
    lam: int
    elements: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.k - self.lam

    @property
    def trivial(self) -> bool:
        return not 2 <= self.k <= self.v - 2

    @property
    def parameters(self) -> tuple[int, int, int]:
        return (self.v, self.k, self.lam)

    def to_dict(self, multipliers: bool = True) -> dict:
        d = {"v": self.v, "k": self.k, "lambda": self.lam, "elements": list(self.elements)}
        if multipliers:
            d["multipliers"] = list(multiplier_group(self).multipliers)
        return d


def difference_counts(v: int, D) -> np.ndarray:
    """``out[g] = #{(d1, d2) in D x D : d2 - d1 = g}``."""
    x = np.asarray(sorted(set(int(d) % v for d in D)), dtype=np.int64)
    return np.bincount(((x[None, :] - x[:, None]) % v).ravel(), minlength=v)


def _record_cyclic(v: int, D) -> DifferenceSetRecord | None:
    elems = tuple(sorted(set(int(d) % v for d in D)))
    k = len(elems)
    if v == 1:
        return DifferenceSetRecord(1, k, 0, elems)
    c = difference_counts(v, elems)[1:]
    if not (c == c[0]).all():
        return None
    return DifferenceSetRecord(v, k, int(c[0]), elems)


def is_difference_set(G, D) -> DifferenceSetRecord | None:
    """The record of ``D`` if it is a difference set in the abelian group ``G``.

    ``G`` is a :class:`FiniteGroup` or an integer ``v`` meaning ``Z_v``.
    """
    if isinstance(G, int):
        return _record_cyclic(G, D)
    if not G.is_abelian():
        raise ValueError("difference sets are handled in abelian groups only")
    if G.kind == "cyclic":
        return _record_cyclic(G.order, D)
    elems = sorted(set(int(d) for d in D))
    idx = np.asarray(elems, dtype=np.int64)
    c = np.bincount(G.mul[G.inv[idx][:, None], idx[None, :]].ravel(), minlength=G.order)[1:]
    if G.order > 1 and not (c == c[0]).all():
        return None
    return DifferenceSetRecord(G.order, len(elems), int(c[0]) if G.order > 1 else 0, tuple(elems))


def complement(rec: DifferenceSetRecord) -> DifferenceSetRecord:
    v = rec.v
    rest = tuple(x for x in range(v) if x not in set(rec.elements))
    out = DifferenceSetRecord(v, v - rec.k, v - 2 * rec.k + rec.lam, rest)
    k, lam = out.k, out.lam
    if v > 1 and k * (k - 1) != (v - 1) * lam:
        raise DifferenceSetAlarm(f"complement parameters {out.parameters} fail k(k-1)=(v-1)lambda")
    return out


def translate(D, g: int, v: int) -> tuple[int, ...]:
    return tuple(sorted((int(d) + g) % v for d in D))


def scale(D, t: int, v: int) -> tuple[int, ...]:
    return tuple(sorted((t * int(d)) % v for d in D))


def canonical_translate(D, v: int) -> tuple[int, ...]:
    """Lexicographically least translate; labels the translation class."""
    return min(translate(D, -int(d), v) for d in D) if D else ()


# -- parameters ---------------------------------------------------------------------


def is_fermat_prime(p: int) -> bool:
    return isprime(p) and p >= 3 and (p - 1) & (p - 2) == 0


def prime_shape(p: int, r: int) -> int | None:
    """``q`` when ``p = r q + 1`` with ``q`` prime, else None."""
    if (p - 1) % r:
        return None
    q = (p - 1) // r
    return q if isprime(q) else None


def feasible_parameters(v: int) -> list[tuple[int, int]]:
    """All ``(k, lambda)`` with ``2 <= k <= v-2`` and ``k(k-1) = (v-1) lambda``.

    Fermat primes, ``2q+1`` and ``4q+1`` need no separate filter: the
    arithmetic alone already leaves nothing, ``k in {q, q+1}``, and
    ``k in {q, q+1, 3q, 3q+1}`` respectively.
    """
    if v < 2:
        raise ValueError("v must be at least 2")
    out = []
    for k in range(2, v - 1):
        if (k * (k - 1)) % (v - 1) == 0:
            out.append((k, k * (k - 1) // (v - 1)))
    return out


# -- multipliers --------------------------------------------------------------------


def multiplier_test(rec: DifferenceSetRecord, t: int) -> int | None:
    """``g`` with ``t*D = D + g``, or None when ``t`` is not a multiplier."""
    v = rec.v
    if gcd(t, v) != 1:
        raise ValueError(f"{t} is not coprime to {v}")
    img = set(scale(rec.elements, t, v))
    if not rec.elements:
        return 0
    d0 = rec.elements[0]
    for e in sorted(img):
        g = (e - d0) % v
        if set(translate(rec.elements, g, v)) == img:
            return g
    return None


@dataclass
class MultiplierData:
    v: int
    multipliers: tuple[int, ...]
    witnesses: dict[int, int] = field(default_factory=dict)

    @property
    def order(self) -> int:
        return len(self.multipliers)

    def group(self) -> PermGroup:
        """``M(D)`` as permutations ``x -> t x`` of ``Z_v``."""
        gens = [tuple((t * x) % self.v for x in range(self.v)) for t in self.multipliers if t != 1]
        return PermGroup.from_generators(self.v, gens)


def multiplier_group(rec: DifferenceSetRecord) -> MultiplierData:
    v = rec.v
    wit = {}
    for t in range(1, max(v, 2)):
        if gcd(t, v) == 1:
            g = multiplier_test(rec, t)
            if g is not None:
                wit[t] = g
    mult = tuple(sorted(wit))
    for s in mult:
        for t in mult:
            if (s * t) % v not in wit and v > 1:
                raise DifferenceSetAlarm("multipliers are not closed under products")
    return MultiplierData(v, mult, wit)


def invariant_translate(rec: DifferenceSetRecord, M: MultiplierData) -> tuple[int, ...]:
    """First translate ``D + g`` (in ``g`` order) fixed by every multiplier."""
    v = rec.v
    for g in range(v):
        T = translate(rec.elements, g, v)
        s = set(T)
        if all(set(scale(T, t, v)) == s for t in M.multipliers):
            return T
    raise DifferenceSetAlarm(f"no translate of {rec.elements} is invariant under {M.multipliers}")


# -- searches -----------------------------------------------------------------------


def _units(v: int) -> list[int]:
    return [t for t in range(1, v) if gcd(t, v) == 1]


def _affine_orbit(D, v: int) -> set[tuple[int, ...]]:
    out = set()
    for t in _units(v):
        S = scale(D, t, v)
        for g in range(v):
            out.add(translate(S, g, v))
    return out


@dataclass
class SearchResult:
    p: int
    mode: str
    records: list[DifferenceSetRecord]
    nodes: int = 0
    method: str = "exhaustive"

    def translation_classes(self) -> set[tuple[int, ...]]:
        return {canonical_translate(r.elements, self.p) for r in self.records}

    def parameter_set(self) -> set[tuple[int, int, int]]:
        return {r.parameters for r in self.records}


def _finish(p, mode, sets, nodes, method) -> SearchResult:
    if mode == "up_to_translation":
        sets = {canonical_translate(D, p) for D in sets}
    elif mode != "all":
        raise ValueError(f"unknown mode {mode!r}")
    recs = []
    for D in sorted(sets, key=lambda s: (len(s), s)):
        rec = _record_cyclic(p, D)
        if rec is None or rec.trivial:
            raise DifferenceSetAlarm(f"search produced a non-difference set {D}")
        recs.append(rec)
    return SearchResult(p, mode, recs, nodes, method)


def search_exhaustive(p: int, mode: str = "all", budget: int = DEFAULT_SEARCH_BUDGET) -> SearchResult:
    """Every nontrivial difference set in ``Z_p``.

    Only feasible sizes ``k < p/2`` are searched.  Affine maps ``x -> t x + g``
    preserve difference sets, so the search may assume ``{0, 1}`` is inside
    ``D``; hits are then expanded by the affine group and complements added.
    """
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if p > MAX_SEARCH_PRIME:
        raise ValueError(f"exhaustive search is capped at p = {MAX_SEARCH_PRIME}")
    found: set[tuple[int, ...]] = set()
    nodes = 0
    for k, lam in feasible_parameters(p):
        if 2 * k >= p:
            continue
        rows, cnt, nn = _kernels.difference_set_dfs(p, k, lam, budget - nodes)
        nodes += int(nn)
        if cnt < 0:
            raise BudgetExceeded("difference-set search nodes", budget)
        for row in rows:
            for D in _affine_orbit(tuple(int(x) for x in row), p):
                found.add(D)
                found.add(tuple(x for x in range(p) if x not in set(D)))
    return _finish(p, mode, found, nodes, "exhaustive")


def quartic_classes(p: int, g: int | None = None) -> list[tuple[int, ...]]:
    """``C_i = {g^(4s+i)}`` for a primitive root ``g`` (smallest by default)."""
    if p % 4 != 1 or not isprime(p):
        raise ValueError(f"{p} is not a prime congruent to 1 mod 4")
    g = primitive_root(p) if g is None else g
    cls: list[list[int]] = [[], [], [], []]
    x = 1
    for e in range(p - 1):
        cls[e % 4].append(x)
        x = (x * g) % p
    return [tuple(sorted(c)) for c in cls]


def search_multiplier_pruned(p: int, mode: str = "all") -> SearchResult:
    """Difference sets in ``Z_p`` that are unions of orbits of ``x -> t x``
    with ``t`` of order ``q`` (``p = 4q + 1``), plus optionally ``0``.

    The orbits of such ``t`` on ``Z_p^*`` are the four quartic classes.  Hits
    are closed under translations and the full unit group before comparison,
    since multiplier images and translates of difference sets are
    difference sets.
    """
    q = prime_shape(p, 4)
    if not isprime(p) or q is None or q == 2:
        raise ValueError(f"{p} is not of the form 4q+1 with q an odd prime")
    C = quartic_classes(p)
    found: set[tuple[int, ...]] = set()
    tried = 0
    for mask in range(16):
        base = [x for i in range(4) if (mask >> i) & 1 for x in C[i]]
        for zero in (False, True):
            D = tuple(sorted(base + ([0] if zero else [])))
            if not 2 <= len(D) <= p - 2:
                continue
            tried += 1
            rec = _record_cyclic(p, D)
            if rec is not None:
                found |= _affine_orbit(D, p)
    return _finish(p, mode, found, tried, "multiplier-pruned")


# -- quartic cyclotomy ----------------------------------------------------------------


def two_square_decomposition(p: int) -> tuple[int, int]:
    """``(x, y)`` with ``p = x^2 + 4 y^2``, ``x = 1 mod 4`` and ``y >= 0``."""
    for y in range(isqrt(p // 4) + 1):
        r = p - 4 * y * y
        s = isqrt(r)
        if s * s == r:
            x = s if s % 4 == 1 else -s
            if x % 4 == 1:
                return x, y
    raise ValueError(f"{p} is not of the form x^2 + 4y^2 with x = 1 mod 4")


@dataclass(frozen=True)
class QuarticCyclotomy:
    p: int
    g: int
    classes: tuple[tuple[int, ...], ...]
    table: tuple[tuple[int, ...], ...]  # table[i][j] = (i, j)_4
    x: int
    y: int
    # (0,3)_4 - (0,1)_4; its sign fixes the orientation of y for this g
    y_oriented: int

    def number(self, i: int, j: int) -> int:
        return self.table[i % 4][j % 4]

    @property
    def q(self) -> int | None:
        return prime_shape(self.p, 4)

    def identity_holds(self) -> bool | None:
        """``x = 2q - 1 - 8 (1,0)_4`` when ``p = 4q + 1`` with ``q`` odd."""
        if (self.p - 1) % 4 or ((self.p - 1) // 4) % 2 == 0:
            return None
        q = (self.p - 1) // 4
        return self.x == 2 * q - 1 - 8 * self.number(1, 0)


def quartic_cyclotomy(p: int, g: int | None = None) -> QuarticCyclotomy:
    g = primitive_root(p) if g is None else g
    C = quartic_classes(p, g)
    ind = {}
    for i, c in enumerate(C):
        for z in c:
            ind[z] = i
    table = [[0] * 4 for _ in range(4)]
    for z in range(1, p):
        w = (z + 1) % p
        if w:
            table[ind[z]][ind[w]] += 1
    x, y = two_square_decomposition(p)
    yo = table[0][3] - table[0][1]
    if abs(yo) != y and ((p - 1) // 4) % 2 == 1:
        raise DifferenceSetAlarm(f"(0,3)_4 - (0,1)_4 = {yo} does not match y = {y}")
    return QuarticCyclotomy(p, g, tuple(C), tuple(tuple(r) for r in table), x, y, yo)


# -- named constructions ----------------------------------------------------------------


def paley_set(p: int) -> DifferenceSetRecord:
    """Quadratic residues mod ``p`` for a prime ``p = 3 mod 4``."""
    if not isprime(p) or p % 4 != 3:
        raise ValueError(f"{p} is not a prime congruent to 3 mod 4")
    rec = _record_cyclic(p, {(x * x) % p for x in range(1, p)})
    if rec is None or rec.parameters != (p, (p - 1) // 2, (p - 3) // 4):
        raise DifferenceSetAlarm(f"quadratic residues mod {p} failed validation")
    return rec


def biquadratic_shape(p: int) -> tuple[str, int] | None:
    """``("4t^2+1", t)`` or ``("4t^2+9", t)`` for odd ``t``, else None."""
    for c, name in ((1, "4t^2+1"), (9, "4t^2+9")):
        if p > c and (p - c) % 4 == 0:
            t = isqrt((p - c) // 4)
            if 4 * t * t + c == p and t % 2 == 1:
                return name, t
    return None


def biquadratic_set(p: int) -> DifferenceSetRecord:
    """Quartic residues mod ``p`` (with ``0`` added when that variant is the one
    that validates) for a prime ``p = 4t^2+1`` or ``4t^2+9``, ``t`` odd."""
    shape = biquadratic_shape(p)
    if not isprime(p) or shape is None:
        raise ValueError(f"{p} is not a prime of the form 4t^2+1 or 4t^2+9 with t odd")
    name, t = shape
    res = quartic_classes(p)[0]
    expected = (p, t * t, (t * t - 1) // 4) if name == "4t^2+1" else (p, t * t + 3, (t * t + 3) // 4)
    for variant, D in (("residues", res), ("residues+0", (0,) + res)):
        rec = _record_cyclic(p, D)
        if rec is not None and rec.parameters == expected:
            log.info("biquadratic set mod %d: %s variant validates as %s", p, variant, expected)
            return rec
    raise DifferenceSetAlarm(f"no quartic-residue variant mod {p} has parameters {expected}")


def biquadratic_variant(p: int) -> str:
    return "residues+0" if 0 in biquadratic_set(p).elements else "residues"


# -- nonschur family arithmetic -----------------------------------------------------------


def is_prime_power(q: int) -> bool:
    return q >= 2 and len(factorint(q)) == 1


def projective_representations(v: int, qmax: int | None = None, dmax: int | None = None):
    """Pairs ``(q, d)``, ``q`` a prime power and ``d >= 2``, with
    ``v = (q^(d+1) - 1) / (q - 1)``.

    The default bounds are complete: ``q <= v`` and ``2^(d+1) - 1 <= v``.
    """
    qmax = v if qmax is None else qmax
    if dmax is None:
        dmax = max(2, (v + 1).bit_length() - 1)
    out = []
    for q in range(2, qmax + 1):
        if not is_prime_power(q):
            continue
        for d in range(2, dmax + 1):
            if q ** (d + 1) - 1 == v * (q - 1):
                out.append((q, d))
    return out

