"""S-rings over small groups: verification, structure constants, constructions.

An S-ring is stored by its partition of the group into basic sets.  Classes
are kept in canonical order, sorted by ``(size, least element)``, so class 0
is always ``{e}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import groups
from .groups import FiniteGroup
from .permgrp import PermGroup, right_regular_representation


class SRingAxiomError(ValueError):
    """A partition failed one of the S-ring axioms.

    ``axiom`` is one of ``"partition"``, ``"identity"``, ``"inverse"``,
    ``"closure"``; ``witness`` carries the offending data.
    """

    def __init__(self, axiom: str, message: str, witness=None):
        super().__init__(f"{axiom}: {message}")
        self.axiom = axiom
        self.witness = witness


@lru_cache(maxsize=None)
def _ldiv(G: FiniteGroup) -> np.ndarray:
    # ldiv[x, z] = x^{-1} z
    return G.mul[G.inv[:, None], np.arange(G.order)[None, :]]


def pair_counts(G: FiniteGroup, cls: np.ndarray, r: int) -> np.ndarray:
    """``out[z, X*r + Y] = #{x in X : x^{-1} z in Y}`` for the labelling ``cls``."""
    n = G.order
    keys = cls[:, None] * r + cls[_ldiv(G)]
    flat = keys.T + (np.arange(n) * (r * r))[:, None]
    return np.bincount(flat.ravel(), minlength=n * r * r).reshape(n, r * r)


def relabel_rows(sig: np.ndarray) -> np.ndarray:
    """Label rows of ``sig`` by first appearance of each distinct row."""
    sig = np.ascontiguousarray(sig)
    seen: dict[bytes, int] = {}
    out = np.empty(sig.shape[0], dtype=np.int64)
    for i in range(sig.shape[0]):
        out[i] = seen.setdefault(sig[i].tobytes(), len(seen))
    return out


def stabilize(G: FiniteGroup, cls: np.ndarray) -> np.ndarray:
    """Split the labelling until it is the coarsest S-ring partition refining it.

    Classes are split by inverse images and by the factorization counts
    against every ordered pair of current classes; partitions only refine, so
    this terminates.
    """
    cls = relabel_rows(np.asarray(cls, dtype=np.int64).reshape(G.order, -1))
    while True:
        r = int(cls.max()) + 1
        new = relabel_rows(np.column_stack([cls, cls[G.inv], pair_counts(G, cls, r)]))
        if int(new.max()) + 1 == r:
            return cls
        cls = new


def _canonical_classes(labels) -> tuple[tuple[int, ...], ...]:
    groups_: dict[int, list[int]] = {}
    for x, c in enumerate(labels):
        groups_.setdefault(int(c), []).append(x)
    return tuple(sorted((tuple(v) for v in groups_.values()), key=lambda c: (len(c), c[0])))


class SRing:
    """A verified S-ring.  Build through :func:`verify_sring` or a constructor."""

    __slots__ = ("group", "classes", "class_of", "_inv")

    def __init__(self, group: FiniteGroup, classes):
        self.group = group
        self.classes: tuple[tuple[int, ...], ...] = tuple(classes)
        cof = np.empty(group.order, dtype=np.int64)
        for i, c in enumerate(self.classes):
            cof[list(c)] = i
        cof.setflags(write=False)
        self.class_of = cof
        self._inv = None

    @property
    def rank(self) -> int:
        return len(self.classes)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    @property
    def inverse_class(self) -> tuple[int, ...]:
        if self._inv is None:
            self._inv = tuple(int(self.class_of[self.group.inv[c[0]]]) for c in self.classes)
        return self._inv

    def key(self) -> tuple[tuple[int, ...], ...]:
        return self.classes

    def __eq__(self, other):
        return (
            isinstance(other, SRing)
            and self.group.same_group(other.group)
            and self.classes == other.classes
        )

    def __hash__(self):
        return hash((self.group.order, self.classes))

    def __repr__(self):
        return f"SRing({self.group.spec}, rank={self.rank}, sizes={self.sizes})"

    def class_containing(self, x: int) -> tuple[int, ...]:
        return self.classes[int(self.class_of[x])]

    def is_aset(self, T) -> bool:
        T = frozenset(T)
        return all(frozenset(self.class_containing(x)) <= T for x in T)

    def serialize(self) -> str:
        return ";".join(",".join(map(str, c)) for c in self.classes)


def rank(A: SRing) -> int:
    return A.rank


def parse_classes(text: str) -> list[list[int]]:
    return [[int(x) for x in part.split(",")] for part in text.strip().split(";")]


def verify_sring(G: FiniteGroup, partition) -> SRing:
    """Check the S-ring axioms; return the S-ring in canonical class order.

    Raises :class:`SRingAxiomError` naming the first violated axiom with a
    witness.
    """
    n = G.order
    labels = np.full(n, -1, dtype=np.int64)
    parts = [sorted(set(int(x) for x in c)) for c in partition]
    for i, c in enumerate(parts):
        if not c:
            raise SRingAxiomError("partition", "empty class", i)
        for x in c:
            if not 0 <= x < n:
                raise SRingAxiomError("partition", f"element {x} out of range", x)
            if labels[x] >= 0:
                raise SRingAxiomError("partition", f"element {x} in two classes", x)
            labels[x] = i
    missing = np.nonzero(labels < 0)[0]
    if missing.size:
        raise SRingAxiomError("partition", f"element {int(missing[0])} not covered", int(missing[0]))
    if len(parts[labels[0]]) != 1:
        raise SRingAxiomError("identity", "{e} is not a class", tuple(parts[labels[0]]))
    for c in parts:
        inv = sorted(int(G.inv[x]) for x in c)
        if inv != parts[labels[inv[0]]]:
            raise SRingAxiomError("inverse", "X^{-1} is not a class", tuple(c))
    r = len(parts)
    counts = pair_counts(G, labels, r)
    for zi, c in enumerate(parts):
        rows = counts[c]
        bad = np.nonzero((rows != rows[0]).any(axis=0))[0]
        if bad.size:
            key = int(bad[0])
            xi, yi = divmod(key, r)
            z2 = c[int(np.nonzero(rows[:, key] != rows[0, key])[0][0])]
            witness = {
                "X": tuple(parts[xi]),
                "Y": tuple(parts[yi]),
                "Z": tuple(c),
                "z1": c[0],
                "z2": z2,
                "counts": (int(counts[c[0], key]), int(counts[z2, key])),
            }
            raise SRingAxiomError(
                "closure", f"factorization count over X*Y differs at {c[0]} and {z2}", witness
            )
    return SRing(G, _canonical_classes(labels))


def from_labels(G: FiniteGroup, labels) -> SRing:
    """Wrap a labelling already known to be stable (output of :func:`stabilize`)."""
    return SRing(G, _canonical_classes(labels))


def sring_closure(G: FiniteGroup, seeds=()) -> SRing:
    """The coarsest S-ring in which every seed set is a union of basic sets."""
    n = G.order
    sig = [np.zeros(n, dtype=np.int64)]
    ident = np.zeros(n, dtype=np.int64)
    ident[0] = 1
    sig.append(ident)
    for T in seeds:
        m = np.zeros(n, dtype=np.int64)
        m[list(T)] = 1
        sig.append(m)
        sig.append(m[G.inv])
    return from_labels(G, stabilize(G, np.column_stack(sig)))


def trivial_sring(G: FiniteGroup) -> SRing:
    """The rank-2 S-ring ``{e}, G#`` (rank 1 for the trivial group)."""
    classes = [(0,)]
    if G.order > 1:
        classes.append(tuple(range(1, G.order)))
    return SRing(G, classes)


def group_ring(G: FiniteGroup) -> SRing:
    return SRing(G, [(x,) for x in range(G.order)])


@dataclass(frozen=True)
class StructureConstants:
    """``c[X, Y, Z]`` counts factorizations ``z = xy`` of a fixed ``z`` in ``Z``."""

    c: np.ndarray
    sizes: tuple[int, ...]
    inverse: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.sizes)


def structure_constants(A: SRing) -> StructureConstants:
    r = A.rank
    counts = pair_counts(A.group, np.asarray(A.class_of), r)
    reps = [c[0] for c in A.classes]
    c = counts[reps].reshape(r, r, r).transpose(1, 2, 0).copy()
    return StructureConstants(c, A.sizes, A.inverse_class)


@dataclass(frozen=True)
class IdentityReport:
    ok: bool
    checked: int
    violation: tuple | None = None
    # violated triples per identity: "triangle", "sum1", "sum2"
    counts: dict = field(default_factory=dict)


def check_identities(sc: StructureConstants) -> IdentityReport:
    """Check the triangle identity and both row-sum identities on every triple.

    ``violation`` is the first failure, taking the identities in the order
    triangle, sum1, sum2; ``counts`` has the totals for each.
    """
    c = np.asarray(sc.c, dtype=np.int64)
    r = sc.rank
    s = np.asarray(sc.sizes, dtype=np.int64)
    T = c[:, :, list(sc.inverse)]  # T[X, Y, Z] = c[X, Y, Z^-1]
    a = s[None, None, :] * T
    b = s[:, None, None] * np.transpose(T, (2, 0, 1))
    d = s[None, :, None] * np.transpose(T, (1, 2, 0))
    tri = (a != b) | (b != d)
    s1 = c.sum(axis=1) != s[:, None]  # indexed [X, Z]
    s2 = (c * s[None, None, :]).sum(axis=2) != np.outer(s, s)  # indexed [X, Y]
    counts = {"triangle": int(tri.sum()), "sum1": int(s1.sum()), "sum2": int(s2.sum())}
    checked = r**3 + 2 * r * r
    violation = None
    if tri.any():
        X, Y, Z = (int(v) for v in np.argwhere(tri)[0])
        violation = ("triangle", X, Y, Z, int(a[X, Y, Z]), int(b[X, Y, Z]), int(d[X, Y, Z]))
    elif s1.any():
        X, Z = (int(v) for v in np.argwhere(s1)[0])
        violation = ("sum1", X, None, Z, int(c[X, :, Z].sum()), int(s[X]))
    elif s2.any():
        X, Y = (int(v) for v in np.argwhere(s2)[0])
        violation = ("sum2", X, Y, None, int((c[X, Y] * s).sum()), int(s[X] * s[Y]))
    return IdentityReport(violation is None, checked, violation, counts)


# -- subgroups ---------------------------------------------------------------


def a_subgroups(A: SRing) -> list[groups.Subgroup]:
    return [H for H in groups.all_subgroups(A.group) if A.is_aset(H.elements)]


def _require_aset(A: SRing, X):
    if not A.is_aset(X):
        raise ValueError("not an A-set (not a union of basic sets)")


def generated_subgroup(A: SRing, X) -> groups.Subgroup:
    _require_aset(A, X)
    return groups.make_subgroup(A.group, X)


def radical(A: SRing, X) -> groups.Subgroup:
    """``{g : gX = Xg = X}``."""
    _require_aset(A, X)
    G = A.group
    X = frozenset(X)
    rad = [
        g
        for g in range(G.order)
        if frozenset(int(G.mul[g, x]) for x in X) == X and frozenset(int(G.mul[x, g]) for x in X) == X
    ]
    return groups.Subgroup(frozenset(rad), groups.is_normal(G, rad))


def is_primitive(A: SRing) -> bool:
    n = A.group.order
    return all(H.order in (1, n) for H in a_subgroups(A))


def is_symmetric(A: SRing) -> bool:
    return all(A.inverse_class[i] == i for i in range(A.rank))


def restrict(A: SRing, H) -> SRing:
    """``A_H`` as an S-ring over ``H`` taken as a standalone group."""
    H = frozenset(H)
    _require_aset(A, H)
    sub, embed = groups.induced_group(A.group, H)
    pos = {x: i for i, x in enumerate(embed)}
    classes = [[pos[x] for x in c] for c in A.classes if c[0] in H]
    return verify_sring(sub, classes)


def quotient_sring(A: SRing, B, A0) -> SRing:
    """``A_{B/A0}`` for an A-section ``B/A0``."""
    B, A0 = frozenset(B), frozenset(A0)
    for T in (B, A0):
        if not A.is_aset(T) or A.group.closure(T) != T:
            raise ValueError("not an A-section: B and A0 must be A-subgroups")
    Q, pi = groups.quotient_group(A.group, B, A0)
    images: list[frozenset[int]] = []
    for c in A.classes:
        if c[0] not in B:
            continue
        img = frozenset(pi[x] for x in c)
        if img in images:
            continue
        if any(img & other for other in images):
            raise ValueError("class images overlap; not an A-section")
        images.append(img)
    return verify_sring(Q, images)


# -- constructions -------------------------------------------------------------


@lru_cache(maxsize=None)
def _automorphisms(G: FiniteGroup):
    return groups.automorphisms(G)


def cyclotomic(G: FiniteGroup, K: PermGroup) -> SRing:
    """``cyc(K, G)``: the orbits of a group ``K`` of automorphisms of ``G``."""
    for g in K.gens:
        if not groups.is_automorphism(G, g):
            raise ValueError(f"generator {g} is not an automorphism of {G.spec}")
    return verify_sring(G, K.orbits())


def from_perm_group(G: FiniteGroup, K: PermGroup) -> SRing:
    """Schur's construction: the orbits of ``K_e`` for ``K`` containing ``G_r``."""
    if not K.contains_group(right_regular_representation(G)):
        raise ValueError("K does not contain the right regular representation")
    return verify_sring(G, K.point_stabilizer(0).orbits())


def cayley_automorphisms(A: SRing) -> PermGroup:
    """Group automorphisms fixing every basic set."""
    G = A.group
    cof = A.class_of
    keep = [f for f in _automorphisms(G) if np.array_equal(cof[list(f)], cof)]
    return PermGroup.from_generators(G.order, keep)


def is_wreath_over(A: SRing, H) -> bool:
    """True when ``H`` is a normal A-subgroup and every class outside ``H`` is a
    union of ``H``-cosets."""
    G = A.group
    H = frozenset(H)
    if G.closure(H) != H or not A.is_aset(H) or not groups.is_normal(G, H):
        return False
    for c in A.classes:
        if c[0] in H:
            continue
        X = frozenset(c)
        if G.product_set(H, X) != X:
            return False
    return True


def wreath(G: FiniteGroup, H, A_H: SRing, A_Q: SRing) -> SRing:
    """Wreath product of ``A_H`` (over ``H``) and ``A_Q`` (over ``G/H``).

    ``A_H`` must live on ``groups.induced_group(G, H)`` and ``A_Q`` on
    ``groups.quotient_group(G, G, H)``.  ``H = {e}`` and ``H = G`` give a copy of
    the single non-trivial operand.
    """
    H = frozenset(H)
    if G.closure(H) != H or not groups.is_normal(G, H):
        raise ValueError("H must be a normal subgroup")
    sub, embed = groups.induced_group(G, H)
    Q, pi = groups.quotient_group(G, range(G.order), H)
    if not A_H.group.same_group(sub):
        raise ValueError("A_H is not an S-ring over H")
    if not A_Q.group.same_group(Q):
        raise ValueError("A_Q is not an S-ring over G/H")
    classes = [[embed[x] for x in c] for c in A_H.classes]
    for c in A_Q.classes[1:]:
        cs = set(c)
        classes.append([x for x in range(G.order) if pi[x] in cs])
    return verify_sring(G, classes)


def cyclic_subgroup_of_dihedral(G: FiniteGroup) -> frozenset[int]:
    if G.kind != "dihedral":
        raise ValueError("expected a dihedral group")
    return frozenset(range(G.param))


def from_difference_set(G: FiniteGroup, D) -> SRing:
    """The rank-4 S-ring with classes ``{e}, A#, bD, b(A minus D)`` over ``D_2p``.

    ``D`` is given by exponents ``i`` of ``a^i``; ``b a^i = a^{-i} b`` has index
    ``p + (-i mod p)``.
    """
    if G.kind != "dihedral":
        raise ValueError("A(D) is defined over a dihedral group")
    p = G.param
    D = sorted(set(int(d) % p for d in D))
    if not 2 <= len(D) <= p - 2:
        raise ValueError("D must satisfy 2 <= |D| <= p-2")
    bD = [p + (-d) % p for d in D]
    rest = [x for x in range(p, 2 * p) if x not in bD]
    return verify_sring(G, [[0], list(range(1, p)), bD, rest])
