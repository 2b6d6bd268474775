"""Automorphisms of S-rings, schurity and combinatorial isomorphism.

An S-ring is turned into a complete colored digraph on the group, the color of
``(x, y)`` being the basic set containing ``y x^{-1}``.  Its color-preserving
permutations form ``Aut(A)``, which always contains the right translations, so
``Aut(A) = G_r Aut(A)_e`` and only the stabilizer of ``e`` is searched for.

The search individualizes one vertex at a time and refines the ordered
partition by color degrees into each cell.  Generators of ``Aut(A)_e`` are
found level by level from the deepest level up, which gives the exact orbit
length at each level and so the exact order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import BudgetExceeded
from .permgrp import (
    PermGroup,
    RegularCyclicVerdict,
    contains_regular_cyclic,
    is_full_cycle,
    right_regular_representation,
)
from .sring import SRing

MAX_VERTICES = 80
DEFAULT_NODE_BUDGET = 2_000_000
DEFAULT_ELEMENT_BUDGET = 10**7
# automorphism groups up to this order are scanned element by element
ELEMENT_SCAN_LIMIT = 100_000


@dataclass(frozen=True)
class ColorGraph:
    n: int
    colors: np.ndarray  # colors[x, y] = class index of y * x^{-1}
    ncolors: int

    def is_automorphism(self, perm) -> bool:
        f = np.asarray(perm, dtype=np.int64)
        return bool(np.array_equal(self.colors[np.ix_(f, f)], self.colors))


def color_graph(A: SRing) -> ColorGraph:
    G = A.group
    n = G.order
    # y * x^{-1} for all (x, y)
    quot = G.mul[np.arange(n)[None, :], G.inv[:, None]]
    colors = np.asarray(A.class_of)[quot]
    colors.setflags(write=False)
    return ColorGraph(n, colors, A.rank)


# -- partition refinement --------------------------------------------------------


def _dense_rank_rows(sig: np.ndarray):
    """Dense lexicographic ranks of the rows of ``sig`` and the sorted distinct rows."""
    order = np.lexsort(sig.T[::-1])
    s = sig[order]
    step = np.any(s[1:] != s[:-1], axis=1)
    ranks_sorted = np.concatenate([[0], np.cumsum(step)])
    out = np.empty(sig.shape[0], dtype=np.int64)
    out[order] = ranks_sorted
    return out, s[np.concatenate([[True], step])]


class _Refiner:
    def __init__(self, g: ColorGraph, counter: list, budget: int):
        self.g = g
        self.n = g.n
        self.r = g.ncolors
        self.counter = counter
        self.budget = budget

    def refine(self, cell: np.ndarray):
        """Equitable refinement of an ordered partition and an invariant trace."""
        self.counter[0] += 1
        if self.counter[0] > self.budget:
            raise BudgetExceeded("automorphism search nodes", self.budget)
        n, r = self.n, self.r
        trace = []
        k = int(cell.max()) + 1
        while True:
            idx = self.g.colors * k + cell[None, :] + (np.arange(n) * (r * k))[:, None]
            counts = np.bincount(idx.ravel(), minlength=n * r * k).reshape(n, r * k)
            new, rows = _dense_rank_rows(np.column_stack([cell, counts]))
            trace.append(rows.tobytes())
            k2 = int(new.max()) + 1
            cell = new
            if k2 == k:
                return cell, tuple(trace)
            k = k2

    @staticmethod
    def individualize(cell: np.ndarray, v: int) -> np.ndarray:
        lab = cell * 2 + 1
        lab[v] = cell[v] * 2
        _, out = np.unique(lab, return_inverse=True)
        return out.astype(np.int64)


def _target_cell(cell: np.ndarray):
    """Smallest non-singleton cell (lowest index on ties), or None if discrete."""
    sizes = np.bincount(cell)
    best = None
    for c, s in enumerate(sizes):
        if s > 1 and (best is None or s < sizes[best]):
            best = c
    return best


@dataclass
class _PathNode:
    cell: np.ndarray
    trace: tuple
    target: int | None
    vertex: int | None  # vertex individualized to reach the next node


class _Engine:
    """First path in graph ``g1`` and leaf matching in graph ``g2``."""

    def __init__(self, g1: ColorGraph, g2: ColorGraph, budget: int, root: int = 0):
        self.g1, self.g2 = g1, g2
        self.counter = [0]
        self.R1 = _Refiner(g1, self.counter, budget)
        self.R2 = _Refiner(g2, self.counter, budget)
        self.root = root
        self.path = self._first_path()

    def _first_path(self) -> list[_PathNode]:
        n = self.g1.n
        cell, trace = self.R1.refine(self.R1.individualize(np.zeros(n, dtype=np.int64), self.root))
        path = []
        while True:
            t = _target_cell(cell)
            if t is None:
                path.append(_PathNode(cell, trace, None, None))
                return path
            v = int(np.nonzero(cell == t)[0][0])
            path.append(_PathNode(cell, trace, t, v))
            cell, trace = self.R1.refine(self.R1.individualize(cell, v))

    @property
    def leaf(self) -> np.ndarray:
        return self.path[-1].cell

    def _leaf_map(self, cell2: np.ndarray) -> np.ndarray:
        pos2 = np.empty(self.g2.n, dtype=np.int64)
        pos2[cell2] = np.arange(self.g2.n)
        return pos2[self.leaf]

    def _ok(self, phi) -> bool:
        return bool(np.array_equal(self.g2.colors[np.ix_(phi, phi)], self.g1.colors))

    def match_from(self, depth: int, cell2: np.ndarray):
        """A leaf below ``cell2`` (at path depth ``depth``) giving an isomorphism."""
        node = self.path[depth]
        if node.target is None:
            phi = self._leaf_map(cell2)
            return phi if self._ok(phi) else None
        for w in np.nonzero(cell2 == node.target)[0]:
            nxt, tr = self.R2.refine(self.R2.individualize(cell2, int(w)))
            if tr != self.path[depth + 1].trace:
                continue
            phi = self.match_from(depth + 1, nxt)
            if phi is not None:
                return phi
        return None

    def match_root(self):
        cell, tr = self.R2.refine(self.R2.individualize(np.zeros(self.g2.n, dtype=np.int64), self.root))
        if tr != self.path[0].trace:
            return None
        return self.match_from(0, cell)


def _orbit(gens, x: int) -> set[int]:
    orb = {x}
    frontier = [x]
    while frontier:
        nxt = []
        for y in frontier:
            for g in gens:
                z = int(g[y])
                if z not in orb:
                    orb.add(z)
                    nxt.append(z)
        frontier = nxt
    return orb


@dataclass
class StabilizerData:
    """Generators and exact order of ``Aut(A)_e`` with the search statistics."""

    gens: list[tuple[int, ...]]
    order: int
    base: list[int]
    orbit_lengths: list[int]
    nodes: int


def stabilizer_of_identity(A: SRing, node_budget: int = DEFAULT_NODE_BUDGET) -> StabilizerData:
    g = color_graph(A)
    if g.n > MAX_VERTICES:
        raise ValueError(f"automorphism search is capped at {MAX_VERTICES} vertices")
    eng = _Engine(g, g, node_budget)
    path = eng.path
    gens: list[tuple[int, ...]] = []
    lengths = [1] * (len(path) - 1)
    for i in range(len(path) - 2, -1, -1):
        node = path[i]
        v = node.vertex
        orb = _orbit(gens, v)
        for w in np.nonzero(node.cell == node.target)[0]:
            w = int(w)
            if w in orb:
                continue
            nxt, tr = eng.R2.refine(eng.R2.individualize(node.cell, w))
            if tr != path[i + 1].trace:
                continue
            phi = eng.match_from(i + 1, nxt)
            if phi is not None:
                gens.append(tuple(int(x) for x in phi))
                orb = _orbit(gens, v)
        lengths[i] = len(orb)
    order = 1
    for L in lengths:
        order *= L
    base = [p.vertex for p in path[:-1]]
    return StabilizerData(gens, order, base, lengths, eng.counter[0])


def automorphism_group(A: SRing, node_budget: int = DEFAULT_NODE_BUDGET) -> PermGroup:
    """``Aut(A)`` as a permutation group on element indices."""
    st = stabilizer_of_identity(A, node_budget)
    Gr = right_regular_representation(A.group)
    K = PermGroup.from_generators(A.group.order, list(Gr.gens) + st.gens)
    if K.order() != A.group.order * st.order:
        raise AssertionError("stabilizer order disagrees with the group built from generators")
    return K


@dataclass(frozen=True)
class SchurityVerdict:
    """``schurian`` is True, False or None (budget exhausted)."""

    schurian: bool | None
    aut_order: int | None = None
    orbit_sizes: tuple[int, ...] = ()
    nodes: int = 0
    reason: str = ""

    @property
    def label(self) -> str:
        return {True: "yes", False: "no", None: "unknown"}[self.schurian]


def stabilizer_orbits(n: int, gens) -> list[tuple[int, ...]]:
    seen: set[int] = set()
    out = []
    for x in range(n):
        if x not in seen:
            o = _orbit(gens, x)
            seen |= o
            out.append(tuple(sorted(o)))
    return out


def is_schurian(A: SRing, node_budget: int = DEFAULT_NODE_BUDGET) -> SchurityVerdict:
    """Schurian iff the orbits of ``Aut(A)_e`` are exactly the basic sets."""
    try:
        st = stabilizer_of_identity(A, node_budget)
    except BudgetExceeded as exc:
        return SchurityVerdict(None, reason=str(exc))
    orbs = stabilizer_orbits(A.group.order, st.gens)
    for o in orbs:
        if len(set(int(A.class_of[x]) for x in o)) != 1:
            raise AssertionError("an orbit of Aut(A)_e meets two basic sets")
    sizes = tuple(sorted(len(o) for o in orbs))
    return SchurityVerdict(
        len(orbs) == A.rank, A.group.order * st.order, sizes, st.nodes
    )


# -- isomorphism -------------------------------------------------------------------


def algebraic_isomorphisms(A: SRing, B: SRing, limit: int = 10**6):
    """Class bijections preserving sizes, inverses and structure constants."""
    from .sring import structure_constants

    if A.group.order != B.group.order or A.rank != B.rank or sorted(A.sizes) != sorted(B.sizes):
        return
    ca, cb = structure_constants(A).c, structure_constants(B).c
    r = A.rank
    ia, ib = A.inverse_class, B.inverse_class
    sigma = [-1] * r
    used = [False] * r
    count = [0]

    def consistent(k):
        for X in range(k + 1):
            for Y in range(k + 1):
                for Z in range(k + 1):
                    if k not in (X, Y, Z):
                        continue
                    if ca[X, Y, Z] != cb[sigma[X], sigma[Y], sigma[Z]]:
                        return False
        return True

    def rec(k):
        if k == r:
            count[0] += 1
            if count[0] > limit:
                raise BudgetExceeded("algebraic isomorphisms", limit)
            yield tuple(sigma)
            return
        for t in range(r):
            if used[t] or B.sizes[t] != A.sizes[k]:
                continue
            j = ia[k]
            if j < k and sigma[j] != ib[t]:
                continue
            sigma[k] = t
            used[t] = True
            if consistent(k):
                yield from rec(k + 1)
            used[t] = False
            sigma[k] = -1

    yield from rec(0)


def are_isomorphic(A: SRing, B: SRing, node_budget: int = DEFAULT_NODE_BUDGET):
    """A combinatorial isomorphism ``f`` (as an image tuple) or None.

    Raises BudgetExceeded when the search is cut short.
    """
    if A.group.order != B.group.order:
        return None
    ga = color_graph(A)
    gb = color_graph(B)
    for sigma in algebraic_isomorphisms(A, B):
        # recolor B by sigma^{-1} so that matching colors are equal
        back = np.empty(B.rank, dtype=np.int64)
        back[list(sigma)] = np.arange(A.rank)
        g2 = ColorGraph(gb.n, back[gb.colors], gb.ncolors)
        phi = _Engine(ga, g2, node_budget).match_root()
        if phi is not None:
            return tuple(int(x) for x in phi)
    return None


# -- regular cyclic subgroups ------------------------------------------------------


def _stabilizer_gens(n: int, gens, y: int) -> list:
    if not gens:
        return []
    return PermGroup.from_generators(n, gens, base=[y]).strong_generators(1)


def find_regular_cycle(A: SRing, stab_gens=None, node_budget: int = DEFAULT_NODE_BUDGET):
    """An ``n``-cycle in ``Aut(A)``, found by labelling the group as ``Z_n``.

    An ``n``-cycle ``c`` with ``c(x_i) = x_{i+1}`` is color preserving iff the
    color of ``(x_i, x_j)`` depends only on ``j - i mod n``.  By transitivity
    ``x_0 = e``.  Conjugating by automorphisms fixing ``x_0, ..., x_{k-1}``
    keeps the prefix, so ``x_k`` only runs over orbit representatives of that
    pointwise stabilizer; ``stab_gens`` generates ``Aut(A)_e`` (computed when
    omitted).  Returns ``(cycle or None, nodes)``; raises BudgetExceeded.
    """
    g = color_graph(A)
    C = g.colors
    n = g.n
    if n == 1:
        return (0,), 0
    if stab_gens is None:
        stab_gens = stabilizer_of_identity(A, node_budget).gens
    nodes = [0]
    xs = [0] * n
    kappa = [-1] * n
    used = np.zeros(n, dtype=bool)
    used[0] = True

    def rec(k: int, gens):
        nodes[0] += 1
        if nodes[0] > node_budget:
            raise BudgetExceeded("regular cycle search nodes", node_budget)
        if k == n:
            cyc = np.empty(n, dtype=np.int64)
            for i in range(n):
                cyc[xs[i]] = xs[(i + 1) % n]
            return cyc if g.is_automorphism(cyc) else None
        ok = ~used
        for i in range(1, k):
            ok &= C[xs[i], :] == kappa[k - i]
            d = n - (k - i)
            if d < k:
                ok &= C[:, xs[i]] == kappa[d]
        if n - k < k:
            ok &= C[:, 0] == kappa[n - k]
        seen: set[int] = set()
        for y in np.nonzero(ok)[0]:
            y = int(y)
            if y in seen:
                continue
            if gens:
                seen |= _orbit(gens, y)
            xs[k] = y
            kappa[k] = int(C[0, y])
            used[y] = True
            res = rec(k + 1, _stabilizer_gens(n, gens, y))
            used[y] = False
            if res is not None:
                return res
        kappa[k] = -1
        return None

    res = rec(1, list(stab_gens))
    return (None if res is None else tuple(int(x) for x in res)), nodes[0]


def isomorphic_to_sring_over_cyclic(
    A: SRing, node_budget: int = DEFAULT_NODE_BUDGET
) -> RegularCyclicVerdict:
    """Does ``Aut(A)`` contain a regular cyclic subgroup?  Unknown on budget.

    Small automorphism groups are scanned element by element; larger ones go
    through the labelling search.
    """
    try:
        st = stabilizer_of_identity(A, node_budget)
        n = A.group.order
        if n * st.order <= ELEMENT_SCAN_LIMIT:
            K = PermGroup.from_generators(n, list(right_regular_representation(A.group).gens) + st.gens)
            return contains_regular_cyclic(K, n, budget=ELEMENT_SCAN_LIMIT)
        cyc, nodes = find_regular_cycle(A, st.gens, node_budget)
    except BudgetExceeded:
        return RegularCyclicVerdict(None, None, 0, False)
    if cyc is None:
        return RegularCyclicVerdict(False, None, nodes, True)
    assert is_full_cycle(cyc)
    return RegularCyclicVerdict(True, cyc, nodes, True)


def regular_cyclic_by_elements(A: SRing, budget: int = DEFAULT_ELEMENT_BUDGET) -> RegularCyclicVerdict:
    """The same question answered by scanning the elements of ``Aut(A)``."""
    return contains_regular_cyclic(automorphism_group(A), A.group.order, budget=budget)
