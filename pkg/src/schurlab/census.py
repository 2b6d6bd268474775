"""Exhaustive enumeration of all S-rings over a small group.

The search keeps, at every node, the coarsest S-ring ``Q`` compatible with the
decisions made so far, plus the set of basic sets already decided.  Every
S-ring ``F`` below the node refines ``Q``.  A node picks the smallest
undecided cell of ``Q`` and branches over the basic set ``X`` of ``F`` that
contains the cell's least element; the closure of ``Q`` with ``X`` as an extra
seed must keep ``X`` and every decided class whole.  A leaf is reached when
all classes of ``Q`` are decided, and then ``F == Q``.  Each S-ring is
reached along exactly one path.

``naive_enumerate`` is the independent oracle: all set partitions filtered
through the axioms.
"""

from __future__ import annotations

import json
import logging
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import BudgetExceeded, __version__
from . import _kernels
from .groups import FiniteGroup, parse_group_spec
from .sring import SRing, from_labels, is_primitive, is_symmetric, parse_classes, stabilize, verify_sring

log = logging.getLogger(__name__)

MAX_ENUM_ORDER = 34
MAX_NAIVE_ORDER = 14
DEFAULT_NODE_BUDGET = 10**9
# subsets of a single cell examined by the candidate kernel at one node
CELL_SUBSET_LIMIT = 2**31


@dataclass
class CensusEntry:
    sring: SRing
    rank: int
    symmetric: bool
    primitive: bool


@dataclass
class SRingCensus:
    group: FiniteGroup
    entries: list[CensusEntry]
    nodes: int = 0
    candidates: int = 0
    seconds: float = 0.0
    method: str = "search"
    extra: dict = field(default_factory=dict)

    @property
    def srings(self) -> list[SRing]:
        return [e.sring for e in self.entries]

    def __len__(self):
        return len(self.entries)

    def keys(self) -> set:
        return {e.sring.classes for e in self.entries}


def census_sort_key(A: SRing):
    return (A.rank, A.classes)


def _make_census(G, srings, **kw) -> SRingCensus:
    srings = sorted(srings, key=census_sort_key)
    entries = [CensusEntry(A, A.rank, is_symmetric(A), is_primitive(A)) for A in srings]
    return SRingCensus(G, entries, **kw)


# -- main search -----------------------------------------------------------------


def _mask_of(elems) -> int:
    m = 0
    for x in elems:
        m |= 1 << int(x)
    return m


def _elements_of(mask: int, n: int) -> list[int]:
    return [x for x in range(n) if (mask >> x) & 1]


class _Search:
    def __init__(self, G: FiniteGroup, node_budget: int):
        if G.order > MAX_ENUM_ORDER:
            raise ValueError(f"enumeration is capped at order {MAX_ENUM_ORDER}")
        self.G = G
        self.n = G.order
        self.mul = np.ascontiguousarray(G.mul, dtype=np.int64)
        self.inv = np.ascontiguousarray(G.inv, dtype=np.int64)
        self.budget = node_budget
        self.nodes = 0
        self.candidates = 0

    def root(self):
        labels = np.zeros(self.n, dtype=np.int64)
        if self.n > 1:
            labels[1:] = 1
        labels = stabilize(self.G, labels)
        return labels, 1, 1  # decided mask {e}, one decided class

    def _pick_cell(self, labels, decided: int):
        best = None
        cells: dict[int, list[int]] = {}
        for x in range(self.n):
            cells.setdefault(int(labels[x]), []).append(x)
        for cell in cells.values():
            if (decided >> cell[0]) & 1:
                continue
            if len(cell) == 1:
                continue
            key = (len(cell), cell[0])
            if best is None or key < best[0]:
                best = (key, cell)
        return None if best is None else best[1]

    def _units(self, cell: list[int]):
        """Option table for subsets of ``cell`` containing its least element."""
        g = cell[0]
        inv = self.inv
        cset = set(cell)
        symmetric_cell = all(int(inv[x]) in cset for x in cell)
        tables = []
        if not symmetric_cell:
            opts = [[1 << g]] + [[0, 1 << x] for x in cell[1:]]
            tables.append(opts)
            return tables
        singles = [x for x in cell if int(inv[x]) == x]
        pairs = []
        for x in cell:
            y = int(inv[x])
            if x < y:
                pairs.append((x, y))
        # X = X^{-1}
        opts = []
        for x in singles:
            opts.append([1 << x] if x == g else [0, 1 << x])
        for x, y in pairs:
            both = (1 << x) | (1 << y)
            opts.append([both] if g in (x, y) else [0, both])
        tables.append(opts)
        # X and X^{-1} disjoint: only possible when g is not an involution
        if int(inv[g]) != g:
            opts = []
            for x, y in pairs:
                if g in (x, y):
                    opts.append([1 << g])
                else:
                    opts.append([0, 1 << x, 1 << y])
            tables.append(opts)
        return tables

    def candidates_for(self, labels, cell):
        r = int(labels.max()) + 1
        out = []
        for opts in self._units(cell):
            U = len(opts)
            arr = np.zeros((max(U, 1), 3), dtype=np.uint64)
            nopt = np.ones(max(U, 1), dtype=np.int64)
            for u, o in enumerate(opts):
                nopt[u] = len(o)
                for k, m in enumerate(o):
                    arr[u, k] = np.uint64(m)
            masks, cnt, examined = _kernels.candidate_classes(
                arr, nopt, self.mul, self.inv, labels, r, CELL_SUBSET_LIMIT
            )
            if cnt < 0:
                raise BudgetExceeded("candidate subsets of one cell", CELL_SUBSET_LIMIT)
            self.candidates += int(examined)
            out.extend(int(m) for m in masks)
        return sorted(set(out))

    def refine(self, labels, decided: int, ndecided: int, xmask: int):
        """Closure with ``X`` as a seed; None when X or a decided class splits."""
        n = self.n
        xs = _elements_of(xmask, n)
        ind = np.zeros(n, dtype=np.int64)
        ind[xs] = 1
        inv_ind = ind[self.inv]
        new = stabilize(self.G, np.column_stack([labels, ind, inv_ind]))
        xl = new[xs]
        if (xl != xl[0]).any() or int((new == xl[0]).sum()) != len(xs):
            return None
        ximask = _mask_of(int(self.inv[x]) for x in xs)
        dec_elems = _elements_of(decided, n)
        if len(np.unique(new[dec_elems])) != ndecided:
            return None
        added = 1 if ximask == xmask else 2
        return new, decided | xmask | ximask, ndecided + added

    def expand(self, labels, decided: int, ndecided: int):
        """Children of a node, as (labels, decided, ndecided)."""
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded("S-ring enumeration nodes", self.budget)
        # singleton cells are decided for free
        counts = np.bincount(labels)
        for x in range(self.n):
            if counts[labels[x]] == 1 and not (decided >> x) & 1:
                decided |= 1 << x
                ndecided += 1
        cell = self._pick_cell(labels, decided)
        if cell is None:
            return None, (labels, decided, ndecided)
        children = []
        for xmask in self.candidates_for(labels, cell):
            res = self.refine(labels, decided, ndecided, xmask)
            if res is not None:
                children.append(res)
        return children, None

    def run(self, state, found: list):
        stack = [state]
        while stack:
            children, leaf = self.expand(*stack.pop())
            if leaf is not None:
                found.append(from_labels(self.G, leaf[0]))
            else:
                stack.extend(reversed(children))


def enumerate_srings(
    G: FiniteGroup,
    node_budget: int = DEFAULT_NODE_BUDGET,
    checkpoint: str | os.PathLike | None = None,
) -> SRingCensus:
    """All S-rings over ``G`` (order at most 34).

    With ``checkpoint`` set, progress over the first-level branches is saved
    to that JSON file after each branch and resumed from it on the next call.
    """
    t0 = time.perf_counter()
    s = _Search(G, node_budget)
    found: list[SRing] = []
    children, leaf = s.expand(*s.root())
    if leaf is not None:
        found.append(from_labels(G, leaf[0]))
        children = []
    done = 0
    ck = Path(checkpoint) if checkpoint else None
    if ck and ck.exists():
        state = json.loads(ck.read_text())
        if state.get("group") == G.spec and state.get("branches") == len(children):
            done = state["done"]
            found = [verify_sring(G, parse_classes(t)) for t in state["found"]]
            s.nodes = state.get("nodes", 0)
            log.info("resuming %s at branch %d/%d", G.spec, done, len(children))
    for i in range(done, len(children)):
        s.run(children[i], found)
        if ck:
            ck.write_text(
                json.dumps(
                    {
                        "group": G.spec,
                        "branches": len(children),
                        "done": i + 1,
                        "nodes": s.nodes,
                        "found": [A.serialize() for A in found],
                    }
                )
            )
    unique = {A.classes: A for A in found}
    if len(unique) != len(found):
        raise AssertionError("search produced a duplicate S-ring")
    return _make_census(
        G,
        unique.values(),
        nodes=s.nodes,
        candidates=s.candidates,
        seconds=time.perf_counter() - t0,
        method="search",
    )


def naive_enumerate(G: FiniteGroup, limit: int = 10**9) -> SRingCensus:
    """Oracle: filter every partition with ``{e}`` a singleton (order <= 14)."""
    if G.order > MAX_NAIVE_ORDER:
        raise ValueError(f"naive enumeration is capped at order {MAX_NAIVE_ORDER}")
    t0 = time.perf_counter()
    rows, status, visited = _kernels.naive_partitions(
        np.ascontiguousarray(G.mul, dtype=np.int64), np.ascontiguousarray(G.inv, dtype=np.int64), limit
    )
    if status < 0:
        raise BudgetExceeded("naive partitions", limit)
    srings = []
    for row in rows:
        classes: dict[int, list[int]] = {}
        for x, c in enumerate(row):
            classes.setdefault(int(c), []).append(x)
        srings.append(verify_sring(G, list(classes.values())))
    return _make_census(
        G, srings, nodes=int(visited), seconds=time.perf_counter() - t0, method="naive"
    )


# -- census files ------------------------------------------------------------------

CENSUS_MAGIC = "# schurlab census v1"


def census_text(census: SRingCensus) -> str:
    lines = [
        CENSUS_MAGIC,
        f"# tool schurlab {__version__}",
        f"group {census.group.spec}",
        f"count {len(census.entries)}",
    ]
    for e in census.entries:
        lines.append(e.sring.serialize())
    return "\n".join(lines) + "\n"


def write_census(census: SRingCensus, path) -> None:
    Path(path).write_text(census_text(census), encoding="utf-8")


def read_census(path) -> SRingCensus:
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != CENSUS_MAGIC:
        raise ValueError(f"{path}: not a census file")
    body = [ln for ln in lines if not ln.startswith("#")]
    if not body[0].startswith("group ") or not body[1].startswith("count "):
        raise ValueError(f"{path}: malformed header")
    G = parse_group_spec(body[0].split(None, 1)[1])
    count = int(body[1].split()[1])
    srings = [verify_sring(G, parse_classes(ln)) for ln in body[2:]]
    if len(srings) != count:
        raise ValueError(f"{path}: expected {count} entries, found {len(srings)}")
    return _make_census(G, srings, method="file")
