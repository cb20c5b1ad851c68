"""Dense bitset graphs, exact clique counting and violation ledgers.

Each vertex row is a Python ``int`` used as a bit-set over vertex indices, so
neighbourhood intersection is a single ``&`` and degrees are ``bit_count()``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator

MAX_VERTICES = 512


class DomainError(ValueError):
    """Raised when an operation is called outside its domain."""


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class RamseyParams:
    """Clique bound ``r``, independent-set bound ``s`` and the current best witness size."""

    r: int
    s: int
    n_sota: int = 0

    def __post_init__(self):
        if self.r < 2 or self.s < 2:
            raise DomainError(f"r and s must be >= 2, got r={self.r} s={self.s}")
        if self.n_sota < 0:
            raise DomainError("n_sota must be nonnegative")


class Graph:
    """Simple undirected graph on ``n`` vertices with bit-set adjacency rows.

    Counting methods never mutate; ``toggle`` mutates in place and is meant for
    search engines that own their working copy.
    """

    __slots__ = ("n", "adj")

    def __init__(self, n: int, adj: list[int] | None = None):
        if not 1 <= n <= MAX_VERTICES:
            raise DomainError(f"vertex count must be in [1, {MAX_VERTICES}], got {n}")
        self.n = n
        self.adj = [0] * n if adj is None else list(adj)
        if len(self.adj) != n:
            raise DomainError("adjacency must have exactly n rows")

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        g = cls(n)
        for u, v in edges:
            if u == v:
                raise DomainError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u},{v}) out of range for n={n}")
            g.adj[u] |= 1 << v
            g.adj[v] |= 1 << u
        return g

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, [full ^ (1 << v) for v in range(n)])

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n)

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def from_matrix(cls, rows: list[str] | list[list[int]]) -> "Graph":
        n = len(rows)
        adj = []
        for row in rows:
            m = 0
            for j, c in enumerate(row):
                if c in (1, "1"):
                    m |= 1 << j
            adj.append(m)
        g = cls(n, adj)
        g.check()
        return g

    # -- basic queries ------------------------------------------------------
    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    def num_edges(self) -> int:
        return sum(self.degrees()) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1))]

    def neighbors(self, v: int) -> list[int]:
        return list(iter_bits(self.adj[v]))

    def complement_rows(self) -> list[int]:
        full = self.full_mask
        return [full ^ row ^ (1 << v) for v, row in enumerate(self.adj)]

    def complement(self) -> "Graph":
        return Graph(self.n, self.complement_rows())

    def copy(self) -> "Graph":
        return Graph(self.n, self.adj)

    def toggle(self, u: int, v: int) -> None:
        if u == v:
            raise DomainError("cannot flip a self-pair")
        self.adj[u] ^= 1 << v
        self.adj[v] ^= 1 << u

    def add_vertex(self, neighborhood: int) -> "Graph":
        """Return a new graph with vertex ``n`` adjacent to the bits of ``neighborhood``."""
        if neighborhood >> self.n:
            raise DomainError("neighbourhood refers to vertices outside the graph")
        adj = [row | ((neighborhood >> v & 1) << self.n) for v, row in enumerate(self.adj)]
        adj.append(neighborhood)
        return Graph(self.n + 1, adj)

    def induced(self, vertices: list[int]) -> "Graph":
        index = {v: i for i, v in enumerate(vertices)}
        adj = []
        for v in vertices:
            adj.append(mask_of(index[u] for u in iter_bits(self.adj[v]) if u in index))
        return Graph(len(vertices), adj)

    def check(self) -> None:
        """Raise ``DomainError`` unless the rows are symmetric and loop-free."""
        full = self.full_mask
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise DomainError(f"row {v} has bits beyond n={self.n}")
            if row >> v & 1:
                raise DomainError(f"self-loop at vertex {v}")
            for u in iter_bits(row):
                if not self.adj[u] >> v & 1:
                    raise DomainError(f"asymmetric pair ({v},{u})")

    def to_rows(self) -> list[str]:
        return ["".join("1" if row >> j & 1 else "0" for j in range(self.n)) for row in self.adj]

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, tuple(self.adj)))

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.num_edges()})"


# -- counting ---------------------------------------------------------------

def _count_in(rows: list[int], cand: int, k: int, limit: int | None = None) -> int:
    """Number of ``k``-cliques inside ``cand`` (a vertex mask) w.r.t. ``rows``."""
    if k == 0:
        return 1
    if k == 1:
        return cand.bit_count()
    if cand.bit_count() < k:
        return 0
    total = 0
    if k == 2:
        while cand:
            low = cand & -cand
            cand ^= low
            total += (cand & rows[low.bit_length() - 1]).bit_count()
            if limit is not None and total >= limit:
                return total
        return total
    while cand:
        if cand.bit_count() < k:
            break
        low = cand & -cand
        cand ^= low
        total += _count_in(rows, cand & rows[low.bit_length() - 1], k - 1,
                           None if limit is None else limit - total)
        if limit is not None and total >= limit:
            return total
    return total


def _check_k(g: Graph, k: int) -> None:
    if not 1 <= k <= g.n:
        raise DomainError(f"subset size k must be in [1, {g.n}], got {k}")


def count_cliques(g: Graph, k: int, limit: int | None = None) -> int:
    """Exact number of ``k``-cliques; with ``limit`` the count stops once it reaches ``limit``."""
    _check_k(g, k)
    return _count_in(g.adj, g.full_mask, k, limit)


def count_independent_sets(g: Graph, k: int, limit: int | None = None) -> int:
    _check_k(g, k)
    return _count_in(g.complement_rows(), g.full_mask, k, limit)


def count_cliques_within(rows: list[int], mask: int, k: int, limit: int | None = None) -> int:
    """Count ``k``-cliques of the graph given by ``rows`` restricted to ``mask``."""
    if k < 0:
        raise DomainError("k must be nonnegative")
    return _count_in(rows, mask, k, limit)


def _enumerate_in(rows: list[int], cand: int, k: int, prefix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    if k == 0:
        yield prefix
        return
    while cand:
        if cand.bit_count() < k:
            return
        low = cand & -cand
        cand ^= low
        v = low.bit_length() - 1
        yield from _enumerate_in(rows, cand & rows[v], k - 1, prefix + (v,))


def iter_cliques(rows: list[int], mask: int, k: int) -> Iterator[tuple[int, ...]]:
    """Yield ``k``-cliques inside ``mask`` as ascending tuples."""
    return _enumerate_in(rows, mask, k, ())


def find_clique(rows: list[int], mask: int, k: int) -> tuple[int, ...] | None:
    return next(iter_cliques(rows, mask, k), None)


# -- independence number ------------------------------------------------------

class _Found(Exception):
    pass


class _OutOfNodes(Exception):
    pass


def max_clique(rows: list[int], mask: int | None = None, lower: int = 0,
               stop_at: int | None = None) -> list[int]:
    """Maximum clique by branch-and-bound with a greedy sequential colouring bound.

    Vertices are relabelled by non-increasing degree so that the bitset colouring
    visits high-degree vertices first. Only cliques larger than ``lower`` are
    reported (an empty list means none exists). With ``stop_at`` the search
    returns as soon as a clique of that size is found.
    """
    return max_clique_bounded(rows, mask, lower, stop_at)[0]


def max_clique_bounded(rows: list[int], mask: int | None = None, lower: int = 0,
                       stop_at: int | None = None,
                       node_limit: int | None = None) -> tuple[list[int], bool]:
    """``max_clique`` with an optional cap on search nodes.

    Returns (best clique found, finished).  When ``finished`` is False the
    clique is only a lower bound on the maximum.
    """
    n = len(rows)
    if mask is None:
        mask = (1 << n) - 1
    verts = list(iter_bits(mask))
    if not verts:
        return [], True
    verts.sort(key=lambda v: (-(rows[v] & mask).bit_count(), v))
    pos = {v: i for i, v in enumerate(verts)}
    m = len(verts)
    radj = [0] * m
    for i, v in enumerate(verts):
        radj[i] = mask_of(pos[u] for u in iter_bits(rows[v] & mask))

    best: list[int] = []
    best_size = lower
    nodes = 0

    def colour(p: int) -> tuple[list[int], list[int]]:
        order: list[int] = []
        cols: list[int] = []
        k = 0
        u = p
        while u:
            k += 1
            q = u
            while q:
                low = q & -q
                v = low.bit_length() - 1
                q &= ~radj[v]
                q ^= low
                u ^= low
                order.append(v)
                cols.append(k)
        return order, cols

    def expand(clique: list[int], p: int) -> None:
        nonlocal best, best_size, nodes
        nodes += 1
        if node_limit is not None and nodes > node_limit:
            raise _OutOfNodes
        order, cols = colour(p)
        size = len(clique)
        for i in range(len(order) - 1, -1, -1):
            if size + cols[i] <= best_size:
                return
            v = order[i]
            clique.append(v)
            np_ = p & radj[v]
            if np_:
                expand(clique, np_)
            elif size + 1 > best_size:
                best_size = size + 1
                best = list(clique)
                if stop_at is not None and best_size >= stop_at:
                    raise _Found
            clique.pop()
            p &= ~(1 << v)

    finished = True
    try:
        expand([], (1 << m) - 1)
    except _Found:
        pass
    except _OutOfNodes:
        finished = False
    return sorted(verts[i] for i in best), finished


def independence_number(g: Graph) -> int:
    """Exact alpha(G) via maximum clique of the complement."""
    return len(max_clique(g.complement_rows()))


def maximum_independent_set(g: Graph) -> list[int]:
    return max_clique(g.complement_rows())


def greedy_alpha(g: Graph, trials: int, seed: int) -> int:
    """Best maximal independent set size over ``trials`` random vertex orders."""
    if trials < 1:
        raise DomainError("trials must be >= 1")
    rng = random.Random(seed)
    order = list(range(g.n))
    best = 0
    adj = g.adj
    for _ in range(trials):
        rng.shuffle(order)
        avail = g.full_mask
        size = 0
        for v in order:
            if avail >> v & 1:
                size += 1
                avail &= ~adj[v]
                avail ^= 1 << v
                if not avail:
                    break
        if size > best:
            best = size
    return best


# -- deltas ---------------------------------------------------------------------

def delta_clique_count(g: Graph, u: int, v: int, k: int) -> int:
    """Signed change in the number of ``k``-cliques if pair (u, v) were flipped.

    Every affected clique contains both endpoints, so the magnitude is the
    number of (k-2)-cliques in the common neighbourhood.
    """
    if u == v:
        raise DomainError("u and v must differ")
    if k < 2:
        raise DomainError("k must be >= 2")
    common = g.adj[u] & g.adj[v]
    c = _count_in(g.adj, common, k - 2)
    return -c if g.has_edge(u, v) else c


def delta_independent_count(g: Graph, u: int, v: int, k: int, comp: list[int] | None = None) -> int:
    """Signed change in the number of independent ``k``-sets if (u, v) were flipped."""
    if u == v:
        raise DomainError("u and v must differ")
    if comp is None:
        comp = g.complement_rows()
    common = comp[u] & comp[v]
    c = _count_in(comp, common, k - 2)
    return c if g.has_edge(u, v) else -c


def flip_edge(g: Graph, u: int, v: int) -> Graph:
    """Copy of ``g`` with pair (u, v) toggled."""
    h = g.copy()
    h.toggle(u, v)
    return h


# -- violation ledger -----------------------------------------------------------

def _pairs(subset: tuple[int, ...]) -> Iterator[tuple[int, int]]:
    return combinations(subset, 2)


@dataclass
class ViolationLedger:
    """Explicit r-cliques and s-independent sets, plus per-pair membership counts."""

    r: int
    s: int
    cliques: set[tuple[int, ...]] = field(default_factory=set)
    indep_sets: set[tuple[int, ...]] = field(default_factory=set)
    edge_index: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return len(self.cliques) + len(self.indep_sets)

    def is_empty(self) -> bool:
        return not self.cliques and not self.indep_sets

    def _index(self, subset: tuple[int, ...], step: int) -> None:
        idx = self.edge_index
        for p in _pairs(subset):
            c = idx.get(p, 0) + step
            if c:
                idx[p] = c
            else:
                del idx[p]

    def add_clique(self, c: tuple[int, ...]) -> None:
        if c not in self.cliques:
            self.cliques.add(c)
            self._index(c, 1)

    def add_indep(self, c: tuple[int, ...]) -> None:
        if c not in self.indep_sets:
            self.indep_sets.add(c)
            self._index(c, 1)

    def apply_flip(self, g: Graph, u: int, v: int, comp: list[int] | None = None) -> None:
        """Update after pair (u, v) was flipped in ``g`` (``g`` is the post-flip graph).

        Only subsets containing both endpoints change membership.
        """
        if u > v:
            u, v = v, u
        if g.has_edge(u, v):
            dead = [c for c in self.indep_sets if u in c and v in c]
            for c in dead:
                self.indep_sets.discard(c)
                self._index(c, -1)
            for rest in iter_cliques(g.adj, g.adj[u] & g.adj[v], self.r - 2):
                self.add_clique(tuple(sorted(rest + (u, v))))
        else:
            dead = [c for c in self.cliques if u in c and v in c]
            for c in dead:
                self.cliques.discard(c)
                self._index(c, -1)
            if comp is None:
                comp = g.complement_rows()
            for rest in iter_cliques(comp, comp[u] & comp[v], self.s - 2):
                self.add_indep(tuple(sorted(rest + (u, v))))

    def weighted_pairs(self) -> tuple[list[tuple[int, int]], list[int]]:
        pairs = sorted(self.edge_index)
        return pairs, [self.edge_index[p] for p in pairs]

    def rebuild_index(self) -> dict[tuple[int, int], int]:
        idx: dict[tuple[int, int], int] = {}
        for c in list(self.cliques) + list(self.indep_sets):
            for p in _pairs(c):
                idx[p] = idx.get(p, 0) + 1
        return idx


def enumerate_violations(g: Graph, p: RamseyParams) -> ViolationLedger:
    """List every r-clique and every s-independent set of ``g``."""
    ledger = ViolationLedger(p.r, p.s)
    if p.r <= g.n:
        for c in iter_cliques(g.adj, g.full_mask, p.r):
            ledger.add_clique(c)
    if p.s <= g.n:
        for c in iter_cliques(g.complement_rows(), g.full_mask, p.s):
            ledger.add_indep(c)
    return ledger


def violation_counts(g: Graph, r: int, s: int, limit: int | None = None) -> tuple[int, int]:
    """(number of r-cliques, number of s-independent sets); zero when the size exceeds n."""
    kc = count_cliques(g, r, limit) if r <= g.n else 0
    ki = count_independent_sets(g, s, limit) if s <= g.n else 0
    return kc, ki


def is_witness(g: Graph, r: int, s: int) -> bool:
    """True iff ``g`` has no r-clique and no s-independent set."""
    if r <= g.n and find_clique(g.adj, g.full_mask, r) is not None:
        return False
    if s <= g.n and max_clique(g.complement_rows(), lower=s - 1, stop_at=s):
        return False
    return True
