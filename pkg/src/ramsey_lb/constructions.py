"""Seed-graph generators: Paley and power-residue graphs, G(n, p), sum-free circulants, blocks."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

from .graph import DomainError, Graph, mask_of


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    d = 3
    while d * d <= q:
        if q % d == 0:
            return False
        d += 2
    return True


def fold(d: int, n: int) -> int:
    """Cyclic distance of ``d`` in Z_n: min(d mod n, n - d mod n)."""
    d %= n
    return min(d, n - d)


def cayley_graph(n: int, connection: set[int]) -> Graph:
    """Graph on Z_n with u ~ v iff (u - v) mod n lies in ``connection`` (must be symmetric)."""
    conn = {c % n for c in connection}
    if 0 in conn:
        raise DomainError("connection set contains 0")
    if any((-c) % n not in conn for c in conn):
        raise DomainError("connection set is not closed under negation")
    base = mask_of(conn)
    full = (1 << n) - 1
    adj = [((base << u) | (base >> (n - u))) & full for u in range(n)]
    return Graph(n, adj)


def paley_graph(q: int) -> Graph:
    """Paley graph on Z_q, q prime with q = 1 (mod 4)."""
    if not is_prime(q):
        raise DomainError(f"q={q} is not prime")
    if q % 4 != 1:
        raise DomainError(f"q={q} is not 1 mod 4; the Paley graph would be directed")
    return cayley_graph(q, {x * x % q for x in range(1, q)})


def power_residues(p: int, e: int) -> set[int]:
    return {pow(x, e, p) for x in range(1, p)}


def power_residue_graph(p: int, e: int, symmetrize: bool = False) -> Graph:
    """Cayley graph on Z_p whose connection set is the nonzero ``e``-th powers.

    The residue set must contain -1. With ``symmetrize=True`` an asymmetric
    residue set is closed under negation instead of being rejected.
    """
    if not is_prime(p):
        raise DomainError(f"p={p} is not prime")
    if e < 1 or (p - 1) % e:
        raise DomainError(f"e={e} does not divide p-1={p - 1}")
    res = power_residues(p, e)
    if p - 1 not in res:
        if not symmetrize:
            raise DomainError(f"-1 is not an {e}-th power residue mod {p}; graph would be directed")
        res |= {p - x for x in res}
    return cayley_graph(p, res)


def random_graph(n: int, p_edge: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p_edge); pairs are drawn in lexicographic order."""
    if not 0.0 <= p_edge <= 1.0:
        raise DomainError("p_edge must lie in [0, 1]")
    rng = random.Random(seed)
    g = Graph(n)
    for u, v in combinations(range(n), 2):
        if rng.random() < p_edge:
            g.adj[u] |= 1 << v
            g.adj[v] |= 1 << u
    return g


# -- sum-free sets ----------------------------------------------------------------

def _signed_mask(n: int, distances) -> int:
    m = 0
    for d in distances:
        m |= 1 << (d % n) | 1 << ((-d) % n)
    return m


def _rotate(mask: int, k: int, n: int) -> int:
    k %= n
    full = (1 << n) - 1
    return ((mask << k) | (mask >> (n - k))) & full


def is_sum_free(n: int, distances) -> bool:
    """True iff the circulant over ``distances`` has no triangle.

    With S the symmetric closure, this is: no a, b in S with a + b in S (mod n).
    """
    sig = _signed_mask(n, distances)
    m = sig
    while m:
        low = m & -m
        a = low.bit_length() - 1
        if _rotate(sig, a, n) & sig:
            return False
        m ^= low
    return True


@dataclass(frozen=True)
class SumFreeSet:
    n: int
    members: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        half = self.n // 2
        bad = [d for d in self.members if not 1 <= d <= half]
        if bad:
            raise DomainError(f"distances {sorted(bad)} outside [1, {half}]")
        if not is_sum_free(self.n, self.members):
            raise DomainError(f"{sorted(self.members)} is not sum-free mod {self.n}")

    def graph(self) -> Graph:
        return cayley_graph(self.n, set(self.members) | {self.n - d for d in self.members})


def _compatible(n: int, sig: int, d: int) -> bool:
    new = sig | 1 << (d % n) | 1 << ((-d) % n)
    return not (_rotate(new, d, n) & new) and not (_rotate(new, -d, n) & new)


def max_sum_free_set(n: int, seed: int, passes: int = 3) -> SumFreeSet:
    """Maximal sum-free distance set by greedy augmentation over shuffled passes."""
    if n < 2:
        raise DomainError("n must be >= 2")
    rng = random.Random(seed)
    pool = list(range(1, n // 2 + 1))
    members: set[int] = set()
    sig = 0
    for _ in range(passes):
        rng.shuffle(pool)
        for d in pool:
            if d in members:
                continue
            if _compatible(n, sig, d):
                members.add(d)
                sig |= 1 << d | 1 << ((-d) % n)
    return SumFreeSet(n, frozenset(members))


def is_maximal_sum_free(sf: SumFreeSet) -> bool:
    return all(not is_sum_free(sf.n, sf.members | {d})
               for d in range(1, sf.n // 2 + 1) if d not in sf.members)


# -- block construction ------------------------------------------------------------

@dataclass(frozen=True)
class BlockSpec:
    """``n_blocks`` copies of a circulant on Z_k joined by a shared cross-block distance set.

    Cross-block distances may include 0 (vertex i of one block joined to vertex i of another).
    """

    n_blocks: int
    k: int
    s_intra: frozenset[int]
    s_inter: frozenset[int] = frozenset()

    def __post_init__(self):
        if self.n_blocks < 1 or self.k < 1:
            raise DomainError("n_blocks and k must be >= 1")
        if self.n_blocks * self.k > 512:
            raise DomainError("block construction exceeds 512 vertices")


def block_circulant(spec: BlockSpec) -> Graph:
    """Vertex (b, i) is index b*k + i."""
    k = spec.k
    intra = {fold(d, k) for d in spec.s_intra}
    inter = {fold(d, k) for d in spec.s_inter}
    n = spec.n_blocks * k
    g = Graph(n)
    for b1 in range(spec.n_blocks):
        for b2 in range(b1, spec.n_blocks):
            dist = intra if b1 == b2 else inter
            if not dist:
                continue
            for i in range(k):
                for j in range(k):
                    u, v = b1 * k + i, b2 * k + j
                    if u < v and fold(i - j, k) in dist:
                        g.adj[u] |= 1 << v
                        g.adj[v] |= 1 << u
    return g
