"""Circulant graphs encoded by folded distance sets.

A distance set ``s`` over Z_n (members in 1..n//2) defines the graph where
u ~ v iff the cyclic distance between u and v lies in ``s``.  Circulants are
vertex-transitive, so (r, s)-freeness can be checked around vertex 0 alone.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import gcd

from .constructions import cayley_graph, fold
from .graph import DomainError, Graph, RamseyParams, count_cliques_within, mask_of

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DifferenceSet:
    n: int
    s: frozenset[int]

    def __post_init__(self):
        if self.n < 2:
            raise DomainError("modulus must be >= 2")
        object.__setattr__(self, "s", frozenset(self.s))
        half = self.n // 2
        bad = sorted(d for d in self.s if not 1 <= d <= half)
        if bad:
            raise DomainError(f"distances {bad} outside [1, {half}]")

    @classmethod
    def of(cls, n: int, distances) -> "DifferenceSet":
        """Build from arbitrary integers, folding each into 1..n//2 (zeros dropped)."""
        return cls(n, frozenset(f for f in (fold(d, n) for d in distances) if f))

    def connection_set(self) -> set[int]:
        return set(self.s) | {self.n - d for d in self.s}

    def __repr__(self):
        return f"DifferenceSet(n={self.n}, s={sorted(self.s)})"


def realize(ds: DifferenceSet) -> Graph:
    return cayley_graph(ds.n, ds.connection_set())


@dataclass(frozen=True)
class OrbitBasis:
    n: int
    multiplier: int
    orbits: tuple[frozenset[int], ...]


def multiplier_orbits(n: int, a: int) -> OrbitBasis:
    """Partition 1..n//2 into orbits of d -> fold(a*d), listed by smallest member."""
    if gcd(a, n) != 1:
        raise DomainError(f"multiplier {a} is not coprime to {n}")
    seen: set[int] = set()
    orbits = []
    for d in range(1, n // 2 + 1):
        if d in seen:
            continue
        orbit = []
        x = d
        while x not in orbit:
            orbit.append(x)
            x = fold(a * x, n)
        seen.update(orbit)
        orbits.append(frozenset(orbit))
    return OrbitBasis(n, a % n, tuple(orbits))


def orbit_union(basis: OrbitBasis, mask) -> DifferenceSet:
    """Union of the orbits whose indices are in ``mask`` (an iterable of ints)."""
    s: set[int] = set()
    for i in mask:
        if not 0 <= i < len(basis.orbits):
            raise DomainError(f"orbit index {i} out of range (have {len(basis.orbits)})")
        s |= basis.orbits[i]
    return DifferenceSet(basis.n, frozenset(s))


@dataclass(frozen=True)
class LocalValidity:
    valid: bool
    k_local: int
    i_local: int


def local_validity(ds: DifferenceSet, p: RamseyParams, limit: int | None = None) -> LocalValidity:
    """Count (r-1)-cliques in N(0) and (s-1)-independent sets in V - N(0) - {0}.

    By vertex transitivity both are zero iff the realized graph is (r, s)-free.
    ``limit`` caps each count (useful as a search energy on dense failures).
    """
    g = realize(ds)
    nbhd = g.adj[0]
    rest = g.full_mask ^ nbhd ^ 1
    k_local = count_cliques_within(g.adj, nbhd, p.r - 1, limit)
    i_local = count_cliques_within(g.complement_rows(), rest, p.s - 1, limit)
    return LocalValidity(k_local == 0 and i_local == 0, k_local, i_local)


def teleport(ds: DifferenceSet, k: int) -> DifferenceSet:
    """Image of ``ds`` under the automorphism-inducing map d -> k*d (gcd(k, n) = 1)."""
    if gcd(k, ds.n) != 1:
        raise DomainError(f"k={k} is not coprime to n={ds.n}")
    return DifferenceSet(ds.n, frozenset(fold(k * d, ds.n) for d in ds.s))


def scale_difference_set(ds: DifferenceSet, n_new: int) -> DifferenceSet:
    """Map each distance to round-half-up(d * n_new / n), clamped to [1, n_new//2]."""
    if n_new < 2:
        raise DomainError("n_new must be >= 2")
    half = n_new // 2
    out = set()
    for d in ds.s:
        x = (2 * d * n_new + ds.n) // (2 * ds.n)
        out.add(min(max(x, 1), half))
    if len(out) < len(ds.s):
        log.debug("scaling n=%d -> %d merged %d distances", ds.n, n_new, len(ds.s) - len(out))
    return DifferenceSet(n_new, frozenset(out))


def orbit_mask_for(basis: OrbitBasis, ds: DifferenceSet) -> list[int]:
    """Indices of orbits that are mostly covered by ``ds`` (projection onto an orbit layout)."""
    return [i for i, orb in enumerate(basis.orbits) if 2 * len(orb & ds.s) >= len(orb)]


def coprime_multipliers(n: int) -> list[int]:
    """Multipliers 2..n//2 coprime to n, one per {a, -a} class."""
    return [a for a in range(2, n // 2 + 1) if gcd(a, n) == 1]


def neighborhood_mask(ds: DifferenceSet) -> int:
    return mask_of(ds.connection_set())
