"""Growing a valid witness by one vertex at a time.

An extension is described by the neighbourhood (a vertex mask over the base
graph) of the vertex being added.  The strategies below propose
neighbourhoods; ``mini_sa_select`` and ``ghost_beam_extend`` refine them.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace

from .graph import (
    DomainError,
    Graph,
    RamseyParams,
    _count_in,
    is_witness,
    iter_bits,
    iter_cliques,
    mask_of,
)
from .local_search import AnnealConfig, EnergyWeights, anneal

STRATEGIES = ("hitting_set", "mis_connect", "clone_perturb", "greedy_growth", "random")


@dataclass(frozen=True)
class ExtensionCandidate:
    base: Graph
    neighborhood: int
    strategy_tag: str

    def __post_init__(self):
        if self.neighborhood >> self.base.n:
            raise DomainError("neighbourhood exceeds the base vertex set")
        if self.strategy_tag not in STRATEGIES:
            raise DomainError(f"unknown strategy {self.strategy_tag!r}")

    @property
    def members(self) -> list[int]:
        return list(iter_bits(self.neighborhood))

    def realize(self) -> Graph:
        return self.base.add_vertex(self.neighborhood)


def extend_hitting_set(g: Graph, p: RamseyParams) -> ExtensionCandidate:
    """Greedy cover of every (s-1)-independent set (most-uncovered first, ties lowest index)."""
    k = p.s - 1
    sets = [mask_of(c) for c in iter_cliques(g.complement_rows(), g.full_mask, k)] if k <= g.n else []
    chosen = 0
    while sets:
        counts = [0] * g.n
        for m in sets:
            for v in iter_bits(m):
                counts[v] += 1
        v = max(range(g.n), key=lambda x: (counts[x], -x))
        chosen |= 1 << v
        sets = [m for m in sets if not m >> v & 1]
    return ExtensionCandidate(g, chosen, "hitting_set")


def extend_mis_connect(g: Graph, seed: int) -> ExtensionCandidate:
    """Join the new vertex to a maximal independent set built from a random order."""
    rng = random.Random(seed)
    order = list(range(g.n))
    rng.shuffle(order)
    chosen = 0
    avail = g.full_mask
    for v in order:
        if avail >> v & 1:
            chosen |= 1 << v
            avail &= ~g.adj[v] & ~(1 << v)
    return ExtensionCandidate(g, chosen, "mis_connect")


def extend_clone_perturb(g: Graph, source: int, rate: float, seed: int) -> ExtensionCandidate:
    """Copy N(source) and flip each other bit with probability ``rate``.

    The bit for ``source`` itself has no row to copy and is a fair coin.
    """
    if not 0 <= source < g.n:
        raise DomainError(f"source {source} out of range")
    if not 0.0 <= rate <= 1.0:
        raise DomainError("rate must lie in [0, 1]")
    rng = random.Random(seed)
    row = g.adj[source]
    out = 0
    for u in range(g.n):
        if u == source:
            bit = rng.random() < 0.5
        else:
            bit = bool(row >> u & 1) != (rng.random() < rate)
        if bit:
            out |= 1 << u
    return ExtensionCandidate(g, out, "clone_perturb")


def extend_greedy_growth(g: Graph, order_seed: int, order: list[int] | None = None) -> ExtensionCandidate:
    """Scan vertices in random order; keep u if it is adjacent to no vertex kept so far."""
    if order is None:
        order = list(range(g.n))
        random.Random(order_seed).shuffle(order)
    chosen = 0
    for u in order:
        if not g.adj[u] & chosen:
            chosen |= 1 << u
    return ExtensionCandidate(g, chosen, "greedy_growth")


def extend_random(g: Graph, seed: int, p_edge: float = 0.5) -> ExtensionCandidate:
    rng = random.Random(seed)
    out = mask_of(u for u in range(g.n) if rng.random() < p_edge)
    return ExtensionCandidate(g, out, "random")


def propose(g: Graph, p: RamseyParams, strategy: str, seed: int, **kw) -> ExtensionCandidate:
    """Dispatch to one named strategy; ``kw`` carries strategy options."""
    if strategy == "hitting_set":
        return extend_hitting_set(g, p)
    if strategy == "mis_connect":
        return extend_mis_connect(g, seed)
    if strategy == "clone_perturb":
        source = kw.get("source")
        if source is None:
            source = random.Random(seed).randrange(g.n)
        return extend_clone_perturb(g, source, kw.get("rate", 0.1), seed)
    if strategy == "greedy_growth":
        return extend_greedy_growth(g, seed)
    if strategy == "random":
        return extend_random(g, seed, kw.get("p_edge", 0.5))
    raise DomainError(f"unknown strategy {strategy!r}")


def mini_sa_select(candidates: list[ExtensionCandidate], p: RamseyParams, burst_steps: int,
                   seed: int, w: EnergyWeights | None = None) -> ExtensionCandidate:
    """Short annealing burst on each candidate's new-vertex edges; keep the lowest energy.

    Ties go to the earliest candidate.  The returned candidate carries the
    refined neighbourhood.
    """
    if not candidates:
        raise DomainError("no candidates to select from")
    best = None
    for i, cand in enumerate(candidates):
        h = cand.realize()
        cfg = AnnealConfig(t_initial=0.5, cooling=0.99, max_steps=burst_steps, seed=seed + i)
        res = anneal(h, p, w, cfg, pivot=h.n - 1)
        if best is None or res.best_energy < best[0]:
            refined = res.best.adj[h.n - 1]
            best = (res.best_energy, replace(cand, neighborhood=refined))
    return best[1]


def densify(g: Graph, r: int, seed: int) -> Graph:
    """Add random safe edges (endpoints share no neighbour) until none remain."""
    if r != 3:
        raise DomainError("densify is defined for r = 3 only")
    rng = random.Random(seed)
    h = g.copy()
    absent = [(u, v) for u in range(h.n) for v in range(u + 1, h.n) if not h.adj[u] >> v & 1]
    rng.shuffle(absent)
    # a pair rejected once stays unsafe, so one shuffled pass is maximal
    for u, v in absent:
        if not h.adj[u] & h.adj[v]:
            h.toggle(u, v)
    return h


def repair_independent_set(g: Graph, iset, r: int) -> Graph | None:
    """Add the lexicographically first safe edge inside ``iset``; None if there is none."""
    if r != 3:
        raise DomainError("repair is defined for r = 3 only")
    members = sorted(iset)
    m = mask_of(members)
    for v in members:
        if g.adj[v] & m:
            raise DomainError("the given vertex set is not independent")
    for i, u in enumerate(members):
        for v in members[i + 1:]:
            if not g.adj[u] & g.adj[v]:
                h = g.copy()
                h.toggle(u, v)
                return h
    return None


# -- ghost-vertex beam search -------------------------------------------------------

def _mask_violations(g: Graph, comp: list[int], mask: int, r: int, s: int) -> int:
    """Violations a new vertex with neighbourhood ``mask`` would create."""
    return _count_in(g.adj, mask, r - 1) + _count_in(comp, g.full_mask & ~mask, s - 1)


def refine_mask(g: Graph, p: RamseyParams, mask: int, budget: int, rng: random.Random,
                comp: list[int] | None = None, temp: float = 0.3) -> tuple[int, int]:
    """Anneal the new vertex's bits only; returns (best mask, its violation count)."""
    if comp is None:
        comp = g.complement_rows()
    r, s = p.r, p.s
    full = g.full_mask
    e = _mask_violations(g, comp, mask, r, s)
    best, best_e = mask, e
    for _ in range(budget):
        if best_e == 0:
            break
        u = rng.randrange(g.n)
        bit = 1 << u
        if mask & bit:
            # dropping u: its cliques go, independent sets through u appear
            d = -_count_in(g.adj, mask & g.adj[u], r - 2) + _count_in(comp, (full & ~mask) & comp[u], s - 2)
        else:
            d = _count_in(g.adj, mask & g.adj[u], r - 2) - _count_in(comp, (full & ~mask) & comp[u], s - 2)
        if d <= 0 or rng.random() < math.exp(-d / temp):
            mask ^= bit
            e += d
            if e < best_e:
                best, best_e = mask, e
    return best, best_e


def ghost_beam_extend(g: Graph, p: RamseyParams, beam_width: int, per_node_budget: int, seed: int,
                      max_new: int | None = None, rate: float = 0.1) -> Graph | None:
    """Beam search over one-vertex extensions of a valid witness.

    Every beam member spawns ``beam_width`` ghost vertices initialised by
    clone-and-perturb and refined by ``per_node_budget`` single-bit flips.
    Valid children are ranked by (violations, -neighbourhood size) and the
    best ``beam_width`` distinct graphs form the next layer.  Returns the
    largest valid graph found beyond ``g``, or None.
    """
    if beam_width < 1 or per_node_budget < 1:
        raise DomainError("beam_width and per_node_budget must be >= 1")
    if not is_witness(g, p.r, p.s):
        raise DomainError("input graph is not a valid witness")
    rng = random.Random(seed)
    beam = [g]
    found: Graph | None = None
    depth = 0
    while beam and (max_new is None or depth < max_new):
        children: dict[tuple[int, ...], tuple[tuple[int, int], Graph]] = {}
        for parent in beam:
            comp = parent.complement_rows()
            for _ in range(beam_width):
                src = rng.randrange(parent.n)
                cand = extend_clone_perturb(parent, src, rate, rng.getrandbits(64))
                mask, viol = refine_mask(parent, p, cand.neighborhood, per_node_budget, rng, comp)
                if viol:
                    continue
                child = parent.add_vertex(mask)
                key = tuple(child.adj)
                if key not in children:
                    children[key] = ((viol, -mask.bit_count()), child)
        if not children:
            break
        ranked = sorted(children.values(), key=lambda kv: (kv[0], tuple(kv[1].adj)))
        beam = [child for _, child in ranked[:beam_width]]
        found = beam[0]
        depth += 1
    return found
