"""Defect-minimising search engines over graphs and circulant distance sets.

All engines are single-threaded, own a private copy of their input and draw
randomness from ``random.Random(seed)`` only, so identical inputs and seeds
give identical traces.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import NamedTuple

from .circulant import DifferenceSet, OrbitBasis, local_validity, multiplier_orbits, orbit_union, teleport
from .constructions import fold
from .graph import (
    DomainError,
    Graph,
    RamseyParams,
    _count_in,
    enumerate_violations,
    iter_cliques,
    violation_counts,
)

CLIQUE_WEIGHT_CAP = 1000.0
ADAPT_FACTOR = 1.5


@dataclass(frozen=True)
class EnergyWeights:
    w_clique: float = 1.0
    w_indep: float = 1.0
    adaptive: bool = False

    def __post_init__(self):
        if self.w_clique < 0 or self.w_indep < 0 or self.w_clique + self.w_indep <= 0:
            raise DomainError("weights must be nonnegative with a positive sum")

    def of(self, cliques: int, indeps: int) -> float:
        return self.w_clique * cliques + self.w_indep * indeps


@dataclass(frozen=True)
class AnnealConfig:
    t_initial: float = 1.0
    cooling: float = 0.9995
    max_steps: int = 500_000
    reheat_threshold: float | None = None
    seed: int = 0
    adapt_interval: int = 1000
    trace_interval: int = 1000
    record_moves: bool = False

    def __post_init__(self):
        if not 0 < self.cooling < 1:
            raise DomainError("cooling factor must lie in (0, 1)")
        if self.t_initial <= 0 or self.max_steps < 1:
            raise DomainError("t_initial and max_steps must be positive")


@dataclass(frozen=True)
class TabuConfig:
    tenure: int = 20
    stagnation_limit: int = 500
    candidate_batch: int = 64
    kick_fraction: float = 0.02
    max_steps: int = 100_000
    seed: int = 0
    ledger_bias: float = 0.75
    survivor_fraction: float = 0.25
    rebuild_interval: int = 1000
    trace_interval: int = 1000
    record_moves: bool = False

    def __post_init__(self):
        if self.tenure < 1 or self.stagnation_limit < 1 or self.candidate_batch < 1:
            raise DomainError("tenure, stagnation_limit and candidate_batch must be >= 1")
        if not 0 < self.kick_fraction < 1:
            raise DomainError("kick_fraction must lie in (0, 1)")


@dataclass(frozen=True)
class TraceRecord:
    step: int
    temp: float
    energy: float
    best: float


@dataclass(frozen=True)
class Move:
    step: int
    u: int
    v: int
    d_clique: int
    d_indep: int
    accepted: bool = True
    aspiration: bool = False


@dataclass
class SearchTrace:
    records: list[TraceRecord] = field(default_factory=list)
    moves: list[Move] | None = None
    steps: int = 0
    accepted: int = 0
    kicks: int = 0

    def lines(self) -> list[str]:
        return [f"{r.step} {r.temp:.6g} {r.energy:.6g} {r.best:.6g}" for r in self.records]


class SearchResult(NamedTuple):
    best: Graph
    best_energy: float
    trace: SearchTrace


def energy(g: Graph, p: RamseyParams, w: EnergyWeights) -> float:
    kc, ki = violation_counts(g, p.r, p.s)
    return w.of(kc, ki)


def adapt_weights(w: EnergyWeights, clique_count: int, indep_count: int) -> EnergyWeights:
    """Scale the weight of the dominant defect type by 1.5, capped at a 1000:1 ratio."""
    if not w.adaptive:
        raise DomainError("weights are not adaptive")
    if clique_count > indep_count:
        return replace(w, w_clique=min(w.w_clique * ADAPT_FACTOR, CLIQUE_WEIGHT_CAP * w.w_indep))
    if indep_count > clique_count:
        return replace(w, w_indep=min(w.w_indep * ADAPT_FACTOR, CLIQUE_WEIGHT_CAP * w.w_clique))
    return w


def _flip_deltas(adj: list[int], comp: list[int], u: int, v: int, r: int, s: int) -> tuple[int, int]:
    """(change in r-cliques, change in s-independent sets) if (u, v) were flipped."""
    kc = _count_in(adj, adj[u] & adj[v], r - 2)
    ki = _count_in(comp, comp[u] & comp[v], s - 2)
    if adj[u] >> v & 1:
        return -kc, ki
    return kc, -ki


def _random_pair(rng: random.Random, n: int, pivot: int | None) -> tuple[int, int]:
    if pivot is None:
        u = rng.randrange(n)
    else:
        u = pivot
    v = rng.randrange(n - 1)
    if v >= u:
        v += 1
    return (u, v) if u < v else (v, u)


def anneal(g: Graph, p: RamseyParams, w: EnergyWeights | None = None,
           cfg: AnnealConfig | None = None, pivot: int | None = None,
           deadline: float | None = None) -> SearchResult:
    """Metropolis single-edge-flip annealing with geometric cooling.

    ``pivot`` restricts flips to pairs incident to that vertex.  With adaptive
    weights the acceptance rule uses the adapted weights while the best graph
    is judged by the caller's weights, so the returned energy never exceeds
    the input's.  ``deadline`` is a ``time.monotonic()`` value.
    """
    w = w or EnergyWeights()
    cfg = cfg or AnnealConfig()
    rng = random.Random(cfg.seed)
    r, s, n = p.r, p.s, g.n
    cur = g.copy()
    adj = cur.adj
    comp = cur.complement_rows()
    kc, ki = violation_counts(cur, r, s)
    trace = SearchTrace(moves=[] if cfg.record_moves else None)
    best_e = w.of(kc, ki)
    best = cur.copy()
    if best_e == 0 or n < 2:
        trace.records.append(TraceRecord(0, cfg.t_initial, best_e, best_e))
        return SearchResult(best, best_e, trace)

    wc, wi = w.w_clique, w.w_indep
    live = w
    t = cfg.t_initial
    step = 0
    for step in range(1, cfg.max_steps + 1):
        u, v = _random_pair(rng, n, pivot)
        dc, di = _flip_deltas(adj, comp, u, v, r, s)
        de = wc * dc + wi * di
        accept = de <= 0 or rng.random() < math.exp(-de / t)
        if accept:
            bu, bv = 1 << u, 1 << v
            adj[u] ^= bv
            adj[v] ^= bu
            comp[u] ^= bv
            comp[v] ^= bu
            kc += dc
            ki += di
            trace.accepted += 1
            e = w.of(kc, ki)
            if e < best_e:
                best_e = e
                best = cur.copy()
        if trace.moves is not None:
            trace.moves.append(Move(step, u, v, dc, di, accept))
        t *= cfg.cooling
        if cfg.reheat_threshold is not None and t < cfg.reheat_threshold:
            t = cfg.t_initial
        if w.adaptive and step % cfg.adapt_interval == 0:
            live = adapt_weights(live, kc, ki)
            wc, wi = live.w_clique, live.w_indep
        if step % cfg.trace_interval == 0:
            trace.records.append(TraceRecord(step, t, wc * kc + wi * ki, best_e))
            if deadline is not None and time.monotonic() > deadline:
                break
        if kc == 0 and ki == 0:
            break
    trace.steps = step
    trace.records.append(TraceRecord(step, t, w.of(kc, ki), best_e))
    return SearchResult(best, best_e, trace)


def _all_pairs(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(n), 2))


def strategic_kick(g: Graph, m: int, seed: int) -> Graph:
    """Flip exactly ``m`` distinct uniformly chosen vertex pairs."""
    total = g.n * (g.n - 1) // 2
    if not 1 <= m <= total:
        raise DomainError(f"kick size must lie in [1, {total}], got {m}")
    rng = random.Random(seed)
    pairs = _all_pairs(g.n)
    h = g.copy()
    for i in rng.sample(range(total), m):
        h.toggle(*pairs[i])
    return h


def tabu_search(g: Graph, p: RamseyParams, cfg: TabuConfig | None = None,
                w: EnergyWeights | None = None, deadline: float | None = None) -> SearchResult:
    """Tabu search over single edge flips with a ledger-biased candidate batch.

    Each step draws ``candidate_batch`` pairs (a ``ledger_bias`` share weighted
    by how many current violations contain the pair), keeps the best
    ``survivor_fraction`` by a common-(non)neighbour proxy, scores those
    exactly, and applies the best admissible move.  A tabu move is admissible
    only when it would beat the best energy seen.
    """
    cfg = cfg or TabuConfig()
    w = w or EnergyWeights()
    rng = random.Random(cfg.seed)
    r, s, n = p.r, p.s, g.n
    cur = g.copy()
    adj = cur.adj
    comp = cur.complement_rows()
    ledger = enumerate_violations(cur, p)
    trace = SearchTrace(moves=[] if cfg.record_moves else None)
    e = w.of(len(ledger.cliques), len(ledger.indep_sets))
    best, best_e = cur.copy(), e
    if e == 0 or n < 2:
        trace.records.append(TraceRecord(0, cfg.tenure, e, e))
        return SearchResult(best, best_e, trace)

    pairs_all = _all_pairs(n)
    total_pairs = len(pairs_all)
    tabu_until: dict[tuple[int, int], int] = {}
    stagnant = 0
    wc, wi = w.w_clique, w.w_indep
    step = 0
    for step in range(1, cfg.max_steps + 1):
        if cfg.candidate_batch >= total_pairs:
            cands = pairs_all
        else:
            chosen: set[tuple[int, int]] = set()
            n_biased = round(cfg.candidate_batch * cfg.ledger_bias) if ledger.edge_index else 0
            if n_biased:
                keys, weights = ledger.weighted_pairs()
                chosen.update(rng.choices(keys, weights=weights, k=n_biased))
            while len(chosen) < cfg.candidate_batch:
                chosen.add(pairs_all[rng.randrange(total_pairs)])
            cands = sorted(chosen)

        def proxy(pair):
            a, b = pair
            risk = wc * (adj[a] & adj[b]).bit_count() - wi * (comp[a] & comp[b]).bit_count()
            return (-risk if adj[a] >> b & 1 else risk), pair

        keep = max(1, math.ceil(len(cands) * cfg.survivor_fraction))
        survivors = sorted(cands, key=proxy)[:keep]

        choice = None
        for pair in sorted(survivors):
            dc, di = _flip_deltas(adj, comp, pair[0], pair[1], r, s)
            de = wc * dc + wi * di
            is_tabu = tabu_until.get(pair, 0) >= step
            aspir = is_tabu and e + de < best_e
            if is_tabu and not aspir:
                continue
            if choice is None or de < choice[0]:
                choice = (de, pair, dc, di, aspir)

        if choice is not None:
            de, (a, b), dc, di, aspir = choice
            cur.toggle(a, b)
            comp[a] ^= 1 << b
            comp[b] ^= 1 << a
            ledger.apply_flip(cur, a, b, comp)
            e += de
            tabu_until[(a, b)] = step + cfg.tenure
            trace.accepted += 1
            if trace.moves is not None:
                trace.moves.append(Move(step, a, b, dc, di, True, aspir))
        if e < best_e:
            best_e, best = e, cur.copy()
            stagnant = 0
        else:
            stagnant += 1

        if step % cfg.rebuild_interval == 0:
            ledger = enumerate_violations(cur, p)
            e = w.of(len(ledger.cliques), len(ledger.indep_sets))
        if step % cfg.trace_interval == 0:
            trace.records.append(TraceRecord(step, cfg.tenure, e, best_e))
            if deadline is not None and time.monotonic() > deadline:
                break
        if e == 0:
            break
        if stagnant >= cfg.stagnation_limit:
            m = max(1, round(cfg.kick_fraction * total_pairs))
            cur = strategic_kick(best, m, rng.getrandbits(64))
            adj = cur.adj
            comp = cur.complement_rows()
            ledger = enumerate_violations(cur, p)
            e = w.of(len(ledger.cliques), len(ledger.indep_sets))
            trace.kicks += 1
            stagnant = 0
    trace.steps = step
    trace.records.append(TraceRecord(step, cfg.tenure, e, best_e))
    return SearchResult(best, best_e, trace)


def toxic_orbit_kick(g: Graph, p: RamseyParams) -> tuple[Graph, int]:
    """Flip every pair at the cyclic distance most frequent among r-clique edges."""
    freq: dict[int, int] = {}
    found = False
    for c in iter_cliques(g.adj, g.full_mask, p.r):
        found = True
        for a, b in combinations(c, 2):
            d = fold(b - a, g.n)
            freq[d] = freq.get(d, 0) + 1
    if not found:
        raise DomainError("graph has no r-clique")
    d_star = min(freq, key=lambda d: (-freq[d], d))
    h = g.copy()
    for u in range(g.n):
        v = (u + d_star) % g.n
        # distance n/2 pairs are reached from both ends; flip each once
        if d_star * 2 == g.n and u >= v:
            continue
        h.toggle(u, v)
    return h, d_star


def clique_first_search(g: Graph, p: RamseyParams, max_steps: int, seed: int,
                        tenure: int = 10, stagnation_limit: int = 200,
                        deadline: float | None = None) -> SearchResult:
    """Break r-cliques first, then independent sets, tunnelling on stagnation.

    While r-cliques remain, the move removes a clique edge with the largest
    clique reduction (ties: fewest new independent sets).  Once clique-free
    it adds an edge inside a sampled violating independent set, choosing the
    pair that creates the fewest r-cliques.  Phase switches back as soon as a
    clique reappears.  Stagnation in the clique phase triggers a toxic-orbit
    kick.  Energy is the unweighted violation total.
    """
    rng = random.Random(seed)
    r, s = p.r, p.s
    cur = g.copy()
    comp = cur.complement_rows()
    ledger = enumerate_violations(cur, p)
    trace = SearchTrace()
    best, best_e = cur.copy(), ledger.total
    best_cliques = len(ledger.cliques)
    tabu_until: dict[tuple[int, int], int] = {}
    stagnant = 0
    step = 0
    for step in range(1, max_steps + 1):
        if ledger.is_empty():
            break
        if ledger.cliques:
            pairs = sorted({pr for c in ledger.cliques for pr in combinations(c, 2)})
        else:
            iset = rng.choice(sorted(ledger.indep_sets))
            pairs = list(combinations(iset, 2))
        choice = None
        for pair in pairs:
            dc, di = _flip_deltas(cur.adj, comp, pair[0], pair[1], r, s)
            if tabu_until.get(pair, 0) >= step and ledger.total + dc + di >= best_e:
                continue
            key = (dc, di, pair)
            if choice is None or key < choice:
                choice = key
        if choice is not None:
            _, _, (a, b) = choice
            cur.toggle(a, b)
            comp[a] ^= 1 << b
            comp[b] ^= 1 << a
            ledger.apply_flip(cur, a, b, comp)
            tabu_until[(a, b)] = step + tenure
            trace.accepted += 1
        if ledger.total < best_e:
            best, best_e = cur.copy(), ledger.total
        if ledger.cliques and len(ledger.cliques) >= best_cliques:
            stagnant += 1
        else:
            best_cliques = min(best_cliques, len(ledger.cliques))
            stagnant = 0
        if stagnant >= stagnation_limit and ledger.cliques:
            cur, _ = toxic_orbit_kick(cur, p)
            comp = cur.complement_rows()
            ledger = enumerate_violations(cur, p)
            best_cliques = len(ledger.cliques)
            trace.kicks += 1
            stagnant = 0
        if step % 1000 == 0:
            trace.records.append(TraceRecord(step, tenure, ledger.total, best_e))
            if deadline is not None and time.monotonic() > deadline:
                break
    trace.steps = step
    trace.records.append(TraceRecord(step, tenure, ledger.total, best_e))
    return SearchResult(best, best_e, trace)


# -- circulant (distance-set) search --------------------------------------------------

class OrbitResult(NamedTuple):
    best: DifferenceSet
    best_energy: float
    trace: SearchTrace


def circulant_energy(ds: DifferenceSet, p: RamseyParams, w: EnergyWeights, limit: int = 10_000) -> float:
    lv = local_validity(ds, p, limit)
    return w.of(lv.k_local, lv.i_local)


def anneal_orbits(basis: OrbitBasis, p: RamseyParams, cfg: AnnealConfig,
                  w: EnergyWeights | None = None, init: DifferenceSet | None = None,
                  teleport_after: int | None = None, count_limit: int = 10_000,
                  deadline: float | None = None) -> OrbitResult:
    """Anneal over unions of multiplier orbits; each move toggles one orbit.

    Energy is the (capped) local violation count around vertex 0.  After
    ``teleport_after`` non-improving steps the state jumps to an isomorphic
    set d -> k*d for a random unit k, which keeps orbit unions closed.
    """
    w = w or EnergyWeights()
    rng = random.Random(cfg.seed)
    m = len(basis.orbits)
    if init is None:
        state = [rng.random() < 0.5 for _ in range(m)]
    else:
        state = [len(orb & init.s) * 2 >= len(orb) for orb in basis.orbits]

    def ds_of(st):
        return orbit_union(basis, [i for i, on in enumerate(st) if on])

    cur_ds = ds_of(state)
    e = circulant_energy(cur_ds, p, w, count_limit)
    best_ds, best_e = cur_ds, e
    trace = SearchTrace()
    units = [k for k in range(2, basis.n) if math.gcd(k, basis.n) == 1]
    t = cfg.t_initial
    stagnant = 0
    step = 0
    for step in range(1, cfg.max_steps + 1):
        if best_e == 0 or m == 0:
            break
        i = rng.randrange(m)
        state[i] = not state[i]
        cand = ds_of(state)
        ce = circulant_energy(cand, p, w, count_limit)
        de = ce - e
        if de <= 0 or rng.random() < math.exp(-de / t):
            e, cur_ds = ce, cand
            trace.accepted += 1
        else:
            state[i] = not state[i]
        if e < best_e:
            best_ds, best_e, stagnant = cur_ds, e, 0
        else:
            stagnant += 1
        if teleport_after and stagnant >= teleport_after and units:
            k = rng.choice(units)
            cur_ds = teleport(cur_ds, k)
            state = [bool(orb & cur_ds.s) for orb in basis.orbits]
            cur_ds = ds_of(state)
            e = circulant_energy(cur_ds, p, w, count_limit)
            trace.kicks += 1
            stagnant = 0
        t *= cfg.cooling
        if cfg.reheat_threshold is not None and t < cfg.reheat_threshold:
            t = cfg.t_initial
        if step % cfg.trace_interval == 0:
            trace.records.append(TraceRecord(step, t, e, best_e))
            if deadline is not None and time.monotonic() > deadline:
                break
    trace.steps = step
    trace.records.append(TraceRecord(step, t, e, best_e))
    return OrbitResult(best_ds, best_e, trace)


def exhaustive_orbits(basis: OrbitBasis, p: RamseyParams, degree_window: tuple[int, int] | None = None,
                      max_orbits: int = 14) -> DifferenceSet | None:
    """Try every union of orbits (only when there are at most ``max_orbits``).

    Unions whose vertex degree falls outside ``degree_window`` are skipped.
    Returns the first valid set in mask order, or None.
    """
    m = len(basis.orbits)
    if m > max_orbits:
        raise DomainError(f"{m} orbits exceed the exhaustive limit {max_orbits}")
    n = basis.n
    for bits in range(1 << m):
        ds = orbit_union(basis, [i for i in range(m) if bits >> i & 1])
        if degree_window is not None:
            deg = 2 * len(ds.s) - (1 if n % 2 == 0 and n // 2 in ds.s else 0)
            if not degree_window[0] <= deg <= degree_window[1]:
                continue
        if local_validity(ds, p, 1).valid:
            return ds
    return None


def multiplier_tournament(n: int, p: RamseyParams, multipliers: list[int], cfg: AnnealConfig,
                          w: EnergyWeights | None = None, init: DifferenceSet | None = None,
                          teleport_after: int | None = None,
                          deadline: float | None = None) -> tuple[DifferenceSet, float, int]:
    """Anneal once per multiplier (same budget each) and keep the lowest-energy result.

    Ties go to the earlier multiplier in the list.
    """
    if not multipliers:
        raise DomainError("no multipliers given")
    best = None
    for i, a in enumerate(multipliers):
        basis = multiplier_orbits(n, a)
        res = anneal_orbits(basis, p, replace(cfg, seed=cfg.seed + i), w, init, teleport_after,
                            deadline=deadline)
        if best is None or res.best_energy < best[1]:
            best = (res.best, res.best_energy, a)
        if best[1] == 0:
            break
        if deadline is not None and time.monotonic() > deadline:
            break
    return best
