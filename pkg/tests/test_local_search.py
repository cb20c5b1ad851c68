import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import graphs
from oracles import naive_cliques, naive_indep, naive_valid
from ramsey_lb.circulant import DifferenceSet, multiplier_orbits
from ramsey_lb.constructions import random_graph
from ramsey_lb.graph import DomainError, Graph, RamseyParams, count_cliques, is_witness, violation_counts
from ramsey_lb.local_search import (
    AnnealConfig,
    EnergyWeights,
    TabuConfig,
    adapt_weights,
    anneal,
    anneal_orbits,
    circulant_energy,
    clique_first_search,
    energy,
    exhaustive_orbits,
    multiplier_tournament,
    strategic_kick,
    tabu_search,
    toxic_orbit_kick,
)

P33 = RamseyParams(3, 3)
# two triangles {0,2,3}, {0,3,4} and the single independent 6-set {1,2,4,5,6,7}
TWO_TRIANGLES_ONE_I6 = Graph.from_edges(8, [(0, 2), (0, 3), (0, 4), (2, 3), (3, 4)])


def recount(g, p, w):
    return w.of(len(naive_cliques(g, p.r)), len(naive_indep(g, p.s)))


def test_energy_examples():
    assert energy(Graph.complete(4), RamseyParams(3, 2), EnergyWeights()) == 4
    assert energy(TWO_TRIANGLES_ONE_I6, RamseyParams(3, 6), EnergyWeights(100, 1)) == 201
    assert energy(Graph.cycle(5), P33, EnergyWeights(7, 3)) == 0


def test_energy_weights_validation():
    with pytest.raises(DomainError):
        EnergyWeights(0, 0)
    with pytest.raises(DomainError):
        EnergyWeights(-1, 2)
    with pytest.raises(DomainError):
        AnnealConfig(cooling=1.0)
    with pytest.raises(DomainError):
        TabuConfig(tenure=0)


def test_adapt_weights_examples():
    w = EnergyWeights(1, 1, adaptive=True)
    assert adapt_weights(w, 10, 2) == EnergyWeights(1.5, 1, True)
    assert adapt_weights(w, 5, 5) == w
    assert adapt_weights(EnergyWeights(1000, 1, True), 10, 0) == EnergyWeights(1000, 1, True)
    with pytest.raises(DomainError):
        adapt_weights(EnergyWeights(), 1, 0)


def test_adapt_weights_toward_independent_sets():
    w = adapt_weights(EnergyWeights(1, 1, True), 0, 4)
    assert (w.w_clique, w.w_indep) == (1, 1.5)


def test_anneal_on_valid_input_is_identity():
    res = anneal(Graph.cycle(5), P33, EnergyWeights(), AnnealConfig(max_steps=100))
    assert res.best == Graph.cycle(5) and res.best_energy == 0


@pytest.mark.parametrize("seed", range(5))
def test_anneal_finds_five_cycle(seed):
    g = random_graph(5, 0.5, seed)
    res = anneal(g, P33, EnergyWeights(), AnnealConfig(max_steps=100_000, cooling=0.999,
                                                     reheat_threshold=0.05, seed=seed))
    assert res.best_energy == 0
    assert sorted(res.best.degrees()) == [2] * 5 and count_cliques(res.best, 3) == 0
    assert naive_valid(res.best, 3, 3)


def test_anneal_cannot_beat_ramsey_bound_on_six_vertices():
    res = anneal(random_graph(6, 0.5, 1), P33, EnergyWeights(), AnnealConfig(max_steps=5000, seed=2))
    assert res.best_energy >= 1


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=2, max_n=9), st.integers(0, 2**32), st.booleans())
def test_anneal_never_worsens_input(g, seed, adaptive):
    p = RamseyParams(3, 4)
    w = EnergyWeights(2, 1, adaptive)
    res = anneal(g, p, w, AnnealConfig(max_steps=300, seed=seed, adapt_interval=50))
    assert res.best_energy <= energy(g, p, w)
    assert res.best_energy == energy(res.best, p, w)


@settings(max_examples=30, deadline=None)
@given(graphs(min_n=2, max_n=9), st.integers(0, 2**32))
def test_tabu_never_worsens_input(g, seed):
    p = RamseyParams(3, 4)
    res = tabu_search(g, p, TabuConfig(max_steps=200, seed=seed, tenure=3, candidate_batch=8,
                                       stagnation_limit=20))
    assert res.best_energy <= energy(g, p, EnergyWeights())
    assert res.best_energy == energy(res.best, p, EnergyWeights())


def test_engines_are_bit_reproducible():
    g = random_graph(12, 0.5, 8)
    p = RamseyParams(4, 4)
    cfg = AnnealConfig(max_steps=3000, seed=11, trace_interval=100)
    a, b = anneal(g, p, None, cfg), anneal(g, p, None, cfg)
    assert a.best.adj == b.best.adj and a.trace.lines() == b.trace.lines()
    tcfg = TabuConfig(max_steps=500, seed=11, trace_interval=50)
    a, b = tabu_search(g, p, tcfg), tabu_search(g, p, tcfg)
    assert a.best.adj == b.best.adj and a.trace.lines() == b.trace.lines()


def test_accepted_anneal_deltas_match_recount():
    rng = random.Random(4)
    checked = 0
    while checked < 1000:
        n = rng.randint(5, 9)
        p = RamseyParams(rng.choice([3, 4]), rng.choice([3, 4]))
        w = EnergyWeights(1, 1)
        g = random_graph(n, 0.5, rng.getrandbits(32))
        res = anneal(g, p, w, AnnealConfig(max_steps=200, t_initial=2.0, seed=rng.getrandbits(32),
                                           record_moves=True))
        cur = g.copy()
        for mv in res.trace.moves:
            if not mv.accepted:
                continue
            before = recount(cur, p, w)
            cur.toggle(mv.u, mv.v)
            assert recount(cur, p, w) - before == mv.d_clique + mv.d_indep
            checked += 1


def test_tabu_moves_respect_tenure_and_aspiration():
    p = RamseyParams(4, 4)
    g = random_graph(12, 0.5, 21)
    cfg = TabuConfig(tenure=8, max_steps=2000, seed=5, candidate_batch=20, stagnation_limit=10**6,
                     record_moves=True)
    res = tabu_search(g, p, cfg)
    last: dict[tuple[int, int], int] = {}
    cur = g.copy()
    best = energy(g, p, EnergyWeights())
    for mv in res.trace.moves:
        pair = (mv.u, mv.v)
        before = energy(cur, p, EnergyWeights())
        cur.toggle(*pair)
        after = energy(cur, p, EnergyWeights())
        assert after - before == mv.d_clique + mv.d_indep
        if pair in last and mv.step - last[pair] <= cfg.tenure:
            assert mv.aspiration and after < best
        if mv.aspiration:
            assert after < best
        best = min(best, after)
        last[pair] = mv.step


def test_tabu_first_move_on_k4_reduces_triangles():
    res = tabu_search(Graph.complete(4), RamseyParams(3, 4),
                      TabuConfig(candidate_batch=6, max_steps=1, record_moves=True))
    first = res.trace.moves[0]
    assert first.d_clique == -2 and first.d_indep == 0
    assert res.best_energy < 4


def test_tabu_on_valid_input_returns_immediately():
    res = tabu_search(Graph.cycle(5), P33, TabuConfig(max_steps=100))
    assert res.best == Graph.cycle(5) and res.trace.steps == 0


def test_tabu_reaches_r44_witness_on_13_vertices():
    res = tabu_search(random_graph(13, 0.5, 0), RamseyParams(4, 4),
                      TabuConfig(max_steps=20_000, tenure=10, candidate_batch=40, stagnation_limit=300))
    assert res.best_energy == 0 and is_witness(res.best, 4, 4)


def test_strategic_kick_examples():
    g = random_graph(9, 0.5, 3)
    h = strategic_kick(g, 1, 77)
    assert sum((a ^ b).bit_count() for a, b in zip(g.adj, h.adj)) == 2
    assert strategic_kick(h, 1, 77) == g
    c5 = Graph.cycle(5)
    assert strategic_kick(c5, 10, 0) == c5.complement()
    with pytest.raises(DomainError):
        strategic_kick(c5, 0, 0)
    with pytest.raises(DomainError):
        strategic_kick(c5, 11, 0)


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=2, max_n=12), st.data())
def test_strategic_kick_changes_exactly_m_pairs(g, data):
    m = data.draw(st.integers(1, g.n * (g.n - 1) // 2))
    h = strategic_kick(g, m, data.draw(st.integers(0, 2**64 - 1)))
    assert sum((a ^ b).bit_count() for a, b in zip(g.adj, h.adj)) == 2 * m


def test_toxic_orbit_kick_examples():
    h, d = toxic_orbit_kick(Graph.complete(4), P33)
    assert d == 1 and h.edges() == [(0, 2), (1, 3)] and count_cliques(h, 3) == 0
    tri = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2)])
    h, d = toxic_orbit_kick(tri, P33)
    assert d == 1
    assert h.edges() == sorted([(0, 2), (2, 3), (3, 4), (4, 5), (0, 5)])
    with pytest.raises(DomainError):
        toxic_orbit_kick(Graph.cycle(5), P33)


def test_clique_first_search_breaks_cliques():
    g = random_graph(12, 0.7, 5)
    res = clique_first_search(g, RamseyParams(4, 4), 5000, seed=1)
    kc, ki = violation_counts(res.best, 4, 4)
    assert kc + ki == res.best_energy
    assert res.best_energy <= sum(violation_counts(g, 4, 4))


def test_circulant_energy_and_orbit_search():
    p = RamseyParams(4, 4)
    assert circulant_energy(DifferenceSet(17, frozenset({1, 2, 4, 8})), p, EnergyWeights()) == 0
    basis = multiplier_orbits(17, 2)
    res = anneal_orbits(basis, p, AnnealConfig(max_steps=500, seed=3, cooling=0.99), teleport_after=20)
    assert res.best_energy == circulant_energy(res.best, p, EnergyWeights())
    found = exhaustive_orbits(basis, p)
    assert found is not None and circulant_energy(found, p, EnergyWeights()) == 0
    ds, e, a = multiplier_tournament(17, p, [1, 2, 3], AnnealConfig(max_steps=800, seed=1, cooling=0.99))
    assert e == circulant_energy(ds, p, EnergyWeights()) and a in (1, 2, 3)


def test_exhaustive_orbits_limit():
    with pytest.raises(DomainError):
        exhaustive_orbits(multiplier_orbits(40, 1), P33, max_orbits=10)
