from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import graphs
from oracles import naive_valid
from ramsey_lb.constructions import paley_graph
from ramsey_lb.graph import DomainError, Graph, RamseyParams
from ramsey_lb.harness import (
    PRESETS,
    TABLE1_LOWER_BOUNDS,
    Certificate,
    CertificateError,
    Preset,
    Stage,
    best_known_witness_size,
    expected_violations,
    get_preset,
    run_preset,
    score,
    verify_certificate,
    verify_graph,
)

C5 = Graph.cycle(5)


def test_expected_violations_examples():
    assert expected_violations(10, RamseyParams(3, 5)) == 15.24609375
    assert expected_violations(3, RamseyParams(3, 3)) == 0.25
    assert expected_violations(4, RamseyParams(4, 4)) == 0.03125
    with pytest.raises(DomainError):
        expected_violations(4, RamseyParams(3, 5))


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 6), st.integers(2, 22), st.integers(0, 200))
def test_expected_violations_monotone(r, s, v):
    v = max(v, r, s)
    p = RamseyParams(r, s)
    assert expected_violations(v + 1, p) > expected_violations(v, p)


def test_expected_violations_no_overflow_at_large_binomials():
    assert expected_violations(237, RamseyParams(4, 20)) > 0


def test_score_examples():
    # the cell is widened so an edgeless graph on 60/61 vertices is a valid witness
    rep = score(Graph.empty(61), None, RamseyParams(3, 62, 60))
    assert (rep.base_score, rep.total, rep.valid) == (244, 244, True)
    assert score(Graph.empty(60), None, RamseyParams(3, 62, 60)).total == 120
    bad = score(Graph.complete(3), None, RamseyParams(3, 13, 60))
    assert (bad.total, bad.valid) == (-1, False)
    rep = score(C5, Graph.empty(8), RamseyParams(3, 3, 5))
    assert rep.bonus == 0 and rep.total == 10


def test_score_bonus_fraction():
    # C6 has the two independent triples {0,2,4}, {1,3,5}; E_viol(6) = 20/8 + 20/8 = 5
    rep = score(C5, Graph.cycle(6), RamseyParams(3, 3, 5))
    assert rep.bonus == float(Fraction(1, 2) * (1 - Fraction(2, 5)))
    assert rep.total == 10 + rep.bonus


def test_score_prospect_not_larger_gives_no_bonus():
    assert score(C5, Graph.cycle(4), RamseyParams(3, 3, 5)).bonus == 0
    assert score(C5, C5, RamseyParams(3, 3, 5)).bonus == 0


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=9), graphs(max_n=10), st.integers(0, 12))
def test_score_invariants(g1, g2, n_sota):
    p = RamseyParams(3, 3, n_sota)
    rep = score(g1, g2, p)
    if rep.valid:
        assert 0 <= rep.bonus <= 0.5
        assert rep.total == rep.base_score + rep.bonus
        assert rep.base_score in (g1.n, 2 * g1.n, 4 * g1.n)
        if g2.n <= g1.n:
            assert rep.bonus == 0
    else:
        assert rep.total == -1
    assert rep.valid == naive_valid(g1, 3, 3)


def test_table_reference_data():
    assert TABLE1_LOWER_BOUNDS[(4, 4)] == 18
    assert best_known_witness_size(3, 13) == 60
    assert best_known_witness_size(13, 3) == 60
    assert best_known_witness_size(9, 9) == 0


# -- certificates ------------------------------------------------------------------------

def test_certificate_round_trip():
    c = Certificate(RamseyParams(4, 4), paley_graph(17), {"family": "paley", "q": "17"})
    text = c.to_text()
    lines = text.splitlines()
    assert lines[0] == "ramsey-cert v1" and lines[1] == "n=17 r=4 s=4"
    assert lines[-2:] == ["# family=paley", "# q=17"]
    back = Certificate.from_text(text)
    assert back.graph == c.graph and back.params == c.params and back.meta == c.meta
    assert back.to_text() == text


def test_sentinel_certificate():
    c = Certificate.from_text(Certificate(None, C5).to_text())
    assert c.params is None
    with pytest.raises(DomainError):
        verify_certificate(c)
    assert verify_certificate(c, 3, 3).valid


@pytest.mark.parametrize("text,line", [
    ("", 1),
    ("ramsey-cert v2\nn=1 r=3 s=3\n0\n", 1),
    ("ramsey-cert v1\n", 2),
    ("ramsey-cert v1\nn=2 r=3\n00\n00\n", 2),
    ("ramsey-cert v1\nn=2 r=3 s=x\n00\n00\n", 2),
    ("ramsey-cert v1\nn=2 r=3 s=3\n00\n", 4),
    ("ramsey-cert v1\nn=2 r=3 s=3\n01\n00\n", 4),
    ("ramsey-cert v1\nn=2 r=3 s=3\n10\n00\n", 3),
    ("ramsey-cert v1\nn=2 r=3 s=3\n0a\n00\n", 3),
    ("ramsey-cert v1\nn=2 r=3 s=3\n00\n00\nextra\n", 5),
    ("ramsey-cert v1\nn=2 r=3 s=0\n00\n00\n", 2),
    ("ramsey-cert v1\nn=2 r=1 s=3\n00\n00\n", 2),
    ("ramsey-cert v1\nn=0 r=3 s=3\n", 2),
])
def test_certificate_parse_errors_name_the_line(text, line):
    with pytest.raises(CertificateError) as err:
        Certificate.from_text(text)
    assert err.value.line == line


def test_verify_examples():
    rep = verify_certificate(Certificate(RamseyParams(4, 4), paley_graph(17)))
    assert rep.valid and rep.summary() == "VALID n=17" and rep.alpha == 3
    assert verify_certificate(Certificate(RamseyParams(3, 3), C5)).valid
    rep = verify_certificate(Certificate(RamseyParams(4, 10), Graph.complete(4)))
    assert not rep.valid and rep.clique_count == 1
    assert rep.summary() == "INVALID clique {0,1,2,3}"


def test_verify_reports_independent_set_witness():
    rep = verify_graph(Graph.empty(4), 3, 3)
    assert rep.indep_count == 4 and rep.witness_kind == "independent_set"
    assert len(rep.witness) == 3 and rep.summary().startswith("INVALID independent-set {")


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=9), st.integers(2, 4), st.integers(2, 4))
def test_verify_graph_agrees_with_oracle(g, r, s):
    rep = verify_graph(g, r, s)
    assert rep.valid == naive_valid(g, r, s)
    if not rep.valid:
        w = rep.witness
        if rep.witness_kind == "clique":
            assert len(w) == r and all(g.has_edge(a, b) for a in w for b in w if a < b)
        else:
            assert len(w) == s and not any(g.has_edge(a, b) for a in w for b in w if a < b)


# -- presets -------------------------------------------------------------------------------

def test_preset_validation():
    with pytest.raises(DomainError):
        Preset("x", (3, 3), ())
    with pytest.raises(DomainError):
        Preset("x", (3, 3), (Stage("mutate", "random"),))
    with pytest.raises(KeyError):
        get_preset("nope")


def test_shipped_presets_cover_each_family():
    methods = {st.method for pr in PRESETS.values() for st in pr.stages}
    assert {"random", "paley", "power_residue", "sum_free_circulant", "orbit_circulant"} <= methods
    assert {"r33", "r35", "r36", "r44-paley", "r4s-power-residue", "r39-circulant",
            "r313-cyclic-bootstrap"} <= set(PRESETS)


def test_run_preset_r33():
    res = run_preset(get_preset("r33", seed=1))
    assert res.ok and res.certificate.graph.n == 5
    assert verify_certificate(res.certificate).valid
    assert any("extension to n=6 failed" in e for e in res.events)
    assert res.score_report.base_score == 10


def test_run_preset_r44_paley():
    res = run_preset(get_preset("r44-paley"))
    assert res.certificate.graph == paley_graph(17)
    assert res.score_report.total >= 34


def test_run_preset_is_deterministic():
    a = run_preset(get_preset("r35", seed=4))
    b = run_preset(get_preset("r35", seed=4))
    assert a.certificate.to_text() == b.certificate.to_text()
    assert a.trace == b.trace


def test_run_preset_budget_exhaustion_reports_best_invalid():
    for seed in range(20):
        res = run_preset(get_preset("r36", seed=seed, max_steps=1))
        if not res.ok:
            assert res.status == "budget_exhausted"
            assert res.best_invalid is not None and res.best_invalid_energy > 0
            return
    pytest.fail("every seed produced a witness in one step")


def test_cell_override_uses_table_reference():
    pr = get_preset("r33", r=3, s=4, seed=2)
    assert pr.params == RamseyParams(3, 4, 8)
    res = run_preset(pr)
    assert res.ok and verify_certificate(res.certificate).valid


def test_report_lines_mark_capped_counts_and_inexact_alpha():
    rep = verify_graph(Graph.empty(12), 3, 4, count_cap=100, alpha_node_limit=1)
    lines = rep.lines()
    assert lines[0] == "n=12 r=3 s=4" and lines[1] == "cliques=0"
    assert lines[2] == "independent_sets>=100"
    assert lines[3].startswith("alpha>=") and "budget" in lines[3]
    assert not rep.valid and lines[4].startswith("INVALID independent-set")
    exact = verify_graph(Graph.empty(12), 3, 4, count_cap=None)
    assert exact.lines()[2:4] == ["independent_sets=495", "alpha=12"]
