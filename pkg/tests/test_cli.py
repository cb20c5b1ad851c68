import subprocess
import sys

import pytest

from ramsey_lb.circulant import DifferenceSet, realize
from ramsey_lb.cli import main
from ramsey_lb.constructions import paley_graph
from ramsey_lb.graph import Graph, RamseyParams
from ramsey_lb.harness import Certificate, read_certificate, verify_graph, write_certificate


@pytest.fixture
def k4_cert(tmp_path):
    path = tmp_path / "k4.cert"
    write_certificate(Certificate(RamseyParams(4, 10), Graph.complete(4)), path)
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_paley17(tmp_path, capsys):
    path = tmp_path / "p17.cert"
    assert run(capsys, "construct", "paley", "--q", 17, "--out", path)[0] == 0
    code, out, err = run(capsys, "verify", path, "--r", 4, "--s", 4)
    assert code == 0 and "VALID n=17" in out and err == ""
    assert "alpha=3" in out and "cliques=0" in out


def test_verify_invalid_k4(k4_cert, capsys):
    code, out, _ = run(capsys, "verify", k4_cert)
    assert code == 1 and "INVALID clique {0,1,2,3}" in out


def test_verify_garbage_names_line(tmp_path, capsys):
    path = tmp_path / "garbage.cert"
    path.write_text("ramsey-cert v1\nn=3 r=3 s=3\n010\n1x1\n010\n")
    code, out, err = run(capsys, "verify", path)
    assert code == 2 and "line 4" in err and out == ""


def test_verify_missing_file_and_sentinel(tmp_path, capsys):
    assert run(capsys, "verify", tmp_path / "absent.cert")[0] == 2
    path = tmp_path / "c5.cert"
    run(capsys, "construct", "circulant", "--n", 5, "--S", "1", "--out", path)
    code, _, err = run(capsys, "verify", path)
    assert code == 2 and "r=s=0" in err
    assert run(capsys, "verify", path, "--r", 3, "--s", 3)[0] == 0


def test_construct_examples(tmp_path, capsys):
    p17 = tmp_path / "p17.cert"
    assert run(capsys, "construct", "paley", "--q", 17, "--out", p17) == (0, "", "")
    lines = p17.read_text().splitlines()
    assert lines[1] == "n=17 r=0 s=0" and len([l for l in lines[2:] if not l.startswith("#")]) == 17
    c5 = tmp_path / "c5.cert"
    run(capsys, "construct", "circulant", "--n", 5, "--S", "1", "--out", c5)
    assert read_certificate(c5).graph == Graph.cycle(5)
    code, _, err = run(capsys, "construct", "paley", "--q", 7, "--out", tmp_path / "x")
    assert code == 2 and "1 mod 4" in err
    assert not (tmp_path / "x").exists()


SMALL_CELLS = [(3, 3), (4, 4), (3, 9)]
SHIPPED = [
    ("paley", ["--q", 13], SMALL_CELLS),
    ("paley", ["--q", 17], SMALL_CELLS),
    ("power-residue", ["--p", 127, "--e", 3], [(4, 12), (3, 13)]),
    ("power-residue", ["--p", 13, "--e", 4, "--symmetrize"], SMALL_CELLS),
    ("circulant", ["--n", 13, "--S", "1,3,4"], SMALL_CELLS),
    ("random", ["--n", 12, "--p-edge", 0.4, "--seed", 9], SMALL_CELLS),
    ("sum-free", ["--n", 35, "--seed", 2], SMALL_CELLS),
    ("block", ["--n-blocks", 2, "--k", 4, "--s-intra", "1", "--s-inter", "0"], SMALL_CELLS),
]


@pytest.mark.parametrize("family,args,cells", SHIPPED)
def test_construct_verify_round_trip(tmp_path, capsys, family, args, cells):
    path = tmp_path / "g.cert"
    assert run(capsys, "construct", family, *args, "--out", path)[0] == 0
    g = read_certificate(path).graph
    for r, s in cells:
        code, out, _ = run(capsys, "verify", path, "--r", r, "--s", s)
        rep = verify_graph(g, r, s)
        assert code == (0 if rep.valid else 1)
        assert f"cliques={rep.clique_count}" in out and f"alpha={rep.alpha}" in out


def test_construct_matches_library(tmp_path, capsys):
    path = tmp_path / "c.cert"
    run(capsys, "construct", "circulant", "--n", 17, "--S", "1,2,4,8", "--out", path)
    assert read_certificate(path).graph == realize(DifferenceSet(17, frozenset({1, 2, 4, 8})))
    run(capsys, "construct", "paley", "--q", 29, "--out", path)
    assert read_certificate(path).graph == paley_graph(29)


def test_search_r33_and_determinism(tmp_path, capsys):
    a, b, tr = tmp_path / "a.cert", tmp_path / "b.cert", tmp_path / "trace.txt"
    code, out, err = run(capsys, "search", "--preset", "r33", "--r", 3, "--s", 3,
                         "--budget-steps", 100000, "--seed", 1, "--out", a, "--trace", tr)
    assert code == 0 and err == "" and "v1=5" in out and "total=" in out
    run(capsys, "search", "--preset", "r33", "--budget-steps", 100000, "--seed", 1, "--out", b)
    assert a.read_bytes() == b.read_bytes()
    assert read_certificate(a).graph.n == 5
    lines = tr.read_text().splitlines()
    assert lines[0] == "step temp energy best" and len(lines[1].split()) == 4


def test_search_unknown_preset(tmp_path, capsys):
    code, _, err = run(capsys, "search", "--preset", "r99", "--out", tmp_path / "x")
    assert code == 2 and "unknown preset" in err


def test_search_one_step_budget(tmp_path, capsys):
    codes = set()
    for seed in range(6):
        out = tmp_path / f"s{seed}.cert"
        code, _, _ = run(capsys, "search", "--preset", "r36", "--budget-steps", 1, "--seed", seed, "--out", out)
        assert code in (0, 3)
        assert out.exists() == (code == 0)
        codes.add(code)
    assert 3 in codes


def test_search_r44_paley(tmp_path, capsys):
    out = tmp_path / "p.cert"
    code, text, _ = run(capsys, "search", "--preset", "r44-paley", "--r", 4, "--s", 4, "--out", out)
    assert code == 0 and read_certificate(out).graph.n == 17 and "v1=17" in text


def test_search_restarts_pick_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.cert", tmp_path / "b.cert"
    for path in (a, b):
        code, _, _ = run(capsys, "search", "--preset", "r35", "--restarts", 2, "--seed", 3, "--out", path)
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_score_command(tmp_path, capsys):
    g1, g2 = tmp_path / "g1.cert", tmp_path / "g2.cert"
    write_certificate(Certificate(RamseyParams(3, 3), Graph.cycle(5)), g1)
    write_certificate(Certificate(None, Graph.cycle(6)), g2)
    code, out, _ = run(capsys, "score", g1, g2, "--n-sota", 5)
    assert code == 0 and "base=10" in out and "bonus=0.300000" in out


def test_extend_command(tmp_path, capsys):
    src, dst = tmp_path / "p.cert", tmp_path / "q.cert"
    write_certificate(Certificate(RamseyParams(3, 3), Graph.path(4)), src)
    code, out, _ = run(capsys, "extend", src, "--out", dst)
    assert code == 0 and "VALID n=5" in out
    code, out, _ = run(capsys, "extend", dst, "--out", tmp_path / "r.cert")
    assert code == 1


def test_presets_listing(capsys):
    code, out, _ = run(capsys, "presets")
    assert code == 0 and "r33" in out and "r39-circulant" in out


def test_module_entry_point(tmp_path):
    path = tmp_path / "c.cert"
    proc = subprocess.run([sys.executable, "-m", "ramsey_lb", "construct", "circulant", "--n", "5",
                           "--S", "1", "--out", str(path)], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stderr == ""
    proc = subprocess.run([sys.executable, "-m", "ramsey_lb", "verify", str(path), "--r", "3", "--s", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "VALID n=5" in proc.stdout
