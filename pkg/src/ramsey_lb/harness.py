"""Scoring, witness certificates and preset search pipelines."""

from __future__ import annotations

import logging
import math
import random
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import comb
from typing import Any

from . import __version__
from .circulant import (
    DifferenceSet,
    coprime_multipliers,
    local_validity,
    multiplier_orbits,
    realize,
    scale_difference_set,
)
from .constructions import (
    BlockSpec,
    block_circulant,
    max_sum_free_set,
    paley_graph,
    power_residue_graph,
    random_graph,
)
from .extension import ghost_beam_extend, mini_sa_select, propose
from .graph import (
    DomainError,
    Graph,
    RamseyParams,
    count_cliques,
    count_independent_sets,
    find_clique,
    greedy_alpha,
    is_witness,
    max_clique,
    max_clique_bounded,
    violation_counts,
)
from .local_search import (
    AnnealConfig,
    EnergyWeights,
    SearchTrace,
    TabuConfig,
    anneal,
    clique_first_search,
    exhaustive_orbits,
    multiplier_tournament,
    tabu_search,
)

log = logging.getLogger(__name__)

# Lower bounds R(r, s) >= value matched or set by the discovered search programs.
TABLE1_LOWER_BOUNDS: dict[tuple[int, int], int] = {
    (3, 3): 6, (3, 4): 9, (3, 5): 14, (3, 6): 18, (3, 7): 23, (3, 8): 28, (3, 9): 36,
    (3, 10): 40, (3, 11): 47, (3, 13): 61, (3, 16): 82, (3, 17): 92, (3, 18): 100,
    (3, 19): 106, (3, 20): 111, (3, 21): 122, (3, 22): 132,
    (4, 4): 18, (4, 5): 25, (4, 6): 36, (4, 7): 49, (4, 10): 92, (4, 12): 128,
    (4, 13): 139, (4, 14): 148, (4, 15): 159, (4, 16): 174, (4, 17): 200, (4, 18): 209,
    (4, 19): 219, (4, 20): 237,
    (5, 7): 80, (5, 8): 101, (5, 9): 133, (6, 7): 115,
}


def best_known_witness_size(r: int, s: int) -> int:
    """Largest witness size implied by the table (bound - 1), 0 if the cell is absent."""
    key = (min(r, s), max(r, s))
    return TABLE1_LOWER_BOUNDS.get(key, 1) - 1


# -- scoring ---------------------------------------------------------------------------

def _expected_violations_exact(v: int, r: int, s: int) -> Fraction:
    return Fraction(comb(v, r), 2 ** comb(r, 2)) + Fraction(comb(v, s), 2 ** comb(s, 2))


def expected_violations(v: int, p: RamseyParams) -> float:
    """Expected r-cliques plus s-independent sets in G(v, 1/2)."""
    if v < max(p.r, p.s):
        raise DomainError(f"v={v} is smaller than max(r, s)")
    return float(_expected_violations_exact(v, p.r, p.s))


@dataclass(frozen=True)
class ScoreReport:
    v1: int
    v2: int
    base_score: float
    bonus: float
    total: float
    valid: bool


def count_violations(g: Graph, p: RamseyParams, cap: int | None = None) -> int:
    kc, ki = violation_counts(g, p.r, p.s, cap)
    return kc + ki


def score(g1: Graph, g2: Graph | None, p: RamseyParams) -> ScoreReport:
    """Score a (primary, prospect) pair the way the evolutionary loop ranks programs."""
    v1 = g1.n
    v2 = g2.n if g2 is not None else 0
    if not is_witness(g1, p.r, p.s):
        return ScoreReport(v1, v2, -1.0, 0.0, -1.0, False)
    if v1 > p.n_sota:
        base = 4 * v1
    elif v1 == p.n_sota:
        base = 2 * v1
    else:
        base = v1
    bonus = Fraction(0)
    if g2 is not None and v2 > v1 and v2 >= max(p.r, p.s):
        e_viol = _expected_violations_exact(v2, p.r, p.s)
        cap = None if v2 <= 64 else math.ceil(10 * e_viol)
        viol = count_violations(g2, p, cap)
        bonus = Fraction(1, 2) * max(Fraction(0), 1 - viol / e_viol)
    elif g2 is not None and v2 > v1:
        # too small to hold any forbidden subgraph: violation-free prospect
        bonus = Fraction(1, 2)
    return ScoreReport(v1, v2, float(base), float(bonus), float(base + bonus), True)


# -- certificates ----------------------------------------------------------------------

CERT_HEADER = "ramsey-cert v1"


class CertificateError(ValueError):
    """Malformed certificate text; ``line`` is 1-based."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass
class Certificate:
    """A witness claim.  ``params`` is None for construction-only (r = s = 0) files."""

    params: RamseyParams | None
    graph: Graph
    meta: dict[str, str] = field(default_factory=dict)

    def to_text(self) -> str:
        r, s = (self.params.r, self.params.s) if self.params else (0, 0)
        lines = [CERT_HEADER, f"n={self.graph.n} r={r} s={s}"]
        lines += self.graph.to_rows()
        lines += [f"# {k}={v}" for k, v in self.meta.items()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Certificate":
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        if not lines or lines[0].strip() != CERT_HEADER:
            raise CertificateError(1, f"expected header {CERT_HEADER!r}")
        if len(lines) < 2:
            raise CertificateError(2, "missing 'n=<n> r=<r> s=<s>' line")
        fields = {}
        for tok in lines[1].split():
            key, sep, val = tok.partition("=")
            if not sep or key not in ("n", "r", "s") or not val.isdigit():
                raise CertificateError(2, f"bad field {tok!r}")
            fields[key] = int(val)
        if set(fields) != {"n", "r", "s"}:
            raise CertificateError(2, "expected fields n, r and s")
        n, r, s = fields["n"], fields["r"], fields["s"]
        if not 1 <= n <= 512:
            raise CertificateError(2, f"n={n} outside [1, 512]")
        if len(lines) < n + 2:
            raise CertificateError(len(lines) + 1, f"expected {n} matrix rows")
        rows = lines[2:n + 2]
        for i, row in enumerate(rows):
            if len(row) != n or set(row) - {"0", "1"}:
                raise CertificateError(i + 3, f"row must be {n} characters of 0/1")
            if row[i] != "0":
                raise CertificateError(i + 3, "nonzero diagonal entry")
            for j in range(i):
                if row[j] != rows[j][i]:
                    raise CertificateError(i + 3, f"matrix not symmetric at ({i},{j})")
        meta = {}
        for k, line in enumerate(lines[n + 2:], start=n + 3):
            if not line.startswith("#"):
                raise CertificateError(k, "trailing lines must be '# key=value' metadata")
            key, sep, val = line[1:].strip().partition("=")
            if not sep or not key:
                raise CertificateError(k, "metadata must be 'key=value'")
            meta[key.strip()] = val.strip()
        if (r == 0) != (s == 0):
            raise CertificateError(2, "r and s must both be zero or both be >= 2")
        try:
            params = RamseyParams(r, s) if r else None
        except DomainError as exc:
            raise CertificateError(2, str(exc)) from None
        return cls(params, Graph.from_matrix(rows), meta)


def read_certificate(path) -> Certificate:
    with open(path, encoding="utf-8") as fh:
        return Certificate.from_text(fh.read())


def write_certificate(cert: Certificate, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(cert.to_text())


# Exact counts stop here; larger counts are reported as lower bounds.
COUNT_CAP = 1_000_000
# Branch-and-bound nodes spent on the exact independence number.
ALPHA_NODE_LIMIT = 300_000


@dataclass(frozen=True)
class VerificationReport:
    """Counts at (r, s), alpha and the verdict.

    ``clique_count`` / ``indep_count`` equal to ``count_cap`` are lower bounds.
    When ``alpha_exact`` is False, ``alpha`` is the largest independent set found
    within the node budget (a lower bound); validity never depends on it.
    """

    n: int
    r: int
    s: int
    clique_count: int
    indep_count: int
    alpha: int
    valid: bool
    witness: tuple[int, ...] | None = None
    witness_kind: str | None = None
    alpha_exact: bool = True
    count_cap: int | None = None

    def summary(self) -> str:
        if self.valid:
            return f"VALID n={self.n}"
        kind = "clique" if self.witness_kind == "clique" else "independent-set"
        return f"INVALID {kind} {{{','.join(map(str, self.witness))}}}"

    def lines(self) -> list[str]:
        def fmt(c):
            return f">={c}" if self.count_cap is not None and c >= self.count_cap else f"={c}"
        return [f"n={self.n} r={self.r} s={self.s}",
                f"cliques{fmt(self.clique_count)}",
                f"independent_sets{fmt(self.indep_count)}",
                f"alpha={self.alpha}" if self.alpha_exact else f"alpha>={self.alpha} (search budget reached)",
                self.summary()]


def verify_graph(g: Graph, r: int, s: int, count_cap: int | None = COUNT_CAP,
                 alpha_node_limit: int | None = ALPHA_NODE_LIMIT) -> VerificationReport:
    """Decide (r, s)-freeness exactly, then count violations and compute alpha.

    The verdict comes from a clique search and a stop-at-s independent-set
    search, both exhaustive.  Counts are capped at ``count_cap``; alpha is
    exact unless the node budget runs out first.
    """
    comp = g.complement_rows()
    clique = find_clique(g.adj, g.full_mask, r) if r <= g.n else None
    iset = max_clique(comp, lower=s - 1, stop_at=s) if s <= g.n else []
    kc = count_cliques(g, r, count_cap) if clique else 0
    ki = count_independent_sets(g, s, count_cap) if iset else 0
    if count_cap is not None:
        kc, ki = min(kc, count_cap), min(ki, count_cap)
    alpha_set, exact = max_clique_bounded(comp, lower=len(iset) - 1 if iset else 0,
                                          node_limit=alpha_node_limit)
    if not alpha_set:
        alpha_set = iset
    witness = kind = None
    if clique:
        witness, kind = tuple(clique), "clique"
    elif iset:
        witness, kind = tuple(iset[:s]), "independent_set"
    return VerificationReport(g.n, r, s, kc, ki, len(alpha_set), not clique and not iset,
                              witness, kind, exact, count_cap)


def verify_certificate(c: Certificate, r: int | None = None, s: int | None = None) -> VerificationReport:
    """Verify ``c`` at its own (r, s) unless overridden; construction-only files need overrides."""
    if r is None or s is None:
        if c.params is None:
            raise DomainError("construction-only certificate (r=s=0): supply r and s explicitly")
        r = c.params.r if r is None else r
        s = c.params.s if s is None else s
    RamseyParams(r, s)
    return verify_graph(c.graph, r, s)


# -- presets ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Stage:
    """One pipeline step: ``kind`` is construct, refine or extend; ``method`` picks the variant."""

    kind: str
    method: str
    params: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Budget:
    max_steps: int | None = None
    max_seconds: float | None = None


@dataclass(frozen=True)
class Preset:
    name: str
    cell: tuple[int, int]
    stages: tuple[Stage, ...]
    budget: Budget = Budget()
    seed: int = 0
    n_sota: int | None = None

    def __post_init__(self):
        if not self.stages:
            raise DomainError("a preset needs at least one stage")
        for st in self.stages:
            if st.kind not in ("construct", "refine", "extend"):
                raise DomainError(f"unknown stage kind {st.kind!r}")

    @property
    def params(self) -> RamseyParams:
        r, s = self.cell
        n_sota = self.n_sota if self.n_sota is not None else best_known_witness_size(r, s)
        return RamseyParams(r, s, max(n_sota, 0))


def _anneal_stage(**kw) -> Stage:
    return Stage("refine", "anneal", kw)


PRESETS: dict[str, Preset] = {
    "r33": Preset("r33", (3, 3), (
        Stage("construct", "random", {"n": 5, "p_edge": 0.5}),
        _anneal_stage(max_steps=100_000, cooling=0.999, reheat_threshold=0.05),
        Stage("extend", "vertex", {"strategies": ["random", "mis_connect"], "burst_steps": 200,
                                   "refine": "anneal", "refine_steps": 5_000, "max_failures": 1}),
    ), Budget(max_steps=100_000, max_seconds=10.0)),
    "r35": Preset("r35", (3, 5), (
        Stage("construct", "random", {"n": 10, "p_edge": 0.5}),
        _anneal_stage(max_steps=100_000, cooling=0.9995, reheat_threshold=0.05),
        Stage("extend", "vertex", {"strategies": ["random", "mis_connect", "clone_perturb"],
                                   "burst_steps": 500, "refine": "anneal", "refine_steps": 50_000,
                                   "cooling": 0.9995, "reheat_threshold": 0.05, "max_failures": 2}),
    ), Budget(max_steps=2_000_000, max_seconds=60.0)),
    "r36": Preset("r36", (3, 6), (
        Stage("construct", "random", {"n": 12, "p_edge": 0.4}),
        _anneal_stage(max_steps=100_000, cooling=0.9995, reheat_threshold=0.05,
                      w_clique=100.0, w_indep=1.0),
        Stage("extend", "vertex", {"strategies": ["random", "mis_connect", "clone_perturb"],
                                   "p_edge": 0.45, "burst_steps": 500, "refine": "anneal",
                                   "refine_steps": 150_000, "cooling": 0.9999, "reheat_threshold": 0.05,
                                   "w_clique": 100.0, "w_indep": 1.0, "max_failures": 3}),
    ), Budget(max_steps=3_000_000, max_seconds=60.0)),
    "r44-paley": Preset("r44-paley", (4, 4), (
        Stage("construct", "paley", {"q": 17}),
        Stage("extend", "vertex", {"strategies": ["clone_perturb", "random"], "burst_steps": 500,
                                   "refine": "anneal", "refine_steps": 20_000, "max_failures": 1}),
    ), Budget(max_steps=200_000, max_seconds=30.0)),
    "r4s-power-residue": Preset("r4s-power-residue", (4, 13), (
        Stage("construct", "power_residue", {"p": 127, "e": 3}),
        Stage("extend", "vertex", {"strategies": ["clone_perturb"], "rate": 0.1, "burst_steps": 100,
                                   "refine": "tabu", "refine_steps": 200, "candidate_batch": 64,
                                   "max_failures": 1}),
    ), Budget(max_steps=2_000, max_seconds=120.0)),
    "r39-circulant": Preset("r39-circulant", (3, 9), (
        Stage("construct", "sum_free_circulant", {"n_min": 24, "n_max": 40, "tries": 60,
                                                  "alpha_trials": 200}),
        Stage("extend", "vertex", {"strategies": ["mis_connect", "greedy_growth", "hitting_set"],
                                   "burst_steps": 300, "refine": "anneal", "refine_steps": 20_000,
                                   "w_clique": 100.0, "w_indep": 1.0, "max_failures": 2}),
    ), Budget(max_steps=500_000, max_seconds=300.0)),
    "r313-cyclic-bootstrap": Preset("r313-cyclic-bootstrap", (3, 13), (
        Stage("construct", "sum_free_circulant", {"n_min": 40, "n_max": 60, "tries": 20,
                                                  "alpha_trials": 300}),
        Stage("extend", "vertex", {"strategies": ["hitting_set", "mis_connect", "random"],
                                   "burst_steps": 100, "refine": "anneal", "refine_steps": 3_000,
                                   "adaptive": True, "max_failures": 1}),
    ), Budget(max_steps=50_000, max_seconds=120.0)),
    "r46-orbit": Preset("r46-orbit", (4, 6), (
        Stage("construct", "orbit_circulant", {"n_min": 20, "n_max": 35, "multipliers": 3,
                                               "steps_per_multiplier": 300, "teleport_after": 50}),
        Stage("extend", "ghost_beam", {"beam_width": 4, "per_node_budget": 400, "max_new": 3}),
    ), Budget(max_steps=200_000, max_seconds=120.0)),
    "r44-tabu": Preset("r44-tabu", (4, 4), (
        Stage("construct", "random", {"n": 13, "p_edge": 0.5}),
        Stage("refine", "tabu", {"max_steps": 20_000, "tenure": 10, "candidate_batch": 40,
                                 "stagnation_limit": 300}),
    ), Budget(max_steps=20_000, max_seconds=60.0)),
}


def get_preset(name: str, *, r: int | None = None, s: int | None = None, seed: int | None = None,
               max_steps: int | None = None, max_seconds: float | None = None) -> Preset:
    """Look up a shipped preset, optionally overriding its cell, seed and budget."""
    if name not in PRESETS:
        raise KeyError(name)
    pr = PRESETS[name]
    cell = (r if r is not None else pr.cell[0], s if s is not None else pr.cell[1])
    budget = Budget(max_steps if max_steps is not None else pr.budget.max_steps,
                    max_seconds if max_seconds is not None else pr.budget.max_seconds)
    return replace(pr, cell=cell, budget=budget, seed=pr.seed if seed is None else seed,
                   n_sota=None if cell != pr.cell else pr.n_sota)


# -- pipeline runner -----------------------------------------------------------------------

@dataclass
class RunResult:
    """Outcome of ``run_preset``.  ``certificate`` is None when no valid graph was found."""

    certificate: Certificate | None
    score_report: ScoreReport | None
    trace: list[str]
    events: list[str] = field(default_factory=list)
    best_invalid: Graph | None = None
    best_invalid_energy: float | None = None
    prospect: Graph | None = None
    status: str = "ok"
    steps_used: int = 0

    @property
    def ok(self) -> bool:
        return self.certificate is not None


class _Run:
    """Mutable bookkeeping for one preset execution."""

    def __init__(self, pr: Preset):
        self.pr = pr
        self.p = pr.params
        self.rng = random.Random(pr.seed)
        self.steps = 0
        self.deadline = None if pr.budget.max_seconds is None else time.monotonic() + pr.budget.max_seconds
        self.trace: list[str] = []
        self.events: list[str] = []
        self.current: Graph | None = None
        self.best_valid: Graph | None = None
        self.prospect: Graph | None = None
        self.prospect_energy: float | None = None

    def seed(self) -> int:
        return self.rng.getrandbits(64)

    def steps_left(self) -> int | None:
        if self.pr.budget.max_steps is None:
            return None
        return max(self.pr.budget.max_steps - self.steps, 0)

    def out_of_budget(self) -> bool:
        left = self.steps_left()
        if left is not None and left <= 0:
            return True
        return self.deadline is not None and time.monotonic() > self.deadline

    def cap(self, want: int) -> int:
        left = self.steps_left()
        return want if left is None else min(want, left)

    def log(self, msg: str) -> None:
        self.events.append(msg)
        log.info(msg)

    def record_trace(self, tr: SearchTrace) -> None:
        """Append engine records as 'step temp energy best' with steps offset by the run total."""
        base = self.steps
        for line in tr.lines():
            step, rest = line.split(" ", 1)
            self.trace.append(f"{base + int(step)} {rest}")
        self.steps += tr.steps

    def offer(self, g: Graph) -> bool:
        """Record ``g`` as the best valid graph if it is a witness and not smaller."""
        if is_witness(g, self.p.r, self.p.s):
            if self.best_valid is None or g.n > self.best_valid.n:
                self.best_valid = g
                self.log(f"valid n={g.n}")
            return True
        return False

    def note_prospect(self, g: Graph, e: float) -> None:
        if self.prospect is None or g.n > self.prospect.n or (
                g.n == self.prospect.n and e < self.prospect_energy):
            self.prospect, self.prospect_energy = g, e


def _weights(params: dict) -> EnergyWeights:
    return EnergyWeights(params.get("w_clique", 1.0), params.get("w_indep", 1.0), params.get("adaptive", False))


def _refine(run: _Run, g: Graph, method: str, params: dict, steps: int) -> tuple[Graph, float]:
    steps = run.cap(steps)
    if steps <= 0:
        return g, float(sum(violation_counts(g, run.p.r, run.p.s)))
    w = _weights(params)
    if method == "anneal":
        cfg = AnnealConfig(t_initial=params.get("t_initial", 1.0), cooling=params.get("cooling", 0.9995),
                           max_steps=steps, reheat_threshold=params.get("reheat_threshold"),
                           seed=run.seed())
        res = anneal(g, run.p, w, cfg, deadline=run.deadline)
    elif method == "tabu":
        cfg = TabuConfig(tenure=params.get("tenure", max(1, g.n // 4)),
                         stagnation_limit=params.get("stagnation_limit", 500),
                         candidate_batch=params.get("candidate_batch", 64),
                         kick_fraction=params.get("kick_fraction", 0.02), max_steps=steps, seed=run.seed())
        res = tabu_search(g, run.p, cfg, w, deadline=run.deadline)
    elif method == "clique_first":
        res = clique_first_search(g, run.p, steps, run.seed(), deadline=run.deadline)
    else:
        raise DomainError(f"unknown refine method {method!r}")
    run.record_trace(res.trace)
    return res.best, res.best_energy


def _sum_free_circulant(run: _Run, params: dict) -> Graph | None:
    """Iterative deepening over n: random maximal sum-free sets, greedy-alpha filter, exact alpha."""
    r, s = run.p.r, run.p.s
    if r != 3:
        raise DomainError("sum-free circulants target r = 3")
    best = None
    misses = 0
    for n in range(params["n_min"], params["n_max"] + 1):
        hit = None
        for _ in range(params.get("tries", 50)):
            if run.out_of_budget():
                break
            sf = max_sum_free_set(n, run.seed())
            g = sf.graph()
            run.steps += 1
            if greedy_alpha(g, params.get("alpha_trials", 200), run.seed()) >= s:
                continue
            if is_witness(g, 3, s):
                hit = g
                run.log(f"sum-free circulant n={n} S={sorted(sf.members)}")
                break
        if hit is not None:
            best = hit
            misses = 0
        else:
            misses += 1
            if best is not None and misses >= params.get("patience", 3):
                break
        if run.out_of_budget():
            break
    return best


def _orbit_circulant(run: _Run, params: dict) -> Graph | None:
    """Increasing n; multiplier tournament per size, seeded by scaling the last success."""
    best_ds: DifferenceSet | None = None
    best_graph = None
    cfg = AnnealConfig(t_initial=params.get("t_initial", 2.0), cooling=params.get("cooling", 0.99),
                       max_steps=params.get("steps_per_multiplier", 300), reheat_threshold=0.05)
    for n in range(params["n_min"], params["n_max"] + 1):
        if run.out_of_budget():
            break
        mults = [1] + coprime_multipliers(n)[: params.get("multipliers", 3)]
        init = scale_difference_set(best_ds, n) if best_ds is not None else None
        basis = multiplier_orbits(n, 1)
        ds = None
        if len(basis.orbits) <= params.get("exhaustive_max", 12):
            ds = exhaustive_orbits(basis, run.p, params.get("degree_window"), params.get("exhaustive_max", 12))
            e = 0.0 if ds is not None else 1.0
        if ds is None:
            ds, e, a = multiplier_tournament(n, run.p, mults, replace(cfg, seed=run.seed()), init=init,
                                             teleport_after=params.get("teleport_after"),
                                             deadline=run.deadline)
        run.steps += cfg.max_steps
        if e == 0 and local_validity(ds, run.p).valid:
            best_ds, best_graph = ds, realize(ds)
            run.log(f"orbit circulant n={n} S={sorted(ds.s)}")
    return best_graph


def _construct(run: _Run, st: Stage) -> Graph | None:
    m, prm = st.method, st.params
    if m == "random":
        return random_graph(prm["n"], prm.get("p_edge", 0.5), run.seed())
    if m == "paley":
        return paley_graph(prm["q"])
    if m == "power_residue":
        return power_residue_graph(prm["p"], prm["e"], prm.get("symmetrize", False))
    if m == "circulant":
        return realize(DifferenceSet(prm["n"], frozenset(prm["s"])))
    if m == "block":
        return block_circulant(BlockSpec(prm["n_blocks"], prm["k"], frozenset(prm["s_intra"]),
                                         frozenset(prm.get("s_inter", ()))))
    if m == "sum_free_circulant":
        return _sum_free_circulant(run, prm)
    if m == "orbit_circulant":
        return _orbit_circulant(run, prm)
    raise DomainError(f"unknown construction {m!r}")


def _extend_vertex(run: _Run, prm: dict) -> None:
    """n -> n+1 loop: propose per strategy, mini-SA pick, full refinement, verify."""
    failures = 0
    max_size = prm.get("max_size", 512)
    while run.best_valid is not None and run.best_valid.n < max_size and not run.out_of_budget():
        base = run.best_valid
        cands = [propose(base, run.p, strat, run.seed(), **prm) for strat in prm["strategies"]]
        picked = mini_sa_select(cands, run.p, prm.get("burst_steps", 200), run.seed(), _weights(prm))
        run.steps += prm.get("burst_steps", 200) * len(cands)
        g = picked.realize()
        if not run.offer(g):
            g, e = _refine(run, g, prm.get("refine", "anneal"), prm, prm.get("refine_steps", 10_000))
            if not run.offer(g):
                run.note_prospect(g, e)
                failures += 1
                run.log(f"extension to n={g.n} failed (energy {e:g})")
                if failures >= prm.get("max_failures", 1):
                    return
                continue
        failures = 0


def run_preset(pr: Preset) -> RunResult:
    """Execute a preset's stages in order and return the largest verified certificate."""
    run = _Run(pr)
    for st in pr.stages:
        if run.out_of_budget():
            run.log(f"budget exhausted before stage {st.kind}:{st.method}")
            break
        if st.kind == "construct":
            g = _construct(run, st)
            if g is not None:
                run.current = g
                run.offer(g)
        elif st.kind == "refine":
            g = run.current
            if g is None:
                continue
            if not is_witness(g, run.p.r, run.p.s):
                g, e = _refine(run, g, st.method, st.params, st.params.get("max_steps", 100_000))
                run.current = g
                if not run.offer(g):
                    run.note_prospect(g, e)
        elif st.kind == "extend":
            if run.best_valid is None:
                continue
            if st.method == "vertex":
                _extend_vertex(run, st.params)
            elif st.method == "ghost_beam":
                h = ghost_beam_extend(run.best_valid, run.p, st.params.get("beam_width", 4),
                                      st.params.get("per_node_budget", 200), run.seed(),
                                      max_new=st.params.get("max_new"), rate=st.params.get("rate", 0.1))
                if h is None:
                    run.log(f"ghost extension beyond n={run.best_valid.n} failed")
                else:
                    run.offer(h)
            else:
                raise DomainError(f"unknown extension method {st.method!r}")

    meta = {"preset": pr.name, "seed": str(pr.seed), "version": __version__}
    if run.best_valid is None:
        g = run.current
        e = None
        if g is not None:
            e = float(sum(violation_counts(g, run.p.r, run.p.s)))
        return RunResult(None, None, run.trace, run.events, best_invalid=g, best_invalid_energy=e,
                         prospect=run.prospect, status="budget_exhausted", steps_used=run.steps)
    cert = Certificate(RamseyParams(run.p.r, run.p.s), run.best_valid, meta)
    report = verify_certificate(cert)
    if not report.valid:
        raise AssertionError("internal error: unverified certificate")
    prospect = run.prospect if run.prospect is not None and run.prospect.n > run.best_valid.n else None
    return RunResult(cert, score(run.best_valid, prospect, run.p), run.trace, run.events,
                     prospect=prospect, steps_used=run.steps)
