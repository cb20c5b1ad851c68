"""Command-line entry point: ``ramsey-lb {verify,search,construct,extend,score,presets}``.

Exit codes: 0 success/valid, 1 invalid witness or search failure,
2 usage or parse error, 3 budget exhausted without a valid witness.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor

from .circulant import DifferenceSet, realize
from .constructions import (
    BlockSpec,
    block_circulant,
    max_sum_free_set,
    paley_graph,
    power_residue_graph,
    random_graph,
)
from .extension import ghost_beam_extend, mini_sa_select, propose
from .graph import DomainError, RamseyParams
from .harness import (
    PRESETS,
    Certificate,
    CertificateError,
    RunResult,
    get_preset,
    read_certificate,
    run_preset,
    score,
    verify_certificate,
    write_certificate,
)

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def _int_set(text: str) -> frozenset[int]:
    text = text.strip()
    if not text:
        return frozenset()
    return frozenset(int(x) for x in text.split(","))


def _fail(msg: str, code: int = EXIT_USAGE) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


def _load(path: str) -> Certificate:
    try:
        return read_certificate(path)
    except OSError as exc:
        raise CertificateError(0, f"cannot read {path}: {exc.strerror}") from None


def cmd_verify(args) -> int:
    try:
        cert = _load(args.path)
    except CertificateError as exc:
        return _fail(f"{args.path}: {exc}")
    try:
        rep = verify_certificate(cert, args.r, args.s)
    except DomainError as exc:
        return _fail(str(exc))
    print("\n".join(rep.lines()))
    return EXIT_OK if rep.valid else EXIT_INVALID


def _run_one(args_tuple) -> RunResult:
    name, r, s, seed, steps, seconds = args_tuple
    return run_preset(get_preset(name, r=r, s=s, seed=seed, max_steps=steps, max_seconds=seconds))


def _pick(results: list[tuple[int, RunResult]]) -> tuple[int, RunResult]:
    """Largest certificate, then lowest energy, then lowest seed."""
    def key(item):
        seed, res = item
        if res.certificate is None:
            e = res.best_invalid_energy if res.best_invalid_energy is not None else float("inf")
            return (1, 0, e, seed)
        return (0, -res.certificate.graph.n, 0.0, seed)
    return min(results, key=key)


def cmd_search(args) -> int:
    if args.preset not in PRESETS:
        return _fail(f"unknown preset {args.preset!r}; known: {', '.join(sorted(PRESETS))}")
    if args.restarts < 1:
        return _fail("--restarts must be >= 1")
    jobs = [(args.preset, args.r, args.s, args.seed + i, args.budget_steps, args.budget_seconds)
            for i in range(args.restarts)]
    try:
        if len(jobs) == 1:
            results = [_run_one(jobs[0])]
        else:
            with ProcessPoolExecutor() as pool:
                results = list(pool.map(_run_one, jobs))
    except DomainError as exc:
        return _fail(str(exc))
    seed, res = _pick(list(zip([j[3] for j in jobs], results)))
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write("step temp energy best\n")
            fh.writelines(line + "\n" for line in res.trace)
    if res.certificate is None:
        print(f"no valid witness within budget (seed {seed}); best invalid energy {res.best_invalid_energy}")
        return EXIT_BUDGET
    write_certificate(res.certificate, args.out)
    rep = res.score_report
    print(f"preset={args.preset} seed={seed} n={res.certificate.graph.n}")
    print(f"v1={rep.v1} v2={rep.v2} base={rep.base_score:g} bonus={rep.bonus:.6f} "
          f"total={rep.total:.6f} valid={rep.valid}")
    return EXIT_OK


def _construct_graph(args):
    fam = args.family
    if fam == "paley":
        return paley_graph(_need(args.q, "--q")), {"q": args.q}
    if fam == "power-residue":
        g = power_residue_graph(_need(args.p, "--p"), _need(args.e, "--e"), args.symmetrize)
        return g, {"p": args.p, "e": args.e}
    if fam == "circulant":
        ds = DifferenceSet(_need(args.n, "--n"), _int_set(_need(args.S, "--S")))
        return realize(ds), {"n": ds.n, "S": ",".join(map(str, sorted(ds.s)))}
    if fam == "random":
        return random_graph(_need(args.n, "--n"), args.p_edge, args.seed), \
            {"n": args.n, "p_edge": args.p_edge, "seed": args.seed}
    if fam == "sum-free":
        sf = max_sum_free_set(_need(args.n, "--n"), args.seed)
        return sf.graph(), {"n": sf.n, "S": ",".join(map(str, sorted(sf.members))), "seed": args.seed}
    if fam == "block":
        spec = BlockSpec(_need(args.n_blocks, "--n-blocks"), _need(args.k, "--k"),
                         _int_set(args.s_intra or ""), _int_set(args.s_inter or ""))
        return block_circulant(spec), {"n_blocks": spec.n_blocks, "k": spec.k}
    raise DomainError(f"unknown family {fam!r}")


def _need(value, flag):
    if value is None:
        raise DomainError(f"{flag} is required for this family")
    return value


def cmd_construct(args) -> int:
    try:
        g, info = _construct_graph(args)
    except (DomainError, ValueError) as exc:
        return _fail(str(exc))
    meta = {"family": args.family, **{k: str(v) for k, v in info.items()}}
    write_certificate(Certificate(None, g, meta), args.out)
    return EXIT_OK


def cmd_extend(args) -> int:
    try:
        cert = _load(args.path)
        r = args.r if args.r is not None else (cert.params.r if cert.params else None)
        s = args.s if args.s is not None else (cert.params.s if cert.params else None)
        if r is None or s is None:
            return _fail("construction-only certificate: pass --r and --s")
        p = RamseyParams(r, s)
        if args.strategy == "ghost-beam":
            h = ghost_beam_extend(cert.graph, p, args.beam_width, args.budget, args.seed, max_new=args.max_new)
        else:
            cand = propose(cert.graph, p, args.strategy.replace("-", "_"), args.seed)
            h = mini_sa_select([cand], p, args.budget, args.seed).realize()
    except CertificateError as exc:
        return _fail(f"{args.path}: {exc}")
    except DomainError as exc:
        return _fail(str(exc))
    rep = verify_certificate(Certificate(p, h) if h is not None else cert, r, s)
    if h is None or not rep.valid:
        print(f"extension failed: {rep.summary() if h is not None else 'no valid extension found'}")
        return EXIT_INVALID
    meta = dict(cert.meta)
    meta.update({"extended_by": args.strategy, "seed": str(args.seed)})
    write_certificate(Certificate(p, h, meta), args.out)
    print(rep.summary())
    return EXIT_OK


def cmd_score(args) -> int:
    try:
        g1 = _load(args.primary)
        g2 = _load(args.prospect) if args.prospect else None
    except CertificateError as exc:
        return _fail(str(exc))
    r = args.r if args.r is not None else (g1.params.r if g1.params else None)
    s = args.s if args.s is not None else (g1.params.s if g1.params else None)
    if r is None or s is None:
        return _fail("pass --r and --s for construction-only certificates")
    rep = score(g1.graph, g2.graph if g2 else None, RamseyParams(r, s, args.n_sota))
    print(f"v1={rep.v1} v2={rep.v2} base={rep.base_score:g} bonus={rep.bonus:.6f} "
          f"total={rep.total:.6f} valid={rep.valid}")
    return EXIT_OK if rep.valid else EXIT_INVALID


def cmd_presets(args) -> int:
    for name, pr in sorted(PRESETS.items()):
        stages = " -> ".join(f"{st.kind}:{st.method}" for st in pr.stages)
        print(f"{name:24s} R{pr.cell}  {stages}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ramsey-lb", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="check a certificate file")
    v.add_argument("path")
    v.add_argument("--r", type=int)
    v.add_argument("--s", type=int)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="run a preset pipeline")
    s.add_argument("--preset", required=True)
    s.add_argument("--r", type=int)
    s.add_argument("--s", type=int)
    s.add_argument("--budget-steps", type=int)
    s.add_argument("--budget-seconds", type=float)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.add_argument("--trace")
    s.add_argument("--restarts", type=int, default=1)
    s.set_defaults(func=cmd_search)

    c = sub.add_parser("construct", help="write a construction-only certificate (r=s=0)")
    c.add_argument("family", choices=["paley", "power-residue", "circulant", "random", "sum-free", "block"])
    c.add_argument("--q", type=int)
    c.add_argument("--p", type=int)
    c.add_argument("--e", type=int)
    c.add_argument("--symmetrize", action="store_true")
    c.add_argument("--n", type=int)
    c.add_argument("--S")
    c.add_argument("--p-edge", type=float, default=0.5)
    c.add_argument("--n-blocks", type=int)
    c.add_argument("--k", type=int)
    c.add_argument("--s-intra")
    c.add_argument("--s-inter")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_construct)

    e = sub.add_parser("extend", help="grow a witness by one or more vertices")
    e.add_argument("path")
    e.add_argument("--r", type=int)
    e.add_argument("--s", type=int)
    e.add_argument("--strategy", default="ghost-beam",
                   choices=["ghost-beam", "hitting-set", "mis-connect", "clone-perturb", "greedy-growth", "random"])
    e.add_argument("--beam-width", type=int, default=4)
    e.add_argument("--budget", type=int, default=500)
    e.add_argument("--max-new", type=int)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_extend)

    sc = sub.add_parser("score", help="score a primary graph and optional prospect graph")
    sc.add_argument("primary")
    sc.add_argument("prospect", nargs="?")
    sc.add_argument("--r", type=int)
    sc.add_argument("--s", type=int)
    sc.add_argument("--n-sota", type=int, default=0)
    sc.set_defaults(func=cmd_score)

    pl = sub.add_parser("presets", help="list shipped presets")
    pl.set_defaults(func=cmd_presets)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
