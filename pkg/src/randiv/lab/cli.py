"""Command line entry point: walk, div, ht, verify, experiment, report."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from ..divergence import BUDGET_EXCEEDED, DEFAULT_BUDGET, DivergenceQuery, divergence, write_witness
from ..groups import GroupSpec, MalformedWordError, format_word, parse_word, spec_from_config
from ..projections import enumerate_HT
from ..stochastic import kernel_from_config, sample_path
from .config import ConfigError, ExperimentConfig
from .experiments import exit_status, resummarize, run_experiment
from .record import FORMATS, ReportError, load_run, report

EXIT_OK, EXIT_VIOLATION, EXIT_INCONCLUSIVE = 0, 2, 3

PRESETS = {
    "f2": lambda: GroupSpec.free(2),
    "f3": lambda: GroupSpec.free(3),
    "p4": GroupSpec.p4,
    "z2": GroupSpec.z2,
}


def _spec(args) -> GroupSpec:
    if getattr(args, "config", None):
        with open(args.config) as fh:
            doc = json.load(fh)
        return spec_from_config(doc)
    return PRESETS[args.group]()


def _formats(text: str) -> list:
    fmts = [f.strip() for f in text.split(",") if f.strip()]
    bad = [f for f in fmts if f not in FORMATS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown format(s): {', '.join(bad)}")
    return fmts


def cmd_walk(args) -> int:
    spec = _spec(args)
    kernel = kernel_from_config(json.loads(args.kernel), spec)
    start = parse_word(args.start, spec)
    traj = sample_path(kernel, start, args.n, args.seed, spec)
    for i, w in enumerate(traj.states):
        print(f"{i}\t{format_word(w, spec)}")
    return EXIT_OK


def cmd_div(args) -> int:
    spec = _spec(args)
    q = DivergenceQuery(parse_word(args.a, spec), parse_word(args.b, spec), parse_word(args.c, spec),
                        Fraction(args.delta), args.budget, method=args.method)
    res = divergence(q, spec)
    value = res.certified_value
    print(f"verdict={res.verdict} r={res.r} value={value} explored={res.explored} "
          f"certificate={res.certificate}")
    if args.witness and res.witness:
        with open(args.witness, "w") as fh:
            fh.write(write_witness(res.witness, spec))
    return EXIT_INCONCLUSIVE if res.verdict == BUDGET_EXCEEDED else EXIT_OK


def cmd_ht(args) -> int:
    spec = _spec(args)
    g0 = parse_word(args.g0, spec)
    mode = "tree" if spec.is_free and args.radius is None else "census"
    ht = enumerate_HT(parse_word(args.x, spec), parse_word(args.y, spec), args.T, g0, spec,
                      mode=mode, radius=args.radius)
    print(f"# |H_T| = {len(ht)} (T = {args.T}, mode = {ht.mode})")
    for c, d in zip(ht.cosets, ht.distances):
        print(f"{format_word(c.rep, spec)}\t{d}")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_all
    results = run_all(args.seed)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_VIOLATION


def _print_summary(run) -> None:
    per_n = run.summary.get("per_n", {})
    for n, entry in per_n.items():
        keys = ("median_certified_div_over_n", "inconclusive_fraction", "mean_over_n",
                "a_set_mean_over_n", "slope")
        bits = [f"{k}={entry[k]:.4g}" if isinstance(entry.get(k), float) else f"{k}={entry[k]}"
                for k in keys if k in entry]
        est = entry.get("estimate") or entry.get("estimate_ge_eps0_n")
        if est:
            bits.append(f"p_hat={est['p_hat']:.3f} [{est['wilson_low']:.3f}, {est['wilson_high']:.3f}]")
        print(f"n={n}: " + " ".join(bits))


def cmd_experiment(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    if args.seed is not None:
        cfg = cfg.replace(base_seed=args.seed)
    run = run_experiment(cfg, threads=args.threads)
    if args.out:
        for path in report(run, args.out, args.format):
            print(f"wrote {path}")
    else:
        sys.stdout.write(run.to_csv())
    _print_summary(run)
    return exit_status(run)


def cmd_report(args) -> int:
    run = load_run(args.run)
    run.summary = resummarize(run)
    for path in report(run, args.out, args.format):
        print(f"wrote {path}")
    return exit_status(run)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="randiv", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    def group_opts(p):
        p.add_argument("--group", choices=sorted(PRESETS), default="f2")
        p.add_argument("--config", help="JSON file with a 'group' entry (overrides --group)")

    p = sub.add_parser("walk", help="sample and print a trajectory")
    group_opts(p)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--kernel", default='{"type": "srw"}', help="kernel as JSON")
    p.add_argument("--start", default="1")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("div", help="one divergence query")
    group_opts(p)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--c", default="1")
    p.add_argument("--delta", default="1/2")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--method", choices=("astar", "bfs"), default="astar")
    p.add_argument("--witness", help="write the witness path here, one word per line")
    p.set_defaults(func=cmd_div)

    p = sub.add_parser("ht", help="enumerate H_T(x, y)")
    group_opts(p)
    p.add_argument("--x", default="1")
    p.add_argument("--y", required=True)
    p.add_argument("--T", type=int, default=4)
    p.add_argument("--g0", default="ab")
    p.add_argument("--radius", type=int, help="census radius (non-free groups)")
    p.set_defaults(func=cmd_ht)

    p = sub.add_parser("verify", help="run the deterministic lemma suites")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("experiment", help="run an experiment config")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, help="override base_seed")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", help="output directory (default: CSV to stdout)")
    p.add_argument("--format", type=_formats, default=["csv", "json"])
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("report", help="re-render a stored run")
    p.add_argument("--run", required=True, help="directory holding manifest.json and rows.csv")
    p.add_argument("--out", required=True)
    p.add_argument("--format", type=_formats, default=["csv", "json", "svg"])
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, MalformedWordError, ReportError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
