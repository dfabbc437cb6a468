"""Command-line front end: norms, experiments, verification suites, cotype."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .ascent import AscentConfig
from .core import Exponent
from .operators import MatrixOperator
from .summing import SummingParams, pi_estimate


def _parse_exponent(parser, text, name):
    try:
        return Exponent(text)
    except (ValueError, TypeError) as exc:
        parser.error(f"bad {name} exponent {text!r}: {exc}")


def _cmd_norm(parser, args) -> int:
    p = _parse_exponent(parser, args.p, "p")
    q = _parse_exponent(parser, args.q, "q")
    if q > p:
        parser.error(f"q must be <= p, got q={q}, p={p}")
    try:
        T = MatrixOperator.load(args.matrix)
    except (OSError, ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        print(f"error: cannot read matrix from {args.matrix}: {exc}", file=sys.stderr)
        return 1
    budget = AscentConfig(starts=args.starts, iters=args.iters, seed=args.seed,
                          threads=args.threads)
    est = pi_estimate(T, SummingParams(p, q, args.k), budget)
    doc = est.to_json()
    if not args.witness:
        doc.pop("witness", None)
    json.dump(doc, sys.stdout, indent=2)
    print()
    return 0


def _cmd_experiment(parser, args) -> int:
    from .experiments import ConfigError, ExperimentConfig, run_experiment

    try:
        cfg = ExperimentConfig.from_file(args.config)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: cannot read config {args.config}: {exc}", file=sys.stderr)
        return 1
    if args.seed is not None:
        cfg.seeds = [args.seed]
    if args.plot is not None:
        cfg.plot = args.plot
    if args.threads is not None:
        cfg.threads = args.threads
    try:
        path, records = run_experiment(cfg, out_path=args.out)
    except ConfigError as exc:
        print(f"error: invalid experiment config: {exc}", file=sys.stderr)
        return 1
    wall = sum(r.wall_time_s for r in records)
    print(f"wrote {len(records)} records to {path} (total compute {wall:.1f}s)")
    if cfg.plot:
        print(f"figure: {Path(path).with_suffix('.png')}")
    return 0


def _cmd_verify(parser, args) -> int:
    from .verify import SUITES, run_suite

    known = sorted(SUITES) + ["all"]
    if args.suite not in known:
        parser.error(f"unknown suite {args.suite!r}; choose from {', '.join(known)}")
    results = run_suite(args.suite, seed=args.seed, cases=args.cases)
    hard_fail = 0
    for res in results:
        print(f"{res.status:4s} {res.name}: {res.detail}")
        if res.hard and not res.passed:
            hard_fail += 1
    total_hard = sum(1 for r in results if r.hard)
    print(f"summary: {total_hard - hard_fail}/{total_hard} hard checks passed, "
          f"{sum(1 for r in results if not r.hard)} soft reports")
    return 1 if hard_fail else 0


def _cmd_cotype(parser, args) -> int:
    from .cotype import CotypeParams, EmbeddedNorm, cotype_estimate
    from .experiments import parse_space

    q = _parse_exponent(parser, args.q, "q")
    if q < 2:
        parser.error(f"cotype needs q >= 2, got {q}")
    if Path(args.space).exists():
        try:
            with open(args.space) as fh:
                doc = json.load(fh)
            E = EmbeddedNorm.from_json(doc) if "embed" in doc else EmbeddedNorm(
                MatrixOperator.from_json(doc))
        except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
            print(f"error: cannot read embedding from {args.space}: {exc}", file=sys.stderr)
            return 1
    else:
        try:
            _, E = parse_space(args.space, args.seed)
        except (ValueError, IndexError) as exc:
            print(f"error: bad space descriptor {args.space!r}: {exc}", file=sys.stderr)
            return 1
    prm = CotypeParams(q, args.k, args.kind, args.samples)
    budget = AscentConfig(starts=args.starts, iters=args.iters, seed=args.seed,
                          threads=args.threads)
    est = cotype_estimate(E, prm, budget)
    doc = est.to_json()
    if not args.witness:
        doc.pop("witness", None)
    doc["space_dim"] = E.dim
    json.dump(doc, sys.stdout, indent=2)
    print()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pqsumming",
        description="Few-vector (p,q)-summing norms, growth-rate experiments and "
                    "verification suites for finite-rank operators between lp spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    norm_p = sub.add_parser("norm", help="estimate pi_pq^k of a matrix operator")
    norm_p.add_argument("matrix", help="operator JSON file (rows, cols, exponents, entries)")
    norm_p.add_argument("--p", required=True, help="outer exponent, e.g. 2 or 4/3 or inf")
    norm_p.add_argument("--q", required=True, help="weak exponent, q <= p")
    norm_p.add_argument("--k", type=int, required=True, help="vector budget")
    norm_p.add_argument("--witness", action="store_true", help="include the witness family")
    norm_p.add_argument("--seed", type=int, default=0)
    norm_p.add_argument("--starts", type=int, default=16)
    norm_p.add_argument("--iters", type=int, default=500)
    norm_p.add_argument("--threads", type=int, default=1)

    exp_p = sub.add_parser("experiment", help="run a sweep from a JSON/TOML config")
    exp_p.add_argument("config", help="experiment config file (.json or .toml)")
    exp_p.add_argument("--out", default=None, help="override the output CSV path")
    exp_p.add_argument("--seed", type=int, default=None, help="replace the seed list")
    exp_p.add_argument("--threads", type=int, default=None)
    exp_p.add_argument("--plot", action=argparse.BooleanOptionalAction, default=None,
                       help="render figures next to the CSV")

    ver_p = sub.add_parser("verify", help="run a named invariant suite")
    ver_p.add_argument("suite", help="suite tag, or 'all'")
    ver_p.add_argument("--seed", type=int, default=0)
    ver_p.add_argument("--cases", type=int, default=None)

    cot_p = sub.add_parser("cotype", help="estimate a cotype-q constant")
    cot_p.add_argument("space", help="embedding JSON file or descriptor like l2:3, linf:2")
    cot_p.add_argument("--q", required=True)
    cot_p.add_argument("--k", type=int, required=True)
    cot_p.add_argument("--kind", choices=["rademacher", "gaussian"], default="rademacher")
    cot_p.add_argument("--samples", type=int, default=20000)
    cot_p.add_argument("--witness", action="store_true")
    cot_p.add_argument("--seed", type=int, default=0)
    cot_p.add_argument("--starts", type=int, default=16)
    cot_p.add_argument("--iters", type=int, default=500)
    cot_p.add_argument("--threads", type=int, default=1)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "norm": _cmd_norm,
        "experiment": _cmd_experiment,
        "verify": _cmd_verify,
        "cotype": _cmd_cotype,
    }
    return handlers[args.command](parser, args)


if __name__ == "__main__":
    raise SystemExit(main())
