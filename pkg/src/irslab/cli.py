"""Command-line front door.

Subcommands evaluate envelope probabilities, run the verification suites,
sample random subgroups, sweep the parametrized family, and benchmark the
kernel backends.  Reports are deterministic JSON (config echoed, no
timestamps) so replays are byte-identical; timing goes to stderr.

Exit codes: 0 pass, 1 failed check, 2 parse error, 3 width not reached
(unless --allow-wide).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from irslab import __version__
from irslab._backend import BACKEND
from irslab.dyadic import Dyadic, parse_target_width, pow2
from irslab.measures import (
    INSTANCE_DESCRIPTION,
    CoinducedProduct,
    env_prob,
    family_measure,
    descriptor_to_json,
    parse_measure,
)
from irslab.sampler import (
    DEFAULT_TOLERANCE_EXP,
    chi_square_report,
    membership_matrix,
)
from irslab.verify import SUITES, DEFAULT_SEED
from irslab.words import Word
from irslab.ywords import rewrite_to_y

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_WIDTH = 3


class CliError(Exception):
    """Bad arguments or config; maps to exit code 2."""


def _base_report(command: str, config: dict) -> dict:
    return {
        "tool": "irslab",
        "version": __version__,
        "backend": BACKEND,
        "command": command,
        "instance": INSTANCE_DESCRIPTION,
        "config": config,
    }


def _emit(report: dict, out_path):
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_words(raw_words) -> list:
    if not raw_words:
        raise CliError("at least one --word is required")
    try:
        return [Word.parse(t) for t in raw_words]
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _load_config(path):
    if not path:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError("cannot read config %s: %s" % (path, exc)) from None
    if not isinstance(cfg, dict):
        raise CliError("config must be a JSON object")
    return cfg


def _merge_config(args: argparse.Namespace, config: dict, parser_defaults: dict):
    """Config supplies values for flags left at their parser defaults."""
    for key, value in config.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest):
            raise CliError("unknown config key %r" % (key,))
        if getattr(args, dest) == parser_defaults.get(dest):
            setattr(args, dest, value)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_eval(args) -> int:
    try:
        measure = parse_measure(args.measure)
        width = parse_target_width(args.width)
        words = _parse_words(args.word)
    except (ValueError, OSError) as exc:
        raise CliError(str(exc)) from None
    events = [tuple(words)] if args.joint else [(w,) for w in words]
    results = []
    not_reached = False
    for event in events:
        value = env_prob(measure, event, width, factor_cap=args.factor_cap)
        not_reached = not_reached or not value.width_reached
        entry = {"words": [str(w) for w in event], "value": value.to_json()}
        y_forms = []
        for w in event:
            if w.abelianization() == (0, 0):
                y_forms.append(str(rewrite_to_y(w)))
            else:
                y_forms.append(None)
        entry["y_forms"] = y_forms
        results.append(entry)
    report = _base_report(
        "eval",
        {
            "measure": descriptor_to_json(measure),
            "width": args.width,
            "joint": args.joint,
            "factor_cap": args.factor_cap,
            "words": args.word,
        },
    )
    report["results"] = results
    _emit(report, args.out)
    if not_reached and not args.allow_wide:
        return EXIT_WIDTH
    return EXIT_OK


def cmd_verify(args) -> int:
    suite = SUITES.get(args.suite)
    if suite is None:
        raise CliError("unknown suite %r (choose from %s)" % (args.suite, sorted(SUITES)))
    try:
        kwargs = _suite_kwargs(args)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    started = time.perf_counter()
    result = suite(**kwargs)
    elapsed = time.perf_counter() - started
    report = _base_report("verify", {"suite": args.suite, **{k: str(v) for k, v in kwargs.items()}})
    report["result"] = result
    _emit(report, args.out)
    sys.stderr.write("suite %s: %s in %.2fs\n" % (args.suite, "pass" if result["pass"] else "FAIL", elapsed))
    return EXIT_OK if result["pass"] else EXIT_FAIL


def _suite_kwargs(args) -> dict:
    kwargs = {}
    if args.suite == "faithful":
        kwargs["max_len"] = args.max_len if args.max_len is not None else 8
    elif args.suite == "invariance":
        kwargs["pairs"] = args.n if args.n is not None else 100
        kwargs["max_len"] = args.max_len if args.max_len is not None else 6
        kwargs["seed"] = args.seed if args.seed is not None else DEFAULT_SEED
        if args.width is not None:
            kwargs["width"] = parse_target_width(args.width)
    elif args.suite == "chain-limits":
        kwargs["n_max"] = args.n if args.n is not None else 10
    elif args.suite == "combination":
        kwargs["sample_size"] = args.n if args.n is not None else 200
        kwargs["seed"] = args.seed if args.seed is not None else DEFAULT_SEED
    elif args.suite == "mixing":
        kwargs["shift_exp"] = args.shift if args.shift is not None else 10
        if args.width is not None:
            kwargs["width"] = parse_target_width(args.width)
    elif args.suite == "closure":
        if args.width is not None:
            kwargs["width"] = parse_target_width(args.width)
    return kwargs


def cmd_sample(args) -> int:
    try:
        measure = parse_measure(args.measure)
        words = _parse_words(args.word)
    except (ValueError, OSError) as exc:
        raise CliError(str(exc)) from None
    if not isinstance(measure, CoinducedProduct):
        raise CliError("sampling requires a co-induced measure")
    n = args.n if args.n is not None else 10000
    base_seed = args.seed if args.seed is not None else DEFAULT_SEED
    tol = args.tolerance_exp if args.tolerance_exp is not None else DEFAULT_TOLERANCE_EXP
    seeds = [base_seed + j for j in range(n)]
    data = membership_matrix(seeds, words, measure, tol, target_width=pow2(24))
    empirical = [Fraction(cell["hits"], cell["n"]) for cell in data["summary"]]
    from irslab.dyadic import value_from_json

    exact = [value_from_json(cell["exact"]) for cell in data["summary"]]
    try:
        stats = chi_square_report(empirical, exact, n, labels=[str(w) for w in words])
    except ValueError as exc:
        raise CliError(str(exc)) from None
    report = _base_report(
        "sample",
        {
            "measure": descriptor_to_json(measure),
            "n": n,
            "seed": base_seed,
            "tolerance_exp": tol,
            "words": [str(w) for w in words],
        },
    )
    summary = []
    for cell, zcell in zip(data["summary"], stats["cells"]):
        merged = dict(cell)
        merged["z"] = zcell["z"]
        merged["pass"] = zcell["pass"]
        summary.append(merged)
    report["summary"] = summary
    report["z_tests"] = stats
    report["seeds"] = {"base": base_seed, "count": n, "rule": "base + index"}
    report["tolerance"] = {
        "exponent": tol,
        "per_query_total_variation_bound": "2^-%d" % tol,
    }
    _emit(report, args.out)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write("seed," + ",".join(str(w) for w in words) + "\n")
            for seed, row in zip(seeds, data["matrix"]):
                fh.write(str(seed) + "," + ",".join("1" if v else "0" for v in row) + "\n")
    return EXIT_OK if stats["pass"] else EXIT_FAIL


def cmd_family(args) -> int:
    try:
        width = parse_target_width(args.width)
        word = Word.parse(args.word[0]) if args.word else None
        a_values = [Dyadic.parse(t) for t in args.a]
    except (ValueError, IndexError) as exc:
        raise CliError(str(exc)) from None
    if word is None:
        raise CliError("--word is required")
    if not a_values:
        raise CliError("at least one --a is required")
    rows = []
    not_reached = False
    try:
        for a in a_values:
            value = env_prob(family_measure(a), (word,), width)
            not_reached = not_reached or not value.width_reached
            rows.append({"a": str(a), "value": value.to_json()})
    except ValueError as exc:
        raise CliError(str(exc)) from None
    strictly_increasing = True
    disjoint = True
    for prev, cur in zip(rows, rows[1:]):
        pv = prev["value"]
        cv = cur["value"]
        p_hi = Dyadic.parse(pv.get("exact", pv.get("hi")))
        c_lo = Dyadic.parse(cv.get("exact", cv.get("lo")))
        if not p_hi < c_lo:
            strictly_increasing = False
            disjoint = False
    report = _base_report(
        "family",
        {"a": args.a, "word": str(word), "width": args.width},
    )
    report["rows"] = rows
    report["strictly_increasing"] = strictly_increasing
    report["enclosures_pairwise_disjoint"] = disjoint
    _emit(report, args.out)
    if not_reached and not args.allow_wide:
        return EXIT_WIDTH
    return EXIT_OK


def cmd_bench(args) -> int:
    from irslab.bench import run_benchmarks

    report = run_benchmarks(quick=args.quick)
    _emit(report, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

_SUBPARSERS: dict = {}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irslab",
        description="Exact envelope probabilities, verification suites and "
        "samplers for co-induced invariant random subgroups of F2. "
        "Words are strings over a, b, A, B (A = a^-1); the empty string is "
        "the identity. Set IRSLAB_THREADS to cap worker threads and "
        "IRSLAB_BACKEND=pure|compiled to pin the kernel backend.",
    )
    parser.add_argument("--config", help="JSON config file; flags override its entries")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_eval = sub.add_parser("eval", help="evaluate envelope probabilities")
    p_eval.add_argument("--measure", default="mu_G", help="mu_F | mu_HF | mu_G | mu_aG:<a> | JSON | @file")
    p_eval.add_argument("--word", action="append", default=None, help="event word (repeatable)")
    p_eval.add_argument("--joint", action="store_true", help="treat all words as one joint event")
    p_eval.add_argument("--width", default="1e-6", help="target enclosure width")
    p_eval.add_argument("--factor-cap", type=int, default=10**6)
    p_eval.add_argument("--allow-wide", action="store_true", help="exit 0 even when width was not reached")
    p_eval.add_argument("--out", help="write the JSON report here instead of stdout")
    p_eval.set_defaults(func=cmd_eval)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("suite", choices=sorted(SUITES))
    p_verify.add_argument("--max-len", type=int, default=None)
    p_verify.add_argument("--n", type=int, default=None, help="pairs / powers / sample size")
    p_verify.add_argument("--shift", type=int, default=None, help="shift exponent for the mixing suite")
    p_verify.add_argument("--width", default=None)
    p_verify.add_argument("--seed", type=int, default=None)
    p_verify.add_argument("--out", help="write the JSON report here instead of stdout")
    p_verify.set_defaults(func=cmd_verify)

    p_sample = sub.add_parser("sample", help="sample subgroups and test frequencies")
    p_sample.add_argument("--measure", default="mu_G")
    p_sample.add_argument("--word", action="append", default=None)
    p_sample.add_argument("--n", type=int, default=None, help="number of seeds (default 10000)")
    p_sample.add_argument("--seed", type=int, default=None, help="base seed (default %d)" % DEFAULT_SEED)
    p_sample.add_argument("--tolerance-exp", type=int, default=None)
    p_sample.add_argument("--csv", help="also write the 0/1 membership matrix as CSV")
    p_sample.add_argument("--out", help="write the JSON report here instead of stdout")
    p_sample.set_defaults(func=cmd_sample)

    p_family = sub.add_parser("family", help="sweep the parametrized family")
    p_family.add_argument("--a", action="append", default=None, help="dyadic parameter (repeatable)")
    p_family.add_argument("--word", action="append", default=None)
    p_family.add_argument("--width", default="1e-6")
    p_family.add_argument("--allow-wide", action="store_true")
    p_family.add_argument("--out", help="write the JSON report here instead of stdout")
    p_family.set_defaults(func=cmd_family)

    p_bench = sub.add_parser("bench", help="benchmark pure vs compiled kernels")
    p_bench.add_argument("--quick", action="store_true")
    p_bench.add_argument("--out")
    p_bench.set_defaults(func=cmd_bench)

    _SUBPARSERS.update(
        {
            "eval": p_eval,
            "verify": p_verify,
            "sample": p_sample,
            "family": p_family,
            "bench": p_bench,
        }
    )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
        if config:
            defaults = {
                action.dest: action.default
                for action in _SUBPARSERS[args.cmd]._actions
            }
            _merge_config(args, config, defaults)
        return args.func(args)
    except CliError as exc:
        sys.stderr.write("error: %s\n" % (exc,))
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
