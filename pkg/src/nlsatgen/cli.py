"""Command-line interface.

Exit codes: 0 on success; 1 when verification or parsing finds
mismatches; 2 for unusable invocations (bad arguments, missing
calibration, empty or malformed datasets); 3 when generation gives up
(solver budget exhausted or candidate acceptance stalled).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .cnf import to_dimacs
from .fragments import FRAGMENTS, GRL, RCL, RULETAKER, FragmentError, ParseError, parse_theory
from .pipeline import (
    DatasetConfig,
    DatasetError,
    GenerationStallError,
    export_dimacs_files,
    generate_records,
    read_dataset,
    stats_report,
    verify_dataset,
    write_dataset,
)
from .rng import derive_rng
from .ruletaker import (
    LABEL_FALSE,
    LABEL_TRUE,
    RetrofitVocab,
    conjecture_pools,
    make_instance,
    reindex_theory,
    render_ruletaker,
    bind_attributes,
    sample_retrofit_theory,
)
from .sampler import (
    CalibrationError,
    CalibrationTable,
    SampleSpec,
    STRATEGIES,
    calibrate_critical,
    calibration_cache_path,
)
from .solver import BudgetExhaustedError
from . import lexicon as lexicon_mod
from . import rcl as rcl_mod


def _parse_sizes(text) -> tuple:
    """Accept "5-12", "5..12", "5,7,9", "6", or mixes like "5-8,10"."""
    if isinstance(text, (list, tuple)):
        return tuple(int(s) for s in text)
    sizes = []
    for part in str(text).split(","):
        part = part.strip().replace("..", "-")
        if "-" in part.lstrip("-"):
            lo, _, hi = part.partition("-")
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError(f"size range {part!r} is backwards")
            sizes.extend(range(lo, hi + 1))
        elif part:
            sizes.append(int(part))
    if not sizes:
        raise ValueError(f"no sizes in {text!r}")
    return tuple(sizes)


def _parse_splits(text) -> tuple:
    if isinstance(text, (list, tuple)):
        return tuple(Fraction(str(s)) for s in text)
    return tuple(Fraction(part.strip()) if "/" in part else Fraction(str(float(part)))
                 for part in str(text).split(","))


def _load_table(path_arg):
    path = Path(path_arg) if path_arg else calibration_cache_path()
    if path.exists():
        return CalibrationTable.load(path), path
    return CalibrationTable(), path


def cmd_calibrate(args) -> int:
    table, path = _load_table(args.cache)
    for n in _parse_sizes(args.n):
        result = calibrate_critical(
            n,
            args.p_int,
            args.p_neg,
            tolerance=args.tolerance,
            trials_per_point=args.trials,
            seed=args.seed,
        )
        for a, p_hat, trials in result.points:
            table.add_point(n, args.p_int, args.p_neg, a, p_hat, trials)
        table.set_band(n, args.p_int, args.p_neg, *result.band)
        lo, hi = result.band
        print(
            f"n={n} p_int={args.p_int} p_neg={args.p_neg}: "
            f"alpha_c={result.alpha_c} ({float(result.alpha_c):.3f}), "
            f"band=[{lo} ({float(lo):.3f}), {hi} ({float(hi):.3f})]"
        )
    table.save(path)
    print(f"calibration saved to {path}")
    return 0


def cmd_generate(args) -> int:
    settings = {}
    if args.config:
        try:
            settings = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except OSError as exc:
            raise DatasetError(f"cannot read config: {exc}") from None
        except json.JSONDecodeError as exc:
            raise DatasetError(f"config is not JSON: {exc}") from None
        if not isinstance(settings, dict):
            raise DatasetError("config must be a JSON object")
    overrides = {
        "fragment": args.fragment,
        "sizes": args.sizes,
        "count_per_size": args.count_per_size,
        "seed": args.seed,
        "strategy": args.strategy,
        "p_int": args.p_int,
        "p_neg": args.p_neg,
        "splits": args.splits,
        "diversity_fraction": args.diversity_fraction,
        "balance_labels": args.balance_labels,
        "token_budget": args.token_budget,
        "max_decisions": args.max_decisions,
        "no_rewrite_prob": args.no_rewrite_prob,
        "nouns_path": args.nouns,
        "names_path": args.names,
        "attributes_path": args.attributes,
        "entities_path": args.entities,
    }
    settings.update({k: v for k, v in overrides.items() if v is not None})
    missing = [k for k in ("fragment", "sizes", "count_per_size", "seed") if k not in settings]
    if missing:
        raise DatasetError(f"missing required settings: {', '.join(missing)}")
    settings["sizes"] = _parse_sizes(settings["sizes"])
    if "splits" in settings:
        settings["splits"] = _parse_splits(settings["splits"])
    config = DatasetConfig(**settings)
    table, _ = _load_table(args.cache)
    jobs = args.jobs if args.jobs else (os.cpu_count() or 1)
    records = generate_records(config, table, jobs=jobs)
    write_dataset(args.out, config, records)
    stats_path = Path(args.out).with_suffix(".stats.txt")
    stats_path.write_text(stats_report(args.out), encoding="utf-8")
    print(f"wrote {len(records)} records to {args.out}")
    print(f"wrote stats report to {stats_path}")
    return 0


def cmd_stats(args) -> int:
    report = stats_report(args.dataset)
    sys.stdout.write(report)
    if args.out:
        Path(args.out).write_text(report, encoding="utf-8")
    return 0


def cmd_verify(args) -> int:
    issues = verify_dataset(args.dataset, max_decisions=args.max_decisions)
    if issues:
        for issue in issues:
            print(issue, file=sys.stderr)
        print(f"verification failed: {len(issues)} issue(s)", file=sys.stderr)
        return 1
    _, records = read_dataset(args.dataset)
    print(f"ok: {len(records)} records verified")
    return 0


def cmd_parse(args) -> int:
    if args.file:
        text = Path(args.file).read_text(encoding="utf-8").strip()
    else:
        text = args.text
    if not text:
        raise DatasetError("nothing to parse")
    try:
        parsed = parse_theory(text, args.fragment, strict=not args.lenient)
    except (ParseError, FragmentError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    if args.fragment == GRL:
        formula, _ = parsed
    elif args.fragment == RCL:
        problem, _ = parsed
        formula = rcl_mod.ground_rcl(problem)
    else:
        theory, _, _ = parsed
        formula = theory.formula()
    sys.stdout.write(to_dimacs(formula))
    return 0


def cmd_export_dimacs(args) -> int:
    count = export_dimacs_files(args.dataset, args.out_dir)
    print(f"wrote {count} DIMACS files to {args.out_dir}")
    return 0


def cmd_retrofit(args) -> int:
    vocab = RetrofitVocab(
        lexicon_mod.load_wordlist(args.attributes) if args.attributes
        else lexicon_mod.default_attributes(),
        lexicon_mod.load_wordlist(args.entities) if args.entities
        else lexicon_mod.default_entities(),
    )
    spec = SampleSpec(
        n=args.n,
        p_int=args.p_int,
        p_neg=args.p_neg,
        alpha_min=Fraction(str(args.alpha_min)),
        alpha_max=Fraction(str(args.alpha_max)),
        with_replacement=True,
    )
    printed = 0
    attempts = 0
    index = 0
    while printed < args.count:
        if attempts >= 200 * args.count:
            raise GenerationStallError(
                f"only {printed}/{args.count} theories in {attempts} attempts"
            )
        rng = derive_rng(args.seed, "retrofit-cli", args.n, index)
        index += 1
        attempts += 1
        theory = sample_retrofit_theory(spec, rng)
        if theory is None:
            continue
        theory, _ = reindex_theory(theory)
        pools = conjecture_pools(theory)
        label = LABEL_TRUE if printed % 2 == 0 else LABEL_FALSE
        if not pools[label]:
            label = LABEL_FALSE if label == LABEL_TRUE else LABEL_TRUE
        instance = make_instance(theory, label, rng, pools)
        if instance is None:
            continue
        binding = bind_attributes(theory, vocab, rng)
        rendered, conjecture_text = render_ruletaker(theory, binding, instance.conjecture)
        print(rendered.text)
        print(f"conjecture: {conjecture_text}")
        print(f"label: {instance.label}")
        print()
        printed += 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nlsatgen",
        description="Generate, inspect, and verify natural-language satisfiability datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("calibrate", help="locate the sat/unsat crossover for given sizes")
    p.add_argument("--n", required=True, help="sizes, e.g. 12 or 5-12 or 5,7,9")
    p.add_argument("--p-int", type=float, default=1.0, dest="p_int")
    p.add_argument("--p-neg", type=float, default=0.5, dest="p_neg")
    p.add_argument("--tolerance", type=float, default=0.02)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cache", help="calibration file (default: cache directory)")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("generate", help="generate a balanced dataset as JSON Lines")
    p.add_argument("--fragment", choices=sorted(FRAGMENTS))
    p.add_argument("--sizes", help="e.g. 5-12, 5..12, or 6,8,10")
    p.add_argument(
        "--per-size", "--count-per-size", type=int, dest="count_per_size",
        help="instances per size (balanced, so must be even)",
    )
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--strategy", choices=sorted(STRATEGIES))
    p.add_argument("--p-int", type=float, dest="p_int")
    p.add_argument("--p-neg", type=float, dest="p_neg")
    p.add_argument("--splits", help="train,dev,test fractions, e.g. 0.8,0.1,0.1")
    p.add_argument(
        "--diversity-fraction", type=float, dest="diversity_fraction",
        help="share of hard-strategy draws taken from the widened band",
    )
    p.add_argument(
        "--no-balance", action="store_const", const=False, dest="balance_labels",
        help="accept every viable draw instead of balancing labels",
    )
    p.add_argument("--token-budget", type=int, dest="token_budget")
    p.add_argument("--max-decisions", type=int, dest="max_decisions")
    p.add_argument("--no-rewrite-prob", type=float, dest="no_rewrite_prob")
    p.add_argument("--nouns", help="count-noun lexicon file")
    p.add_argument("--names", help="proper-noun lexicon file")
    p.add_argument("--attributes", help="attribute word list")
    p.add_argument("--entities", help="entity word list")
    p.add_argument("--jobs", type=int, help="worker processes (default: all cores)")
    p.add_argument("--config", help="JSON file with generation settings")
    p.add_argument("--cache", help="calibration file (default: cache directory)")
    p.add_argument("--out", required=True, help="output JSONL path")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("stats", help="summarize a dataset")
    p.add_argument("dataset")
    p.add_argument("--out", help="also write the report to this file")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("verify", help="re-derive every record from its text")
    p.add_argument("dataset")
    p.add_argument("--max-decisions", type=int, default=10_000_000, dest="max_decisions")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("parse", help="parse fragment text and print its DIMACS form")
    p.add_argument("--fragment", required=True, choices=sorted(FRAGMENTS))
    p.add_argument("--lenient", action="store_true")
    p.add_argument("--file", help="read the text from a file")
    p.add_argument("text", nargs="?", help="the sentences to parse")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("export-dimacs", help="write each record as a .cnf file")
    p.add_argument("dataset")
    p.add_argument("out_dir")
    p.set_defaults(func=cmd_export_dimacs)

    p = sub.add_parser("retrofit", help="print sample single-entity theories")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--p-int", type=float, default=1.0, dest="p_int")
    p.add_argument("--p-neg", type=float, default=0.5, dest="p_neg")
    p.add_argument("--alpha-min", type=float, default=1.0, dest="alpha_min")
    p.add_argument("--alpha-max", type=float, default=6.0, dest="alpha_max")
    p.add_argument("--attributes", help="attribute word list")
    p.add_argument("--entities", help="entity word list")
    p.set_defaults(func=cmd_retrofit)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (BudgetExhaustedError, GenerationStallError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (DatasetError, CalibrationError, FragmentError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
