"""Command line interface.

Subcommands: ``mine`` (pattern mining), ``gen`` (synthetic data),
``bench`` (grid sweeps).  A hidden ``oracle`` subcommand runs the
brute-force reference miner on small inputs.

Exit codes: 0 success, 1 usage error (bad flags or parameter values,
including constraint parameters that do not fit the dataset's alphabet),
2 timeout, 3 data error (unreadable or malformed input files, or a
database/mode mismatch).
"""

from __future__ import annotations

import argparse
import io
import os
import sys

from .seqdb import (
    FormatError,
    Pattern,
    SequenceDatabase,
    load_database,
    write_asp_facts,
    write_results,
    write_spmf,
)
from .miner import (
    MODES,
    DataError,
    MiningParams,
    MiningTimeout,
    MineStats,
    mine,
)
from .relations import STRATEGIES
from .constraints import (
    AggregateSpec,
    ConstraintError,
    ConstraintSet,
    load_cost_text,
    regex_compile,
    resolve_costs,
)
from .oracle import GuardError, oracle_frequent
from . import bench as bench_mod
from . import datagen

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_TIMEOUT = 2
EXIT_DATA = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _parse_support(text: str) -> int | float:
    t = text.strip()
    if t.endswith("%"):
        try:
            pct = float(t[:-1])
        except ValueError:
            raise _UsageError(f"bad --min-support value: {text!r}") from None
        if not 0.0 < pct <= 100.0:
            raise _UsageError(f"--min-support percentage out of range: {text!r}")
        return pct / 100.0
    try:
        value = int(t)
    except ValueError:
        raise _UsageError(f"bad --min-support value: {text!r} (use an integer or 'N%')") from None
    if value < 1:
        raise _UsageError("--min-support must be >= 1")
    return value


def _parse_labels(text: str) -> list[str]:
    return [tok for tok in (t.strip() for t in text.split(",")) if tok]


def _parse_pattern_expr(text: str, db: SequenceDatabase) -> Pattern:
    """Pattern syntax: elements separated by spaces, items inside an
    element joined by '+': "a c" is a two-element pattern, "a+b c" starts
    with the itemset {a,b}."""
    elements = []
    for chunk in text.split():
        labels = chunk.split("+")
        try:
            ids = tuple(sorted(db.alphabet.id_of(lab) for lab in labels))
        except KeyError as exc:
            raise _UsageError(f"--super-pattern: {exc.args[0]}") from None
        elements.append(ids)
    if not elements:
        raise _UsageError("--super-pattern is empty")
    return Pattern(tuple(elements))


def _resolve_items(labels: list[str], db: SequenceDatabase, flag: str) -> frozenset[int]:
    ids = set()
    for lab in labels:
        try:
            ids.add(db.alphabet.id_of(lab))
        except KeyError:
            raise _UsageError(f"{flag}: label {lab!r} not in the dataset alphabet") from None
    return frozenset(ids)


def build_parser() -> _Parser:
    parser = _Parser(prog="seqmine", description="Sequential pattern mining toolkit")
    sub = parser.add_subparsers(dest="command", metavar="{mine,gen,bench}")

    p_mine = sub.add_parser("mine", help="mine patterns from a sequence database")
    p_mine.add_argument("--input", required=True, help="database file")
    p_mine.add_argument("--format", choices=("spmf", "aspfacts"), default="spmf")
    p_mine.add_argument("--min-support", required=True, metavar="N|N%",
                        help="absolute count or percentage of sequences")
    p_mine.add_argument("--maxlen", required=True, type=int)
    p_mine.add_argument("--minlen", type=int, default=1)
    p_mine.add_argument("--strategy", choices=STRATEGIES, default="fill")
    p_mine.add_argument("--mode", choices=MODES, default="frequent")
    p_mine.add_argument("--max-gap", type=int, default=None)
    p_mine.add_argument("--min-gap", type=int, default=None)
    p_mine.add_argument("--max-span", type=int, default=None)
    p_mine.add_argument("--min-span", type=int, default=None)
    p_mine.add_argument("--must-have", default="", metavar="LABELS",
                        help="comma separated labels that must all appear")
    p_mine.add_argument("--cannot-have", default="", metavar="LABELS")
    p_mine.add_argument("--super-pattern", action="append", default=[], metavar="PATTERN",
                        help="pattern expression; repeatable ('a c', 'a+b c')")
    p_mine.add_argument("--super-pattern-all", action="store_true",
                        help="require all --super-pattern values, not just one")
    p_mine.add_argument("--regex", default=None,
                        help="label regex with | * + ? ( ) and implicit concatenation")
    p_mine.add_argument("--cost-file", default=None, help="label<TAB>integer lines")
    p_mine.add_argument("--agg", choices=("sum", "min", "max", "avg"), default=None)
    p_mine.add_argument("--agg-cmp", choices=("le", "ge", "lt", "gt", "eq"), default="le")
    p_mine.add_argument("--agg-threshold", type=float, default=None)
    p_mine.add_argument("--itemset-mode", action="store_true")
    p_mine.add_argument("--condensed-within-constraints", action="store_true",
                        help="judge condensed modes pairwise inside the constrained output")
    p_mine.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: SEQMINE_THREADS or 1)")
    p_mine.add_argument("--timeout", type=float, default=None, metavar="SECONDS")
    p_mine.add_argument("--output", default=None, help="result records file (default stdout)")
    p_mine.add_argument("--emit-asp-facts", default=None, metavar="PATH",
                        help="also write the loaded database as ASP facts")

    p_gen = sub.add_parser("gen", help="generate a synthetic database")
    p_gen.add_argument("--num-sequences", type=int, default=500)
    p_gen.add_argument("--mean-seq-length", type=int, default=20)
    p_gen.add_argument("--num-patterns", type=int, default=20)
    p_gen.add_argument("--mean-pattern-length", type=int, default=5)
    p_gen.add_argument("--min-coverage", default="10%",
                       help="fraction of sequences hosting each pattern (e.g. 0.1 or 10%%)")
    p_gen.add_argument("--alphabet-size", type=int, default=50)
    p_gen.add_argument("--item-mu", type=float, default=0.5)
    p_gen.add_argument("--item-sigma", type=float, default=0.05)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--output", default=None, help="SPMF output file (default stdout)")
    p_gen.add_argument("--manifest", default=None,
                       help="planted-pattern manifest path (default: OUTPUT.manifest.json)")

    p_bench = sub.add_parser("bench", help="sweep a grid of mining runs")
    p_bench.add_argument("--input", action="append", required=True, help="repeatable")
    p_bench.add_argument("--format", choices=("spmf", "aspfacts"), default="spmf")
    p_bench.add_argument("--min-support", required=True,
                         help="comma separated list of N or N%% values")
    p_bench.add_argument("--strategy", default="both",
                         help="comma separated subset of skip,fill, or 'both'")
    p_bench.add_argument("--mode", default="frequent", help="comma separated modes")
    p_bench.add_argument("--maxlen", required=True, type=int)
    p_bench.add_argument("--minlen", type=int, default=1)
    p_bench.add_argument("--itemset-mode", action="store_true")
    p_bench.add_argument("--timeout", type=float, default=None,
                         help="per-cell timeout in seconds")
    p_bench.add_argument("--threads", type=int, default=None)
    p_bench.add_argument("--output", default=None, help="write JSONL records here")

    p_oracle = sub.add_parser("oracle")
    p_oracle.add_argument("--input", required=True)
    p_oracle.add_argument("--format", choices=("spmf", "aspfacts"), default="spmf")
    p_oracle.add_argument("--min-support", required=True)
    p_oracle.add_argument("--maxlen", required=True, type=int)
    p_oracle.add_argument("--itemset-mode", action="store_true")
    p_oracle.add_argument("--output", default=None)

    return parser


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with io.open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _build_constraints(args, db: SequenceDatabase) -> ConstraintSet | None:
    agg_flags = (args.agg, args.agg_threshold, args.cost_file)
    if any(f is not None for f in agg_flags) and None in agg_flags:
        raise _UsageError("--agg, --agg-threshold and --cost-file must be given together")
    aggregate = None
    if args.agg is not None:
        with io.open(args.cost_file, "r", encoding="utf-8") as fh:
            table = load_cost_text(fh.read())
        aggregate = AggregateSpec(
            resolve_costs(table, db.alphabet), args.agg, args.agg_cmp, args.agg_threshold
        )
    regex = None
    if args.regex is not None:
        regex = regex_compile(args.regex, db.alphabet)
    cs = ConstraintSet(
        must_have=_resolve_items(_parse_labels(args.must_have), db, "--must-have"),
        cannot_have=_resolve_items(_parse_labels(args.cannot_have), db, "--cannot-have"),
        super_patterns=tuple(_parse_pattern_expr(expr, db) for expr in args.super_pattern),
        super_pattern_all=args.super_pattern_all,
        aggregate=aggregate,
        regex=regex,
        mingap=args.min_gap,
        maxgap=args.max_gap,
        minspan=args.min_span,
        maxspan=args.max_span,
    )
    return None if cs.is_neutral() else cs


def _cmd_mine(args) -> int:
    fmin = _parse_support(args.min_support)
    try:
        params = MiningParams(
            fmin=fmin, maxlen=args.maxlen, minlen=args.minlen,
            strategy=args.strategy, mode=args.mode, itemset_mode=args.itemset_mode,
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from None

    try:
        db = load_database(args.input, args.format)
    except (FormatError, OSError) as exc:
        print(f"seqmine: data error: {exc}", file=sys.stderr)
        return EXIT_DATA

    try:
        constraints = _build_constraints(args, db)
    except ConstraintError as exc:
        raise _UsageError(str(exc)) from None
    except FormatError as exc:
        print(f"seqmine: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"seqmine: data error: {exc}", file=sys.stderr)
        return EXIT_DATA

    if args.emit_asp_facts is not None:
        _write_text(args.emit_asp_facts, write_asp_facts(db))

    stats = MineStats()
    try:
        result = mine(
            db, params, constraints,
            threads=args.threads, timeout=args.timeout, stats=stats,
            condensed_within_constraints=args.condensed_within_constraints,
        )
    except MiningTimeout:
        print("seqmine: timed out", file=sys.stderr)
        return EXIT_TIMEOUT
    except (DataError, ConstraintError) as exc:
        print(f"seqmine: data error: {exc}", file=sys.stderr)
        return EXIT_DATA

    _write_text(args.output, write_results(result, db))
    print(
        f"seqmine: {len(result)} patterns, {stats.nodes_expanded} nodes expanded",
        file=sys.stderr,
    )
    return EXIT_OK


def _parse_coverage(text: str) -> float:
    t = text.strip()
    try:
        if t.endswith("%"):
            return float(t[:-1]) / 100.0
        return float(t)
    except ValueError:
        raise _UsageError(f"bad --min-coverage value: {text!r}") from None


def _cmd_gen(args) -> int:
    try:
        gp = datagen.GenParams(
            num_sequences=args.num_sequences,
            mean_seq_len=args.mean_seq_length,
            num_patterns=args.num_patterns,
            mean_pattern_len=args.mean_pattern_length,
            min_coverage=_parse_coverage(args.min_coverage),
            alphabet_size=args.alphabet_size,
            item_mu=args.item_mu,
            item_sigma=args.item_sigma,
            seed=args.seed,
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    db, manifest = datagen.generate(gp)
    _write_text(args.output, write_spmf(db))
    manifest_path = args.manifest
    if manifest_path is None and args.output is not None:
        manifest_path = args.output + ".manifest.json"
    if manifest_path is not None:
        _write_text(manifest_path, manifest.to_json())
    return EXIT_OK


def _cmd_bench(args) -> int:
    thresholds = [_parse_support(tok) for tok in _parse_labels(args.min_support)]
    if not thresholds:
        raise _UsageError("--min-support list is empty")
    strategies = list(STRATEGIES) if args.strategy == "both" else _parse_labels(args.strategy)
    for s in strategies:
        if s not in STRATEGIES:
            raise _UsageError(f"unknown strategy: {s!r}")
    modes = _parse_labels(args.mode)
    for m in modes:
        if m not in MODES:
            raise _UsageError(f"unknown mode: {m!r}")
    datasets = []
    for path in args.input:
        try:
            datasets.append((os.path.basename(path), load_database(path, args.format)))
        except (FormatError, OSError) as exc:
            print(f"seqmine: data error: {exc}", file=sys.stderr)
            return EXIT_DATA
    records = []
    sink = None
    try:
        if args.output is not None:
            sink = io.open(args.output, "w", encoding="utf-8")
        for record in bench_mod.run_suite(
            datasets, thresholds, strategies, modes,
            maxlen=args.maxlen, minlen=args.minlen, itemset_mode=args.itemset_mode,
            timeout=args.timeout, threads=args.threads,
        ):
            records.append(record)
            if sink is not None:
                sink.write(record.to_json() + "\n")
                sink.flush()
    finally:
        if sink is not None:
            sink.close()
    print(bench_mod.summarize(records))
    return EXIT_OK


def _cmd_oracle(args) -> int:
    fmin = _parse_support(args.min_support)
    try:
        db = load_database(args.input, args.format)
    except (FormatError, OSError) as exc:
        print(f"seqmine: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    resolved = MiningParams(fmin=fmin, maxlen=args.maxlen).resolved_fmin(len(db))
    try:
        result = oracle_frequent(db, resolved, args.maxlen, itemset_mode=args.itemset_mode)
    except GuardError as exc:
        print(f"seqmine: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    _write_text(args.output, write_results(result, db))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_usage(sys.stderr)
            return EXIT_USAGE
        if args.command == "mine":
            return _cmd_mine(args)
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "bench":
            return _cmd_bench(args)
        return _cmd_oracle(args)
    except _UsageError as exc:
        print(str(exc) if str(exc) else "seqmine: usage error", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    raise SystemExit(main())
