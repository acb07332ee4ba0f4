"""Command-line entry point.

Subcommands wire the library end to end: `synth` fabricates score
tables, `mine` runs the full split/fit/filter/rank loop over a batch
of tables and renders reports, `eval` scores a single table, `tree`
re-renders serialized trees, and `prep` exposes the image utilities.

Conventions: stdout carries machine-readable results only, all
diagnostics go to stderr, and exit codes are 0 (success), 1 (usage),
2 (data/validation), 3 (I/O). The seed may come from --seed or the
MINER_SEED environment variable. Identical invocations over identical
inputs produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional

from .datamodel import DatasetTag
from .errors import CxrMineError, IoError
from .ingest import (
    parse_score_table,
    parse_scores_filename,
    scores_filename,
    write_score_table,
)
from .mining import MiningConfig, evaluate_candidate, mine, render_report
from .metrics import format_ratio
from .preprocess import equalize, hflip, load_png, resize, rotate, save_png
from .report import format_pass_rate
from .synth import SynthConfig, epoch_series
from .tree import TreeConfig, TreeFormat, export_tree, parse_tree

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3

_DATASET_CHOICES = [tag.value for tag in DatasetTag]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; 2 is reserved for data
    # errors here, so usage problems are converted to exceptions instead
    def error(self, message):
        raise _UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("MINER_SEED")
    if env is not None:
        try:
            return int(env, 0)
        except ValueError:
            raise _UsageError(f"MINER_SEED must be an integer, got {env!r}") from None
    raise _UsageError("a seed is required: pass --seed or set MINER_SEED")


def _collect_score_files(paths: list[str], dataset: DatasetTag) -> list[Path]:
    """Expand --scores arguments into conforming files of the dataset.

    Directories are scanned for scores_*.csv names matching the
    requested dataset; explicitly named files must conform.
    """
    files: list[Path] = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            for child in sorted(path.iterdir()):
                parsed = parse_scores_filename(child.name)
                if parsed is not None and parsed[2] is dataset:
                    files.append(child)
        else:
            parsed = parse_scores_filename(path.name)
            if parsed is None:
                raise CxrMineError(
                    f"{path}: file name does not match scores_<experiment>_<epoch>_<dataset>.csv"
                )
            if parsed[2] is not dataset:
                raise CxrMineError(
                    f"{path}: dataset {parsed[2].value!r} does not match --dataset {dataset.value!r}"
                )
            files.append(path)
    return files


def _load_tables(files: list[Path], strict: bool):
    tables = []
    for path in files:
        experiment_id, epoch, tag = parse_scores_filename(path.name)
        table, issues = parse_score_table(
            path.read_text(encoding="utf-8"), tag, experiment_id, epoch, strict=strict
        )
        for issue in issues:
            print(
                f"{path.name} row {issue.row_number}: {issue.kind.value}: {issue.detail}",
                file=sys.stderr,
            )
        tables.append(table)
    tables.sort(key=lambda t: (t.experiment_id, t.epoch, t.dataset_tag.value))
    return tables


def _cmd_mine(args) -> int:
    dataset = DatasetTag(args.dataset)
    files = _collect_score_files(args.scores, dataset)
    if not files:
        raise CxrMineError(f"no {dataset.value} score tables found under {args.scores}")
    tables = _load_tables(files, strict=args.strict)
    config = MiningConfig(
        seed=_resolve_seed(args),
        test_fraction=args.test_fraction,
        accuracy_threshold=args.threshold,
        tree_config=TreeConfig(max_depth=args.max_depth),
        stratified=args.stratified,
    )

    def progress(done: int, total: int):
        print(f"evaluated {done}/{total}", file=sys.stderr)

    report = mine(
        tables, config, strict=args.strict, jobs=args.jobs, progress=progress
    )
    for (experiment_id, epoch, tag), message in report.failures:
        print(f"failed: {experiment_id} epoch {epoch} {tag.value}: {message}", file=sys.stderr)
    render_report(report, args.out)
    passed, total = report.summary
    print(f"{passed}/{total} ({format_pass_rate(passed, total)})")
    return EXIT_OK


def _cmd_eval(args) -> int:
    path = Path(args.scores)
    parsed = parse_scores_filename(path.name)
    if parsed is not None:
        experiment_id, epoch, tag = parsed
    else:
        experiment_id, epoch, tag = "adhoc", 0, DatasetTag.COMBINED
    if args.dataset is not None:
        tag = DatasetTag(args.dataset)
    table, _issues = parse_score_table(
        path.read_text(encoding="utf-8"), tag, experiment_id, epoch, strict=True
    )
    result = evaluate_candidate(table, MiningConfig(seed=_resolve_seed(args)))
    print(f"experiment={result.table_id[0]}")
    print(f"epoch={result.table_id[1]}")
    print(f"dataset={result.table_id[2].value}")
    print(f"n_train={result.train_size}")
    print(f"n_test={result.test_size}")
    for cell in ("tp", "fn", "fp", "tn"):
        print(f"{cell}={getattr(result.cm, cell)}")
    for name, value in result.metrics.as_dict().items():
        print(f"{name}={format_ratio(value)}")
    print(f"passed={'true' if result.passed_filter else 'false'}")
    return EXIT_OK


def _cmd_synth(args) -> int:
    base = SynthConfig(
        n_records=args.n,
        seed=_resolve_seed(args),
        malignant_prior=args.prior,
        spread=args.spread,
        separability=args.separability,
        experiment_id=args.experiment,
    )
    tables = epoch_series(base, args.epochs)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for table in tables:
        path = out / scores_filename(table.experiment_id, table.epoch, table.dataset_tag)
        path.write_text(write_score_table(table), encoding="utf-8")
        print(path)
    return EXIT_OK


def _cmd_tree(args) -> int:
    tree = parse_tree(Path(args.tree).read_text(encoding="utf-8"))
    if args.tree_cmd == "show":
        fmt = TreeFormat.ASCII
    else:
        fmt = TreeFormat(args.format)
    sys.stdout.write(export_tree(tree, fmt))
    return EXIT_OK


def _cmd_prep(args) -> int:
    img = load_png(args.src)
    if args.prep_cmd == "equalize":
        out = equalize(img)
    elif args.prep_cmd == "resize":
        out = resize(img, args.width, args.height)
    elif args.prep_cmd == "flip":
        out = hflip(img)
    else:
        out = rotate(img, args.degrees, expand=args.expand)
    save_png(out, args.out)
    return EXIT_OK


def _add_seed(parser):
    parser.add_argument("--seed", type=int, default=None, help="u64 seed (or MINER_SEED)")


def build_parser() -> _Parser:
    parser = _Parser(prog="cxrmine", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mine", help="mine decision trees from score tables")
    p.add_argument("--scores", nargs="+", required=True, help="CSV files or directories")
    p.add_argument("--dataset", required=True, choices=_DATASET_CHOICES)
    _add_seed(p)
    p.add_argument("--threshold", default="0.60", help="accuracy filter (default 0.60)")
    p.add_argument("--test-fraction", dest="test_fraction", default="0.2")
    p.add_argument("--max-depth", dest="max_depth", type=int, default=3)
    p.add_argument("--strict", action="store_true", help="abort on any bad row or table")
    p.add_argument("--stratified", action="store_true", help="class-proportional splits")
    p.add_argument("--jobs", type=int, default=1, help="parallel evaluation workers")
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_mine)

    p = sub.add_parser("eval", help="evaluate one score table")
    p.add_argument("--scores", required=True, help="one CSV file")
    p.add_argument("--dataset", choices=_DATASET_CHOICES, default=None)
    _add_seed(p)
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("synth", help="generate a synthetic epoch series")
    p.add_argument("--n", type=int, required=True, help="records per table")
    p.add_argument("--epochs", type=int, required=True)
    _add_seed(p)
    p.add_argument("--out", required=True)
    p.add_argument("--experiment", default="synth")
    p.add_argument("--prior", type=float, default=0.5, help="malignant prior")
    p.add_argument("--spread", type=float, default=0.25, help="triangular noise half-width")
    p.add_argument("--separability", type=float, default=1.0)
    p.set_defaults(handler=_cmd_synth)

    p = sub.add_parser("tree", help="render a serialized tree")
    tree_sub = p.add_subparsers(dest="tree_cmd", required=True)
    for name in ("export", "show"):
        q = tree_sub.add_parser(name)
        q.add_argument("--tree", required=True, help="tree JSON file")
        if name == "export":
            q.add_argument("--format", choices=[f.value for f in TreeFormat], default="dot")
        q.set_defaults(handler=_cmd_tree)

    p = sub.add_parser("prep", help="image preprocessing utilities")
    prep_sub = p.add_subparsers(dest="prep_cmd", required=True)
    for name in ("equalize", "resize", "flip", "rotate"):
        q = prep_sub.add_parser(name)
        q.add_argument("--in", dest="src", required=True, help="input PNG")
        q.add_argument("--out", required=True, help="output PNG")
        if name == "resize":
            q.add_argument("--width", type=int, required=True)
            q.add_argument("--height", type=int, required=True)
        if name == "rotate":
            q.add_argument("--degrees", type=float, required=True)
            q.add_argument("--expand", action="store_true")
        q.set_defaults(handler=_cmd_prep)

    return parser


def run(argv: Optional[list[str]] = None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        return args.handler(args)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except IoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except CxrMineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def console_main():
    sys.exit(run())


if __name__ == "__main__":
    console_main()
