"""The mining loop: split each candidate table, fit, filter, rank, report.

Every candidate score table is independently split 80:20 (seeded,
unstratified by default), a depth-limited tree is fitted on the train
side, holdout predictions are tallied into a confusion matrix, and
candidates whose holdout accuracy reaches the threshold (default 60%)
survive the filter. Survivors are ranked by interrogating their
confusion matrices: F1 descending, then false-positive rate ascending,
then accuracy descending, with the table identity as the final
deterministic tie-break.

Reproducibility contract: the split of a candidate depends only on the
run seed and the table identity (experiment_id, epoch, dataset), mixed
by :func:`cxrmine.rand.derive_seed`. Adding or removing tables from a
run never perturbs the other candidates' splits, and a concurrent run
produces byte-identical reports to a serial one.
"""

from __future__ import annotations

import io
import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

from .datamodel import DatasetTag, ScoreTable
from .errors import ConfigError, CxrMineError, DegenerateSplit, IoError, TooFewSamples
from .metrics import (
    ConfusionMatrix,
    MetricSet,
    _scaled_int,
    binary_metrics,
    confusion,
    format_percent,
    format_ratio,
)
from .rand import SplitMix64, derive_seed, fisher_yates
from .tree import DecisionTree, TreeConfig, TreeFormat, export_tree, fit_tree, predict

TableId = tuple[str, int, DatasetTag]

FractionLike = Union[Fraction, float, int, str]


def _exact_fraction(value: FractionLike) -> Fraction:
    """Read a number by its decimal meaning: 0.6 becomes exactly 3/5."""
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


class RankPolicy(str, Enum):
    F1_THEN_FPR = "f1_then_fpr"
    ACCURACY_THEN_F1 = "accuracy_then_f1"


@dataclass(frozen=True)
class MiningConfig:
    """Knobs of one mining run; the defaults are the reference procedure."""

    seed: int
    test_fraction: Fraction = Fraction(1, 5)
    accuracy_threshold: Fraction = Fraction(3, 5)
    tree_config: TreeConfig = field(default_factory=TreeConfig)
    rank_policy: RankPolicy = RankPolicy.F1_THEN_FPR
    stratified: bool = False

    def __post_init__(self):
        if not isinstance(self.seed, int) or not (0 <= self.seed < 2**64):
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        object.__setattr__(self, "test_fraction", _exact_fraction(self.test_fraction))
        object.__setattr__(
            self, "accuracy_threshold", _exact_fraction(self.accuracy_threshold)
        )
        if not (0 < self.test_fraction < 1):
            raise ConfigError(f"test_fraction must be in (0, 1), got {self.test_fraction}")
        if not (0 <= self.accuracy_threshold <= 1):
            raise ConfigError(
                f"accuracy_threshold must be in [0, 1], got {self.accuracy_threshold}"
            )


@dataclass(frozen=True)
class CandidateResult:
    table_id: TableId
    train_size: int
    test_size: int
    cm: ConfusionMatrix
    metrics: MetricSet
    passed_filter: bool
    tree: DecisionTree


@dataclass(frozen=True)
class MiningReport:
    config: MiningConfig
    results: tuple[CandidateResult, ...]
    failures: tuple[tuple[TableId, str], ...]
    ranking: tuple[int, ...]

    @property
    def summary(self) -> tuple[int, int]:
        """(passed, total candidates attempted)."""
        passed = sum(1 for r in self.results if r.passed_filter)
        return passed, len(self.results) + len(self.failures)


def _stratified_quota(test_size: int, n_malignant: int, n_benign: int) -> int:
    """Malignant share of the test set, proportional, ties away from zero."""
    total = n_malignant + n_benign
    quota = _scaled_int(Fraction(test_size * n_malignant, total), 0)
    low = max(0, test_size - n_benign)
    high = min(n_malignant, test_size)
    return min(max(quota, low), high)


def split_train_test(
    table: ScoreTable,
    fraction: FractionLike,
    seed: int,
    stratified: bool = False,
) -> tuple[ScoreTable, ScoreTable]:
    """Partition a table into (train, test) with test_size = ceil(fraction*n).

    A seeded Fisher-Yates shuffle of the record indices selects the
    test set; both subsets keep the original record order. The default
    is unstratified; the stratified variant keeps the same total test
    size but apportions it between the classes proportionally.
    """
    n = len(table)
    if n < 2:
        raise TooFewSamples(f"cannot split a table of {n} record(s)")
    frac = _exact_fraction(fraction)
    if not (0 < frac < 1):
        raise ConfigError(f"split fraction must be in (0, 1), got {frac}")
    test_size = math.ceil(frac * n)
    if n - test_size == 0:
        raise DegenerateSplit(
            f"fraction {frac} of {n} records leaves an empty training set"
        )
    shuffled = fisher_yates(range(n), SplitMix64(seed))
    if stratified:
        malignant = [i for i in shuffled if table.records[i].label.value == 2]
        benign = [i for i in shuffled if table.records[i].label.value == 1]
        m_quota = _stratified_quota(test_size, len(malignant), len(benign))
        test_indices = set(malignant[:m_quota]) | set(benign[: test_size - m_quota])
    else:
        test_indices = set(shuffled[:test_size])
    def subset(keep: bool) -> ScoreTable:
        records = tuple(
            r for i, r in enumerate(table.records) if (i in test_indices) == keep
        )
        return ScoreTable(
            records=records,
            experiment_id=table.experiment_id,
            epoch=table.epoch,
            dataset_tag=table.dataset_tag,
        )

    return subset(False), subset(True)


def table_identity(table: ScoreTable) -> TableId:
    return (table.experiment_id, table.epoch, table.dataset_tag)


def candidate_seed(run_seed: int, table_id: TableId) -> int:
    """Per-candidate split seed: run seed mixed with the table identity."""
    experiment_id, epoch, tag = table_id
    return derive_seed(run_seed, experiment_id, str(epoch), tag.value)


def evaluate_candidate(table: ScoreTable, config: MiningConfig) -> CandidateResult:
    """Split, fit, predict the holdout, and apply the accuracy filter."""
    table_id = table_identity(table)
    try:
        train, test = split_train_test(
            table, config.test_fraction, candidate_seed(config.seed, table_id),
            stratified=config.stratified,
        )
        tree = fit_tree(train.records, config.tree_config)
        predictions = [predict(tree, r.features) for r in test.records]
        truths = [r.label for r in test.records]
        cm = confusion(predictions, truths)
        metrics = binary_metrics(cm)
    except CxrMineError as exc:
        exc.table_id = table_id
        raise
    passed = metrics.accuracy is not None and metrics.accuracy >= config.accuracy_threshold
    return CandidateResult(
        table_id=table_id,
        train_size=len(train),
        test_size=len(test),
        cm=cm,
        metrics=metrics,
        passed_filter=passed,
        tree=tree,
    )


def _rank_key(result: CandidateResult, policy: RankPolicy):
    m = result.metrics
    experiment_id, epoch, tag = result.table_id
    identity = (experiment_id, epoch, tag.value)

    def desc(value: Optional[Fraction]):
        # absent metrics sort after any present value within their tier
        return (value is None, -(value if value is not None else 0))

    def asc(value: Optional[Fraction]):
        return (value is None, value if value is not None else 0)

    if policy is RankPolicy.ACCURACY_THEN_F1:
        return (*desc(m.accuracy), *desc(m.f1), *asc(m.fp_rate), identity)
    return (*desc(m.f1), *asc(m.fp_rate), *desc(m.accuracy), identity)


def rank_models(
    results: Sequence[CandidateResult], policy: RankPolicy = RankPolicy.F1_THEN_FPR
) -> tuple[int, ...]:
    """Indices of the passing results, best first.

    Identical table ids (possible when the same table is mined twice)
    keep their input order: the sort is stable and the key is the
    identity, not the position.
    """
    passing = [i for i, r in enumerate(results) if r.passed_filter]
    return tuple(sorted(passing, key=lambda i: _rank_key(results[i], policy)))


def mine(
    tables: Sequence[ScoreTable],
    config: MiningConfig,
    strict: bool = False,
    jobs: int = 1,
    progress: Optional[Callable[[int, int], None]] = None,
) -> MiningReport:
    """Evaluate every candidate table and rank the survivors.

    Results stay in input order regardless of execution order. In
    lenient mode (default) a candidate that cannot be evaluated is
    recorded as a failure and the run continues; strict mode re-raises.
    """
    tables = list(tables)
    results: list[Optional[CandidateResult]] = [None] * len(tables)
    failures: list[tuple[TableId, str]] = []
    done = 0

    def finish(index: int, outcome, error):
        nonlocal done
        done += 1
        if error is not None:
            if strict:
                raise error
            failures.append((table_identity(tables[index]), str(error)))
        else:
            results[index] = outcome
        if progress is not None:
            progress(done, len(tables))

    if jobs > 1 and len(tables) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(evaluate_candidate, t, config) for t in tables]
            for index, future in enumerate(futures):
                try:
                    finish(index, future.result(), None)
                except CxrMineError as exc:
                    finish(index, None, exc)
    else:
        for index, table in enumerate(tables):
            try:
                finish(index, evaluate_candidate(table, config), None)
            except CxrMineError as exc:
                finish(index, None, exc)

    kept = tuple(r for r in results if r is not None)
    return MiningReport(
        config=config,
        results=kept,
        failures=tuple(failures),
        ranking=rank_models(kept, config.rank_policy),
    )


METRICS_CSV_COLUMNS = (
    "experiment_id",
    "epoch",
    "dataset",
    "n_train",
    "n_test",
    "tp",
    "fn",
    "fp",
    "tn",
    "accuracy",
    "sensitivity",
    "specificity",
    "ppv",
    "fp_rate",
    "f1",
    "passed",
)


def metrics_csv_text(report: MiningReport) -> str:
    """The metrics.csv body: one row per evaluated candidate, input order."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(METRICS_CSV_COLUMNS)
    for result in report.results:
        experiment_id, epoch, tag = result.table_id
        m = result.metrics
        writer.writerow(
            [
                experiment_id,
                epoch,
                tag.value,
                result.train_size,
                result.test_size,
                result.cm.tp,
                result.cm.fn,
                result.cm.fp,
                result.cm.tn,
                format_ratio(m.accuracy),
                format_ratio(m.sensitivity),
                format_ratio(m.specificity),
                format_ratio(m.ppv),
                format_ratio(m.fp_rate),
                format_ratio(m.f1),
                "true" if result.passed_filter else "false",
            ]
        )
    return out.getvalue()


def summary_text(report: MiningReport) -> str:
    """The summary.txt body; byte-deterministic given the report."""
    passed, total = report.summary
    rate = format_percent(Fraction(passed, total)) if total else "n/a"
    config = report.config
    lines = [
        "mining summary",
        f"seed: {config.seed}",
        f"test fraction: {format_ratio(config.test_fraction, 2)}",
        f"accuracy threshold: {format_ratio(config.accuracy_threshold, 2)}",
        f"max depth: {config.tree_config.max_depth}",
        f"rank policy: {config.rank_policy.value}",
        f"stratified: {'true' if config.stratified else 'false'}",
        f"candidates: {total}",
        f"passed: {passed}/{total} ({rate})",
    ]
    if report.ranking:
        lines.append("ranking:")
        for place, index in enumerate(report.ranking, start=1):
            result = report.results[index]
            experiment_id, epoch, tag = result.table_id
            m = result.metrics
            lines.append(
                f"  {place}. {experiment_id} epoch {epoch} {tag.value}"
                f"  f1={format_ratio(m.f1)} fp_rate={format_ratio(m.fp_rate)}"
                f" accuracy={format_ratio(m.accuracy)}"
            )
    if report.failures:
        lines.append("failures:")
        for (experiment_id, epoch, tag), message in report.failures:
            lines.append(f"  {experiment_id} epoch {epoch} {tag.value}: {message}")
    return "\n".join(lines) + "\n"


def render_report(report: MiningReport, out_dir) -> list[Path]:
    """Write metrics.csv, summary.txt, and per-passing-candidate trees.

    Rendering is byte-deterministic given the report; re-running a
    mine produces an identical directory.
    """
    out = Path(out_dir)
    written: list[Path] = []
    try:
        out.mkdir(parents=True, exist_ok=True)

        def emit(name: str, text: str):
            path = out / name
            path.write_text(text, encoding="utf-8")
            written.append(path)

        emit("metrics.csv", metrics_csv_text(report))
        used_names: set[str] = set()
        for index, result in enumerate(report.results):
            if not result.passed_filter:
                continue
            experiment_id, epoch, tag = result.table_id
            stem = f"tree_{experiment_id}_{epoch}_{tag.value}"
            if stem in used_names:
                stem = f"{stem}_{index}"
            used_names.add(stem)
            emit(f"{stem}.json", export_tree(result.tree, TreeFormat.JSON))
            emit(f"{stem}.dot", export_tree(result.tree, TreeFormat.DOT))
        emit("summary.txt", summary_text(report))
    except OSError as exc:
        raise IoError(f"cannot write report to {out}: {exc}") from exc
    return written
