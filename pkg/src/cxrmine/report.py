"""Aggregate presentation of mining output.

Rebuilds the familiar summary-table layouts from a MiningReport: one
row per group showing the top-ranked candidate's six metrics to three
decimals, and pass-rate tables with percentages to one decimal. All
numbers are the stored exact rationals rounded half away from zero at
render time; columns are tab-separated plain text.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .metrics import METRIC_NAMES, format_percent, format_ratio
from .mining import CandidateResult, MiningReport

SUMMARY_HEADER = ("Group", "Accuracy", "Sensitivity", "Specificity", "PPV", "FP Rate", "F1")
EMPTY_CELL = "—"


class GroupBy(str, Enum):
    EXPERIMENT = "experiment"
    DATASET = "dataset"


def _group_key(result: CandidateResult, group_by: GroupBy) -> str:
    experiment_id, _epoch, tag = result.table_id
    return experiment_id if group_by is GroupBy.EXPERIMENT else tag.value


def metric_cells(result: CandidateResult) -> list[str]:
    """The six metric columns of one summary row, 3 decimals or n/a."""
    values = result.metrics.as_dict()
    return [format_ratio(values[name]) for name in METRIC_NAMES]


def summarize_best(report: MiningReport, group_by: GroupBy = GroupBy.EXPERIMENT) -> str:
    """One row per group: the metrics of its top-ranked passing candidate.

    Groups are every distinct key among the evaluated candidates, in
    ascending order; a group with no passing candidate renders an
    em-dash in every metric column.
    """
    group_by = GroupBy(group_by)
    groups = sorted({_group_key(r, group_by) for r in report.results})
    best: dict[str, CandidateResult] = {}
    for index in report.ranking:
        result = report.results[index]
        best.setdefault(_group_key(result, group_by), result)
    lines = ["\t".join(SUMMARY_HEADER)]
    for group in groups:
        if group in best:
            lines.append("\t".join([group] + metric_cells(best[group])))
        else:
            lines.append("\t".join([group] + [EMPTY_CELL] * len(METRIC_NAMES)))
    return "\n".join(lines) + "\n"


def format_pass_rate(passed: int, total: int) -> str:
    """Percentage to one decimal, e.g. 217/250 -> '86.8%'; 0 total -> 'n/a'."""
    if total == 0:
        return "n/a"
    return format_percent(Fraction(passed, total))


def pass_rate_table(reports: Sequence[MiningReport]) -> str:
    """Per report: passed, total, and the pass percentage to 1 decimal."""
    lines = ["\t".join(("Report", "Passed", "Total", "Rate"))]
    for number, report in enumerate(reports, start=1):
        passed, total = report.summary
        lines.append("\t".join((str(number), str(passed), str(total), format_pass_rate(passed, total))))
    return "\n".join(lines) + "\n"
