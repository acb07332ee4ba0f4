"""Reading, validating, and writing seven-column score-table CSVs.

The CSV template is the boundary between any upstream classifier and
the miner:

    PatientID,Atelectasis,Effusion,Mass,NoFinding,Nodule,Diagnosis

On input the Diagnosis column carries the raw source coding (integer
levels 0..3 for LIDC, Benign/Malignant strings for JSRT). Output files
are always written in harmonized form (Diagnosis 1 = Benign,
2 = Malignant), flagged with a leading comment line ``# harmonized=true``
that the parser accepts and ignores. Harmonized 1/2 values are legal
LIDC levels with the same meaning, and the parser additionally accepts
them for JSRT and combined sources, so every written file parses back
to an equal table.

Scores are serialized as the shortest decimal that round-trips the
underlying binary value, so ``parse(write(t))`` reproduces ``t``
bit-exactly. ``#``-prefixed lines are comments; CRLF and LF input are
both accepted; output uses LF.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .datamodel import (
    FEATURE_NAMES,
    BinaryLabel,
    DatasetTag,
    FeatureVector,
    LabeledRecord,
    ScoreTable,
    harmonize_jsrt,
    harmonize_lidc,
)
from .errors import IllegalDiagnosis, IngestError, SchemaError

CSV_HEADER = ("PatientID",) + FEATURE_NAMES + ("Diagnosis",)
HARMONIZED_COMMENT = "# harmonized=true"

_FILENAME_RE = re.compile(r"^scores_(?P<experiment>.+)_(?P<epoch>\d+)_(?P<dataset>lidc|jsrt|combined)\.csv$")


class IssueKind(str, Enum):
    """Classification of a single ingest problem.

    UNKNOWN_EXCLUDED is informational: an LIDC row whose diagnosis is
    Unknown (level 0) is dropped by design, not rejected.
    """

    SCHEMA = "SchemaError"
    RANGE = "RangeError"
    ILLEGAL_DIAGNOSIS = "IllegalDiagnosis"
    PARSE = "ParseError"
    DUPLICATE_ID = "DuplicateId"
    UNKNOWN_EXCLUDED = "UnknownExcluded"


@dataclass(frozen=True)
class IngestIssue:
    """One problem found while parsing; row_number 0 means the header."""

    row_number: int
    kind: IssueKind
    detail: str


def _parse_diagnosis(raw: str, source: DatasetTag) -> Optional[BinaryLabel]:
    """Decode one Diagnosis cell; None means excluded (LIDC Unknown).

    Integer cells are accepted for every source because written files
    are always harmonized to 1/2. String labels are only legal for JSRT
    input.
    """
    text = raw.strip()
    try:
        code = int(text)
    except ValueError:
        if source is DatasetTag.JSRT:
            return harmonize_jsrt(text)
        raise IllegalDiagnosis(
            f"{source.value} diagnosis must be an integer level, got {raw!r}"
        ) from None
    if source is DatasetTag.LIDC:
        return harmonize_lidc(code)
    if code in (1, 2):
        return BinaryLabel(code)
    raise IllegalDiagnosis(
        f"harmonized diagnosis must be 1 (Benign) or 2 (Malignant), got {code}"
    )


def parse_score_table(
    text: str,
    source: DatasetTag,
    experiment_id: str,
    epoch: int,
    strict: bool = False,
) -> tuple[ScoreTable, list[IngestIssue]]:
    """Parse CSV text into a ScoreTable plus a list of issues.

    Lenient mode (default) skips bad rows and reports every issue;
    strict mode raises IngestError at the first non-informational
    issue. A malformed header raises SchemaError in both modes. Row
    numbers count data rows from 1 (comments and blank lines do not
    advance the count); 0 marks a header issue.
    """
    issues: list[IngestIssue] = []
    records: list[LabeledRecord] = []
    seen_ids: set[str] = set()

    lines = (line for line in io.StringIO(text) if not line.startswith("#"))
    reader = csv.reader(lines)

    header = next(reader, None)
    if header is None or tuple(cell.strip() for cell in header) != CSV_HEADER:
        got = ",".join(header) if header is not None else "<empty input>"
        raise SchemaError(
            IngestIssue(0, IssueKind.SCHEMA, f"expected header {','.join(CSV_HEADER)!r}, got {got!r}")
        )

    def report(issue: IngestIssue):
        issues.append(issue)
        if strict and issue.kind is not IssueKind.UNKNOWN_EXCLUDED:
            raise IngestError(issue)

    row_number = 0
    for row in reader:
        if not row or all(not cell.strip() for cell in row):
            continue
        row_number += 1
        if len(row) != len(CSV_HEADER):
            report(
                IngestIssue(
                    row_number,
                    IssueKind.PARSE,
                    f"expected {len(CSV_HEADER)} fields, got {len(row)}",
                )
            )
            continue
        patient_id = row[0]
        if not patient_id:
            report(IngestIssue(row_number, IssueKind.PARSE, "empty PatientID"))
            continue

        scores = []
        bad = False
        for name, cell in zip(FEATURE_NAMES, row[1:6]):
            try:
                value = float(cell)
            except ValueError:
                report(
                    IngestIssue(
                        row_number, IssueKind.PARSE, f"{name} is not numeric: {cell!r}"
                    )
                )
                bad = True
                break
            if not (math.isfinite(value) and 0.0 <= value <= 1.0):
                report(
                    IngestIssue(
                        row_number,
                        IssueKind.RANGE,
                        f"{name} must be in [0, 1], got {cell.strip()}",
                    )
                )
                bad = True
                break
            scores.append(value)
        if bad:
            continue

        try:
            label = _parse_diagnosis(row[6], source)
        except IllegalDiagnosis as exc:
            report(IngestIssue(row_number, IssueKind.ILLEGAL_DIAGNOSIS, str(exc)))
            continue
        if label is None:
            issues.append(
                IngestIssue(
                    row_number,
                    IssueKind.UNKNOWN_EXCLUDED,
                    f"{patient_id}: diagnosis Unknown, row excluded",
                )
            )
            continue

        if patient_id in seen_ids:
            # warning only: the record is kept, the repetition reported
            report(
                IngestIssue(
                    row_number, IssueKind.DUPLICATE_ID, f"PatientID {patient_id!r} repeats"
                )
            )
        seen_ids.add(patient_id)
        records.append(
            LabeledRecord(
                patient_id=patient_id,
                features=FeatureVector(*scores),
                label=label,
                provenance=source,
            )
        )

    table = ScoreTable(
        records=tuple(records),
        experiment_id=experiment_id,
        epoch=epoch,
        dataset_tag=source,
    )
    return table, issues


def _format_score(value: float) -> str:
    # repr of a Python float is the shortest decimal that round-trips
    return repr(value)


def write_score_table(table: ScoreTable) -> str:
    """Render a table as harmonized CSV text (LF line endings).

    Per-record provenance is not representable in the seven-column
    format; a reparse assigns every record the table-level tag.
    """
    out = io.StringIO()
    out.write(HARMONIZED_COMMENT + "\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for record in table.records:
        writer.writerow(
            [record.patient_id]
            + [_format_score(v) for v in record.features]
            + [str(int(record.label))]
        )
    return out.getvalue()


def scores_filename(experiment_id: str, epoch: int, dataset_tag: DatasetTag) -> str:
    """Canonical file name for one candidate table."""
    return f"scores_{experiment_id}_{epoch}_{dataset_tag.value}.csv"


def parse_scores_filename(name: str) -> Optional[tuple[str, int, DatasetTag]]:
    """Inverse of scores_filename; None when the name does not conform.

    The experiment id may itself contain underscores, so the epoch and
    dataset are taken from the right.
    """
    match = _FILENAME_RE.match(name)
    if match is None:
        return None
    return (
        match.group("experiment"),
        int(match.group("epoch")),
        DatasetTag(match.group("dataset")),
    )
