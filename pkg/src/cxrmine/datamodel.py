"""Core domain types and diagnosis-label harmonization.

Two public collections supply the malignancy ground truth, with
differently coded diagnoses:

* LIDC-IDRI patient metadata codes diagnoses as integer levels, where
  0 means "Unknown" (our convention for the unlabeled cases, which are
  excluded before analysis, not treated as errors), 1 is benign disease
  and 2 / 3 are primary / metastatic malignancies that collapse into a
  single malignant class.
* JSRT labels nodule studies with the strings "Benign" / "Malignant".

Harmonization maps both onto :class:`BinaryLabel`. Malignant is the
positive class for every metric in this package: in this screening
setting a false positive costs a follow-up scan, a false negative costs
a missed cancer, so ties and ambiguities always resolve toward the
malignant call.

All types here are immutable after construction and safe to share
between concurrent workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Iterator, Optional, Sequence, Union

from .errors import IllegalDiagnosis, IncompatibleTables

FEATURE_NAMES = ("Atelectasis", "Effusion", "Mass", "NoFinding", "Nodule")
N_FEATURES = len(FEATURE_NAMES)


class BinaryLabel(IntEnum):
    """Harmonized malignancy label; Malignant is the positive class."""

    BENIGN = 1
    MALIGNANT = 2

    @property
    def display(self) -> str:
        return self.name.capitalize()


class DatasetTag(str, Enum):
    """Provenance of a score table or record.

    COMBINED marks tables built from both sources (or parsed from a
    combined file, where per-record origin is no longer recoverable).
    """

    LIDC = "lidc"
    JSRT = "jsrt"
    COMBINED = "combined"


@dataclass(frozen=True)
class FeatureVector:
    """The five-score tuple inferred for one image.

    Order is fixed and canonical: Atelectasis, Effusion, Mass,
    NoFinding, Nodule (indices 0..4). NoFinding is a pathology
    contra-indicator: high values argue against disease.
    """

    atelectasis: float
    effusion: float
    mass: float
    no_finding: float
    nodule: float

    def __post_init__(self):
        for name, value in zip(FEATURE_NAMES, self.as_tuple()):
            if not (math.isfinite(value) and 0.0 <= value <= 1.0):
                raise ValueError(f"{name} score must be finite in [0, 1], got {value!r}")

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.atelectasis, self.effusion, self.mass, self.no_finding, self.nodule)

    def __getitem__(self, index: int) -> float:
        return self.as_tuple()[index]

    def __iter__(self) -> Iterator[float]:
        return iter(self.as_tuple())


@dataclass(frozen=True)
class RawDiagnosis:
    """A source-coded diagnosis before harmonization.

    ``code`` is an integer level 0..3 for LIDC and a "Benign" /
    "Malignant" string for JSRT.
    """

    source: DatasetTag
    code: Union[int, str]

    def harmonize(self) -> Optional[BinaryLabel]:
        """Map to a :class:`BinaryLabel`; None means excluded (LIDC Unknown)."""
        if self.source is DatasetTag.LIDC:
            return harmonize_lidc(self.code)  # type: ignore[arg-type]
        if self.source is DatasetTag.JSRT:
            return harmonize_jsrt(self.code)  # type: ignore[arg-type]
        raise IllegalDiagnosis(f"no harmonization rule for source {self.source}")


@dataclass(frozen=True)
class LabeledRecord:
    """One patient image: id, inferred scores, harmonized label, origin."""

    patient_id: str
    features: FeatureVector
    label: BinaryLabel
    provenance: DatasetTag

    def __post_init__(self):
        if not self.patient_id:
            raise ValueError("patient_id must be non-empty")


@dataclass(frozen=True)
class ScoreTable:
    """An ordered collection of labeled records from one inference pass.

    ``epoch`` tags which training checkpoint of the upstream classifier
    produced the scores; runs following the reference procedure use
    epochs 1..25, but the field is not bounded here. Record order is the
    ingestion order and is preserved by every operation.
    """

    records: tuple[LabeledRecord, ...]
    experiment_id: str
    epoch: int
    dataset_tag: DatasetTag

    def __post_init__(self):
        if not isinstance(self.records, tuple):
            object.__setattr__(self, "records", tuple(self.records))
        if self.epoch < 0:
            raise ValueError(f"epoch must be non-negative, got {self.epoch}")

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[LabeledRecord]:
        return iter(self.records)

    def class_counts(self) -> tuple[int, int]:
        """(n_benign, n_malignant) over all records."""
        n_malignant = sum(1 for r in self.records if r.label is BinaryLabel.MALIGNANT)
        return len(self.records) - n_malignant, n_malignant


def harmonize_lidc(code: int) -> Optional[BinaryLabel]:
    """Harmonize an LIDC integer diagnosis level.

    0 (Unknown) maps to None, meaning the record is excluded from
    analysis; 1 is benign; 2 and 3 (primary and metastatic cancer) are
    combined into the single malignant class.
    """
    if code not in (0, 1, 2, 3):
        raise IllegalDiagnosis(f"LIDC diagnosis level must be 0..3, got {code!r}")
    if code == 0:
        return None
    return BinaryLabel.BENIGN if code == 1 else BinaryLabel.MALIGNANT


def harmonize_jsrt(label: str) -> BinaryLabel:
    """Harmonize a JSRT diagnosis string (case-insensitive, trimmed)."""
    normalized = label.strip().lower()
    if normalized == "benign":
        return BinaryLabel.BENIGN
    if normalized == "malignant":
        return BinaryLabel.MALIGNANT
    raise IllegalDiagnosis(f"JSRT diagnosis must be Benign or Malignant, got {label!r}")


def combine_datasets(a: ScoreTable, b: ScoreTable) -> ScoreTable:
    """Concatenate two aligned tables into one COMBINED table.

    Both tables must share the experiment id and epoch. Records keep
    their per-record provenance; only the table-level tag changes.
    """
    if (a.experiment_id, a.epoch) != (b.experiment_id, b.epoch):
        raise IncompatibleTables(
            f"cannot combine ({a.experiment_id!r}, epoch {a.epoch}) "
            f"with ({b.experiment_id!r}, epoch {b.epoch})"
        )
    return ScoreTable(
        records=a.records + b.records,
        experiment_id=a.experiment_id,
        epoch=a.epoch,
        dataset_tag=DatasetTag.COMBINED,
    )
