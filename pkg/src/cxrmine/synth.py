"""Synthetic class-conditional score tables.

The mining pipeline consumes score tuples produced by an upstream
image classifier. Training that classifier is far outside desk scale,
so this module fabricates statistically plausible substitutes: each
record draws a label from the malignant prior, then draws every
feature from a symmetric triangular distribution centered on its
class's feature center, clamped to [0, 1]. Triangular noise (sum of
two unit draws, shifted) keeps the support bounded without rejection
loops and is trivially portable.

``separability`` scales the gap between the class centers around their
midpoint: 0 collapses both classes onto the midpoint (features carry
no signal), 1 uses the configured centers, larger values exaggerate
the gap. :func:`epoch_series` ramps separability linearly from 0 to
the configured value, imitating score tables captured from an
upstream model as it trains from useless to useful.

Determinism: labels and noise come from two streams derived from the
seed, and the draw order is fixed (per record: one label draw, then
two noise draws per feature). Configs differing only in separability
therefore produce identical ids, labels, and noise, with only the
centers moving; this is what keeps an epoch series comparable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .datamodel import (
    BinaryLabel,
    DatasetTag,
    FeatureVector,
    LabeledRecord,
    ScoreTable,
)
from .errors import ConfigError
from .rand import SplitMix64, derive_seed

Centers = tuple[float, float, float, float, float]

# benign cases: mild incidental findings, high NoFinding; malignant
# cases: elevated Mass/Nodule/Effusion, suppressed NoFinding
DEFAULT_BENIGN_CENTERS: Centers = (0.25, 0.20, 0.10, 0.75, 0.20)
DEFAULT_MALIGNANT_CENTERS: Centers = (0.45, 0.60, 0.65, 0.20, 0.70)


@dataclass(frozen=True)
class SynthConfig:
    n_records: int
    seed: int
    malignant_prior: float = 0.5
    benign_centers: Centers = DEFAULT_BENIGN_CENTERS
    malignant_centers: Centers = DEFAULT_MALIGNANT_CENTERS
    spread: float = 0.25
    separability: float = 1.0
    experiment_id: str = "synth"
    epoch: int = 1
    dataset_tag: DatasetTag = DatasetTag.COMBINED

    def __post_init__(self):
        if self.n_records < 1:
            raise ConfigError(f"n_records must be >= 1, got {self.n_records}")
        if not isinstance(self.seed, int) or not (0 <= self.seed < 2**64):
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if not (0.0 <= self.malignant_prior <= 1.0):
            raise ConfigError(f"malignant_prior must be in [0, 1], got {self.malignant_prior}")
        if not (math.isfinite(self.spread) and self.spread >= 0.0):
            raise ConfigError(f"spread must be >= 0, got {self.spread}")
        if not (math.isfinite(self.separability) and self.separability >= 0.0):
            raise ConfigError(f"separability must be >= 0, got {self.separability}")
        for name, centers in (
            ("benign_centers", self.benign_centers),
            ("malignant_centers", self.malignant_centers),
        ):
            if len(centers) != 5 or not all(0.0 <= c <= 1.0 for c in centers):
                raise ConfigError(f"{name} must be five values in [0, 1], got {centers}")
        if self.epoch < 0:
            raise ConfigError(f"epoch must be >= 0, got {self.epoch}")


def _effective_centers(config: SynthConfig) -> tuple[Centers, Centers]:
    """Scale the class-center gap by separability, around the midpoints."""
    if config.separability == 1.0:
        # configured centers verbatim; the scaling arithmetic below would
        # perturb them by a few ulps
        return config.benign_centers, config.malignant_centers
    benign = []
    malignant = []
    for b, m in zip(config.benign_centers, config.malignant_centers):
        mid = (b + m) / 2
        benign.append(mid + config.separability * (b - mid))
        malignant.append(mid + config.separability * (m - mid))
    return tuple(benign), tuple(malignant)


def generate(config: SynthConfig) -> ScoreTable:
    """One fully deterministic synthetic table; ids "S0001", "S0002", ..."""
    label_rng = SplitMix64(derive_seed(config.seed, "labels"))
    noise_rng = SplitMix64(derive_seed(config.seed, "noise"))
    benign_centers, malignant_centers = _effective_centers(config)
    records = []
    for i in range(1, config.n_records + 1):
        malignant = label_rng.next_unit() < config.malignant_prior
        centers = malignant_centers if malignant else benign_centers
        scores = []
        for center in centers:
            noise = (noise_rng.next_unit() + noise_rng.next_unit() - 1.0) * config.spread
            scores.append(min(1.0, max(0.0, center + noise)))
        records.append(
            LabeledRecord(
                patient_id=f"S{i:04d}",
                features=FeatureVector(*scores),
                label=BinaryLabel.MALIGNANT if malignant else BinaryLabel.BENIGN,
                provenance=config.dataset_tag,
            )
        )
    return ScoreTable(
        records=tuple(records),
        experiment_id=config.experiment_id,
        epoch=config.epoch,
        dataset_tag=config.dataset_tag,
    )


def epoch_series(base: SynthConfig, n_epochs: int) -> list[ScoreTable]:
    """Tables for epochs 1..n_epochs with linearly ramping separability.

    Epoch 1 has separability 0, epoch n_epochs has the configured
    value (a single epoch gets the full value). Ids and labels are
    identical across the series; only the scores move.
    """
    if n_epochs < 1:
        raise ConfigError(f"n_epochs must be >= 1, got {n_epochs}")
    tables = []
    for epoch in range(1, n_epochs + 1):
        if n_epochs == 1:
            separability = base.separability
        else:
            separability = base.separability * (epoch - 1) / (n_epochs - 1)
        config = replace(base, separability=separability, epoch=epoch)
        tables.append(generate(config))
    return tables
