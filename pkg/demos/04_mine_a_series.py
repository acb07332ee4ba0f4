"""
Mining an epoch series end to end
=================================

A full mining run over a synthetic training trajectory: each epoch's
score table gets its own seeded 80:20 split and depth-3 tree; trees are
kept when holdout accuracy reaches 60%, and survivors are ranked by
F1, then false-positive rate, then accuracy.
"""

import tempfile
from pathlib import Path

from cxrmine import (
    MiningConfig,
    SynthConfig,
    epoch_series,
    mine,
    render_report,
    summarize_best,
)

# Epoch 1 carries no class signal at all; separability then ramps
# linearly, imitating an upstream classifier that slowly learns.
series = epoch_series(SynthConfig(n_records=250, seed=7), n_epochs=25)

report = mine(series, MiningConfig(seed=7))

passed, total = report.summary
print(f"{passed}/{total} candidates passed the accuracy filter\n")

print("epoch  accuracy  f1      passed")
for result in report.results:
    epoch = result.table_id[1]
    acc = float(result.metrics.accuracy)
    f1 = float(result.metrics.f1) if result.metrics.f1 is not None else float("nan")
    print(f"{epoch:5d}  {acc:.3f}     {f1:.3f}   {'yes' if result.passed_filter else '-'}")

best = report.results[report.ranking[0]]
print("\nbest candidate:", best.table_id, best.cm.as_tuple())

print("\n" + summarize_best(report))

# render_report writes metrics.csv, summary.txt and one JSON + DOT pair
# per passing tree; identical inputs produce byte-identical files.
with tempfile.TemporaryDirectory() as tmp:
    paths = render_report(report, Path(tmp) / "report")
    for path in paths[:6]:
        print(path.name)
    print(f"... {len(paths)} files total")
