"""
Diagnostic metrics and AUC-ROC
==============================

Metrics are exact rationals internally; rounding happens only when a
value is rendered. AUC uses midrank tie handling.
"""

from cxrmine import (
    BinaryLabel,
    ConfusionMatrix,
    METRIC_NAMES,
    binary_metrics,
    format_ratio,
    roc_auc,
)

B, M = BinaryLabel.BENIGN, BinaryLabel.MALIGNANT

# Three holdout confusion matrices from mined trees on 20-, 31- and
# 50-sample test sets.
matrices = {
    "lidc n=20": ConfusionMatrix(tp=13, fn=2, fp=1, tn=4),
    "jsrt n=31": ConfusionMatrix(tp=16, fn=0, fp=9, tn=6),
    "both n=50": ConfusionMatrix(tp=30, fn=5, fp=4, tn=11),
}

print(" " * 11 + "  ".join(f"{name:>11s}" for name in METRIC_NAMES))
for label, cm in matrices.items():
    metrics = binary_metrics(cm)
    cells = "  ".join(f"{format_ratio(v):>11s}" for v in metrics.as_dict().values())
    print(f"{label}  {cells}")

# The middle row never misses a malignancy (sensitivity 1.0) but pays
# for it with nine false positives.

# AUC: probability that a malignant case outscores a benign one.
scores = [0.9, 0.8, 0.6, 0.4, 0.4, 0.1]
truths = [M, M, B, M, B, B]
print("\nauc:", roc_auc(scores, truths))

# Ties are counted as half; identical scores give exactly 0.5.
print("all-tie auc:", roc_auc([0.3] * 4, [M, M, B, B]))
