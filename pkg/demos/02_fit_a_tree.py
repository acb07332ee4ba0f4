"""
Fitting and rendering a decision tree
=====================================

Depth-3 trees with an entropy criterion, rendered three ways.
"""

from cxrmine import (
    BinaryLabel,
    DatasetTag,
    FeatureVector,
    LabeledRecord,
    TreeFormat,
    export_tree,
    fit_tree,
    parse_tree,
    predict,
)

B, M = BinaryLabel.BENIGN, BinaryLabel.MALIGNANT


def record(pid, label, mass, nofinding):
    return LabeledRecord(
        patient_id=pid,
        features=FeatureVector(0.2, 0.2, mass, nofinding, 0.2),
        label=label,
        provenance=DatasetTag.COMBINED,
    )


# High Mass usually means malignant here, but two benign cases (c03,
# c04) sit inside the malignant Mass band and one malignant case (c07)
# scores high on the NoFinding contra-indicator, so no single split is
# clean: the fit opens on NoFinding and resolves the rest with Mass.
records = [
    record("c01", B, 0.10, 0.90),
    record("c02", B, 0.15, 0.80),
    record("c03", B, 0.82, 0.85),
    record("c04", B, 0.78, 0.75),
    record("c05", M, 0.75, 0.20),
    record("c06", M, 0.80, 0.15),
    record("c07", M, 0.85, 0.80),
    record("c08", M, 0.90, 0.10),
]

tree = fit_tree(records)
print(export_tree(tree, TreeFormat.ASCII))

probe = FeatureVector(0.2, 0.2, 0.88, 0.60, 0.2)
print("probe ->", predict(tree, probe).display)

# The JSON form is the storage format; DOT feeds graphviz.
payload = export_tree(tree, TreeFormat.JSON)
assert parse_tree(payload) == tree
print("\nJSON round trip ok,", len(payload), "bytes")
print("\nDOT for `dot -Tpng`: ")
print(export_tree(tree, TreeFormat.DOT))
