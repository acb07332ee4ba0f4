"""
Score tables: building, harmonizing, and ingesting
==================================================

A score table is one CSV of per-patient pathology scores plus a
harmonized diagnosis. This walks the full path: raw diagnosis codes in,
validated records out.
"""

from cxrmine import (
    DatasetTag,
    RawDiagnosis,
    parse_score_table,
    write_score_table,
)

# The two source datasets encode diagnosis differently: one uses an
# integer malignancy level 0..3 (0 means unknown and is excluded), the
# other uses the strings "Benign"/"Malignant". harmonize() maps both
# onto the shared binary labels.
for source, code in [
    (DatasetTag.LIDC, 1),
    (DatasetTag.LIDC, 3),
    (DatasetTag.LIDC, 0),
    (DatasetTag.JSRT, "Malignant"),
]:
    label = RawDiagnosis(source=source, code=code).harmonize()
    print(f"{source.value:8s} {code!r:12} -> {label.display if label else 'excluded'}")

# Parsing is lenient by default: bad rows become issues, good rows load.
text = """\
PatientID,Atelectasis,Effusion,Mass,NoFinding,Nodule,Diagnosis
P001,0.12,0.05,0.80,0.10,0.66,3
P002,0.40,0.30,1.20,0.20,0.10,2
P003,0.05,0.02,0.03,0.95,0.04,1
"""
table, issues = parse_score_table(text, DatasetTag.LIDC, experiment_id="demo", epoch=1)

print(f"\nloaded {len(table.records)} records, {len(issues)} issue(s)")
for issue in issues:
    print(f"  row {issue.row_number}: {issue.kind.value}: {issue.detail}")

# Writing always round-trips exactly; float scores are serialized with
# their shortest round-trip representation.
print("\nserialized back out:")
print(write_score_table(table))
