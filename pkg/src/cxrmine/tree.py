"""Depth-limited binary decision trees with the entropy criterion.

Induction is classic greedy CART restricted to two classes and five
features. The conventions, fixed here so that independently written
implementations agree node-for-node:

* Candidate thresholds are midpoints between consecutive distinct
  sorted values of a feature; a sample goes left when
  ``feature <= threshold``.
* Split quality is information gain in bits. Equal-gain ties break to
  the lowest feature index, then the lowest threshold.
* A node becomes a leaf when it is pure, at maximum depth, smaller
  than ``min_samples_split``, or when no split has positive gain.
* Leaf labels are the majority class; an exact tie is called
  Malignant, the clinically safer direction (a false positive costs a
  follow-up, a false negative costs a missed cancer).

Fitting is invariant under permutation of the input records: the sweep
works on value-sorted copies and every recorded quantity is a count.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

from .datamodel import FEATURE_NAMES, BinaryLabel, FeatureVector, LabeledRecord
from .errors import EmptyDataset, EmptyNode, TooFewSamples, TreeParseError

TREE_SCHEMA = "tree/1"


@dataclass(frozen=True)
class TreeConfig:
    """Induction limits. The defaults are the reference configuration."""

    max_depth: int = 3
    min_samples_split: int = 2

    def __post_init__(self):
        if self.max_depth < 0:
            raise ValueError(f"max_depth must be >= 0, got {self.max_depth}")
        if self.min_samples_split < 2:
            raise ValueError(
                f"min_samples_split must be >= 2, got {self.min_samples_split}"
            )


@dataclass(frozen=True)
class SplitCandidate:
    feature_index: int
    threshold: float
    information_gain_bits: float


@dataclass(frozen=True)
class Leaf:
    label: BinaryLabel
    n_samples: int
    class_counts: tuple[int, int]
    entropy_bits: float


@dataclass(frozen=True)
class Internal:
    feature_index: int
    threshold: float
    left: "TreeNode"
    right: "TreeNode"
    n_samples: int
    class_counts: tuple[int, int]
    entropy_bits: float


TreeNode = Union[Leaf, Internal]


@dataclass(frozen=True)
class DecisionTree:
    root: TreeNode
    config: TreeConfig

    def predict(self, features: FeatureVector) -> BinaryLabel:
        return predict(self, features)


class TreeFormat(str, Enum):
    DOT = "dot"
    JSON = "json"
    ASCII = "ascii"


def entropy(class_counts: tuple[int, int]) -> float:
    """Shannon entropy in bits of a (n_benign, n_malignant) node."""
    n_benign, n_malignant = class_counts
    if n_benign < 0 or n_malignant < 0:
        raise ValueError(f"class counts must be non-negative, got {class_counts}")
    total = n_benign + n_malignant
    if total == 0:
        raise EmptyNode("entropy of an empty node is undefined")
    # fixed accumulation order (benign term first); split comparisons
    # rely on this expression being reproducible bit-for-bit
    h = 0.0
    for count in (n_benign, n_malignant):
        if count:
            p = count / total
            h -= p * math.log2(p)
    return h


def majority_label(class_counts: tuple[int, int]) -> BinaryLabel:
    """Majority class of a node; exact ties go to Malignant."""
    n_benign, n_malignant = class_counts
    return BinaryLabel.MALIGNANT if n_malignant >= n_benign else BinaryLabel.BENIGN


def _count_labels(records: Sequence[LabeledRecord]) -> tuple[int, int]:
    n_malignant = sum(1 for r in records if r.label is BinaryLabel.MALIGNANT)
    return len(records) - n_malignant, n_malignant


def best_split(
    records: Sequence[LabeledRecord],
    allowed_features: Optional[Sequence[int]] = None,
) -> Optional[SplitCandidate]:
    """Exhaustively score every feature/threshold pair; keep the best.

    Returns None when no candidate has strictly positive gain (for
    example when all feature vectors are identical). Ties break to the
    lowest feature index, then the lowest threshold, which the
    ascending scan order enforces for free.
    """
    n = len(records)
    if n < 2:
        raise TooFewSamples(f"need at least 2 records to split, got {n}")
    features = range(len(FEATURE_NAMES)) if allowed_features is None else sorted(allowed_features)
    parent_counts = _count_labels(records)
    h_parent = entropy(parent_counts)
    total_benign, total_malignant = parent_counts

    best: Optional[SplitCandidate] = None
    for feature_index in features:
        pairs = sorted((r.features[feature_index], r.label) for r in records)
        left_benign = left_malignant = 0
        for i in range(n - 1):
            value, label = pairs[i]
            if label is BinaryLabel.BENIGN:
                left_benign += 1
            else:
                left_malignant += 1
            next_value = pairs[i + 1][0]
            if next_value == value:
                continue
            threshold = (value + next_value) / 2
            if threshold == next_value:
                # midpoint of adjacent floats can round up; pull it back
                # so the <= comparison reproduces the counted partition
                threshold = value
            n_left = i + 1
            n_right = n - n_left
            h_left = entropy((left_benign, left_malignant))
            h_right = entropy((total_benign - left_benign, total_malignant - left_malignant))
            gain = h_parent - (n_left * h_left + n_right * h_right) / n
            if best is None or gain > best.information_gain_bits:
                best = SplitCandidate(feature_index, threshold, gain)
    if best is None or best.information_gain_bits <= 0.0:
        return None
    return best


def _grow(records: tuple[LabeledRecord, ...], depth: int, config: TreeConfig) -> TreeNode:
    counts = _count_labels(records)
    h = entropy(counts)
    n = len(records)

    def leaf() -> Leaf:
        return Leaf(
            label=majority_label(counts), n_samples=n, class_counts=counts, entropy_bits=h
        )

    if 0 in counts or depth >= config.max_depth or n < config.min_samples_split:
        return leaf()
    split = best_split(records)
    if split is None:
        return leaf()
    left_records = tuple(
        r for r in records if r.features[split.feature_index] <= split.threshold
    )
    right_records = tuple(
        r for r in records if r.features[split.feature_index] > split.threshold
    )
    return Internal(
        feature_index=split.feature_index,
        threshold=split.threshold,
        left=_grow(left_records, depth + 1, config),
        right=_grow(right_records, depth + 1, config),
        n_samples=n,
        class_counts=counts,
        entropy_bits=h,
    )


def fit_tree(
    records: Sequence[LabeledRecord], config: Optional[TreeConfig] = None
) -> DecisionTree:
    """Greedy recursive partitioning of labeled records."""
    recs = tuple(records)
    if not recs:
        raise EmptyDataset("cannot fit a tree on zero records")
    cfg = config if config is not None else TreeConfig()
    return DecisionTree(root=_grow(recs, 0, cfg), config=cfg)


def predict(tree: DecisionTree, features: FeatureVector) -> BinaryLabel:
    """Descend via feature <= threshold comparisons; boundary goes left."""
    node = tree.root
    while isinstance(node, Internal):
        node = node.left if features[node.feature_index] <= node.threshold else node.right
    return node.label


def export_tree(tree: DecisionTree, format: TreeFormat = TreeFormat.JSON) -> str:
    """Serialize a tree; all formats are LF-terminated text.

    JSON is the lossless interchange encoding (schema "tree/1"); DOT is
    a Graphviz digraph with one box per node; ASCII is an indented
    branch listing. Node order is pre-order, left child first.
    """
    fmt = TreeFormat(format)
    if fmt is TreeFormat.JSON:
        return _export_json(tree)
    if fmt is TreeFormat.DOT:
        return _export_dot(tree)
    return _export_ascii(tree)


def _node_to_obj(node: TreeNode) -> dict:
    common = {
        "n_samples": node.n_samples,
        "class_counts": list(node.class_counts),
        "entropy_bits": node.entropy_bits,
    }
    if isinstance(node, Leaf):
        return {"kind": "leaf", "label": node.label.display, **common}
    return {
        "kind": "internal",
        "feature_index": node.feature_index,
        "feature": FEATURE_NAMES[node.feature_index],
        "threshold": node.threshold,
        **common,
        "left": _node_to_obj(node.left),
        "right": _node_to_obj(node.right),
    }


def _export_json(tree: DecisionTree) -> str:
    doc = {
        "schema": TREE_SCHEMA,
        "config": {
            "max_depth": tree.config.max_depth,
            "min_samples_split": tree.config.min_samples_split,
        },
        "root": _node_to_obj(tree.root),
    }
    return json.dumps(doc, indent=2) + "\n"


def _export_dot(tree: DecisionTree) -> str:
    lines = [
        "digraph DecisionTree {",
        '    node [shape=box, fontname="monospace"];',
    ]
    edges: list[str] = []
    counter = [0]

    def emit(node: TreeNode) -> int:
        node_id = counter[0]
        counter[0] += 1
        label_lines = []
        if isinstance(node, Internal):
            label_lines.append(f"{FEATURE_NAMES[node.feature_index]} <= {node.threshold!r}")
        label_lines.extend(
            [
                f"entropy = {node.entropy_bits:.3f}",
                f"samples = {node.n_samples}",
                f"value = [{node.class_counts[0]}, {node.class_counts[1]}]",
                f"class = {majority_label(node.class_counts).display}",
            ]
        )
        text = "\\n".join(label_lines)
        lines.append(f'    {node_id} [label="{text}"];')
        if isinstance(node, Internal):
            left_id = emit(node.left)
            edges.append(f'    {node_id} -> {left_id} [label="True"];')
            right_id = emit(node.right)
            edges.append(f'    {node_id} -> {right_id} [label="False"];')
        return node_id

    emit(tree.root)
    lines.extend(edges)
    lines.append("}")
    return "\n".join(lines) + "\n"


def _export_ascii(tree: DecisionTree) -> str:
    lines: list[str] = []

    def emit(node: TreeNode, depth: int):
        pad = "    " * depth
        benign, malignant = node.class_counts
        if isinstance(node, Leaf):
            lines.append(
                f"{pad}class {node.label.display}  "
                f"(samples={node.n_samples}, value=[{benign}, {malignant}])"
            )
            return
        lines.append(
            f"{pad}{FEATURE_NAMES[node.feature_index]} <= {node.threshold!r}  "
            f"(samples={node.n_samples}, value=[{benign}, {malignant}], "
            f"entropy={node.entropy_bits:.3f})"
        )
        emit(node.left, depth + 1)
        emit(node.right, depth + 1)

    emit(tree.root, 0)
    return "\n".join(lines) + "\n"


_LABELS_BY_NAME = {"Benign": BinaryLabel.BENIGN, "Malignant": BinaryLabel.MALIGNANT}


def _require(condition: bool, message: str):
    if not condition:
        raise TreeParseError(message)


def _node_from_obj(obj) -> TreeNode:
    _require(isinstance(obj, dict), f"node must be an object, got {type(obj).__name__}")
    kind = obj.get("kind")
    _require(kind in ("leaf", "internal"), f"unknown node kind {kind!r}")
    n_samples = obj.get("n_samples")
    _require(
        isinstance(n_samples, int) and n_samples >= 1,
        f"n_samples must be a positive integer, got {n_samples!r}",
    )
    raw_counts = obj.get("class_counts")
    _require(
        isinstance(raw_counts, list)
        and len(raw_counts) == 2
        and all(isinstance(c, int) and c >= 0 for c in raw_counts),
        f"class_counts must be two non-negative integers, got {raw_counts!r}",
    )
    counts = (raw_counts[0], raw_counts[1])
    _require(
        sum(counts) == n_samples,
        f"class_counts {counts} do not sum to n_samples {n_samples}",
    )
    entropy_bits = obj.get("entropy_bits")
    _require(
        isinstance(entropy_bits, (int, float)) and not isinstance(entropy_bits, bool),
        f"entropy_bits must be a number, got {entropy_bits!r}",
    )
    if kind == "leaf":
        label = obj.get("label")
        _require(label in _LABELS_BY_NAME, f"unknown leaf label {label!r}")
        return Leaf(
            label=_LABELS_BY_NAME[label],
            n_samples=n_samples,
            class_counts=counts,
            entropy_bits=float(entropy_bits),
        )
    feature_index = obj.get("feature_index")
    _require(
        isinstance(feature_index, int) and 0 <= feature_index < len(FEATURE_NAMES),
        f"feature_index must be in 0..{len(FEATURE_NAMES) - 1}, got {feature_index!r}",
    )
    feature_name = obj.get("feature", FEATURE_NAMES[feature_index])
    _require(
        feature_name == FEATURE_NAMES[feature_index],
        f"feature name {feature_name!r} contradicts index {feature_index}",
    )
    threshold = obj.get("threshold")
    _require(
        isinstance(threshold, (int, float)) and not isinstance(threshold, bool),
        f"threshold must be a number, got {threshold!r}",
    )
    _require("left" in obj and "right" in obj, "internal node missing a child")
    return Internal(
        feature_index=feature_index,
        threshold=float(threshold),
        left=_node_from_obj(obj["left"]),
        right=_node_from_obj(obj["right"]),
        n_samples=n_samples,
        class_counts=counts,
        entropy_bits=float(entropy_bits),
    )


def parse_tree(text: str) -> DecisionTree:
    """Lossless inverse of the JSON export; rejects malformed documents."""
    try:
        doc = json.loads(text)
    except ValueError as exc:
        raise TreeParseError(f"not valid JSON: {exc}") from exc
    _require(isinstance(doc, dict), "tree document must be a JSON object")
    _require(
        doc.get("schema") == TREE_SCHEMA,
        f"unsupported schema {doc.get('schema')!r}, expected {TREE_SCHEMA!r}",
    )
    raw_config = doc.get("config", {})
    _require(isinstance(raw_config, dict), "config must be an object")
    try:
        config = TreeConfig(
            max_depth=raw_config.get("max_depth", 3),
            min_samples_split=raw_config.get("min_samples_split", 2),
        )
    except (TypeError, ValueError) as exc:
        raise TreeParseError(f"bad config: {exc}") from exc
    _require("root" in doc, "tree document has no root node")
    return DecisionTree(root=_node_from_obj(doc["root"]), config=config)
