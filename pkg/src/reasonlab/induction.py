"""Decision-tree induction over symbolic feature vectors.

Trees split on the unused feature with maximum Gini gain, stop at pure
nodes or when no split clears ``min_gain``, and expose the root-to-leaf
path taken for a query as the explanation of the prediction. Pruning is
reduced-error against a holdout set.
"""
from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

Value = Union[str, int]


@dataclass(frozen=True)
class FeatureSchema:
    """Ordered features, each with a finite value set."""

    features: tuple[tuple[str, tuple[Value, ...]], ...]

    def __post_init__(self):
        names = [n for n, _ in self.features]
        if len(set(names)) != len(names):
            raise ValueError("duplicate feature names in schema")
        for name, values in self.features:
            if not values:
                raise ValueError(f"empty value set for feature {name}")

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.features]

    def values(self, name: str) -> tuple[Value, ...]:
        for n, vs in self.features:
            if n == name:
                return vs
        raise KeyError(name)

    def validate(self, features: dict[str, Value]) -> None:
        for name, values in self.features:
            if name not in features:
                raise ValueError(f"feature {name} missing")
            if features[name] not in values:
                raise ValueError(
                    f"value {features[name]!r} not in schema for feature {name}")

    def to_text(self) -> str:
        lines = []
        for name, values in self.features:
            lines.append(f"{name}: {', '.join(str(v) for v in values)}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "FeatureSchema":
        features = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            name, _, rest = line.partition(":")
            values = tuple(_parse_value(v.strip()) for v in rest.split(","))
            features.append((name.strip(), values))
        return FeatureSchema(tuple(features))


def _parse_value(text: str) -> Value:
    return int(text) if text.lstrip("-").isdigit() else text


@dataclass(frozen=True)
class LabeledExample:
    features: dict[str, Value]
    label: str

    def __hash__(self):
        return hash((tuple(sorted(self.features.items())), self.label))


@dataclass
class Leaf:
    label: str
    counts: dict[str, int]
    support: int

    @property
    def purity(self) -> float:
        return self.counts[self.label] / self.support if self.support else 0.0


@dataclass
class Split:
    feature: str
    children: dict[Value, Union["Split", Leaf]]
    counts: dict[str, int]
    support: int


Node = Union[Split, Leaf]


@dataclass
class DecisionTree:
    root: Node
    schema: FeatureSchema


@dataclass(frozen=True)
class PathExplanation:
    tests: tuple[tuple[str, Value], ...]
    label: str
    purity: float
    support: int

    def __str__(self) -> str:
        if not self.tests:
            return f"{self.label} (no tests, purity {self.purity:.2f})"
        conds = ", ".join(f"{f} = {v}" for f, v in self.tests)
        return f"{conds} -> {self.label} (purity {self.purity:.2f})"


def gini(distribution: Sequence[float]) -> float:
    """Gini impurity 1 - sum(p_i^2) of a class-proportion vector."""
    if len(distribution) == 0:
        raise ValueError("empty distribution")
    if any(p < 0 for p in distribution):
        raise ValueError("negative proportion")
    total = sum(distribution)
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"proportions sum to {total}, expected 1")
    return 1.0 - sum(p * p for p in distribution)


def _node_gini(counts: Counter) -> float:
    n = sum(counts.values())
    return 1.0 - sum((c / n) ** 2 for c in counts.values())


def _majority(counts: Counter) -> str:
    return min(counts.items(), key=lambda kv: (-kv[1], str(kv[0])))[0]


def train_tree(examples: Sequence[LabeledExample], schema: FeatureSchema,
               min_gain: float = 0.01, min_leaf_support: int = 2) -> DecisionTree:
    """Recursive Gini-gain splitting; ties go to the lowest schema index.

    A split is only considered when every child branch (one per schema
    value of the feature) would receive at least ``min_leaf_support``
    examples, so leaves always have support and branches cover the full
    value set.
    """
    if not examples:
        raise ValueError("no training examples")
    for ex in examples:
        schema.validate(ex.features)

    def build(rows: list[LabeledExample], used: frozenset[str]) -> Node:
        counts = Counter(ex.label for ex in rows)
        label = _majority(counts)
        if len(counts) == 1:
            return Leaf(label, dict(counts), len(rows))
        parent_gini = _node_gini(counts)
        best_gain, best_feature, best_parts = -1.0, None, None
        for name, values in schema.features:
            if name in used:
                continue
            parts: dict[Value, list[LabeledExample]] = {v: [] for v in values}
            for ex in rows:
                parts[ex.features[name]].append(ex)
            if any(len(p) < min_leaf_support for p in parts.values()):
                continue
            child_gini = sum(
                len(p) / len(rows) * _node_gini(Counter(e.label for e in p))
                for p in parts.values())
            gain = parent_gini - child_gini
            if gain > best_gain + 1e-12:
                best_gain, best_feature, best_parts = gain, name, parts
        if best_feature is None or best_gain < min_gain:
            return Leaf(label, dict(counts), len(rows))
        children = {v: build(p, used | {best_feature})
                    for v, p in best_parts.items()}
        return Split(best_feature, children, dict(counts), len(rows))

    return DecisionTree(build(list(examples), frozenset()), schema)


def predict(tree: DecisionTree, features: dict[str, Value]) -> tuple[str, PathExplanation]:
    tree.schema.validate(features)
    node = tree.root
    tests: list[tuple[str, Value]] = []
    while isinstance(node, Split):
        value = features[node.feature]
        tests.append((node.feature, value))
        node = node.children[value]
    return node.label, PathExplanation(tuple(tests), node.label,
                                       node.purity, node.support)


def accuracy(tree: DecisionTree, examples: Iterable[LabeledExample]) -> float:
    rows = list(examples)
    if not rows:
        return 1.0
    hits = sum(1 for ex in rows if predict(tree, ex.features)[0] == ex.label)
    return hits / len(rows)


def prune(tree: DecisionTree, holdout: Sequence[LabeledExample]) -> DecisionTree:
    """Reduced-error pruning: repeatedly collapse an internal node to its
    majority leaf whenever holdout accuracy does not decrease."""
    if not holdout:
        return tree
    for ex in holdout:
        tree.schema.validate(ex.features)
    root = _copy(tree.root)
    pruned = DecisionTree(root, tree.schema)
    base = accuracy(pruned, holdout)
    changed = True
    while changed:
        changed = False
        for path in _internal_paths(pruned.root):
            node = _node_at(pruned.root, path)
            leaf = Leaf(_majority(Counter(node.counts)), dict(node.counts),
                        node.support)
            candidate = _replace_at(pruned.root, path, leaf)
            cand_tree = DecisionTree(candidate, tree.schema)
            acc = accuracy(cand_tree, holdout)
            if acc >= base - 1e-12:
                pruned = cand_tree
                base = max(base, acc)
                changed = True
                break
    return pruned


def _copy(node: Node) -> Node:
    if isinstance(node, Leaf):
        return Leaf(node.label, dict(node.counts), node.support)
    return Split(node.feature, {v: _copy(c) for v, c in node.children.items()},
                 dict(node.counts), node.support)


def _internal_paths(node: Node, prefix: tuple = ()) -> list[tuple]:
    """Paths to internal nodes, deepest first (post-order)."""
    if isinstance(node, Leaf):
        return []
    paths = []
    for v, child in node.children.items():
        paths.extend(_internal_paths(child, prefix + (v,)))
    paths.append(prefix)
    return paths


def _node_at(node: Node, path: tuple) -> Node:
    for v in path:
        node = node.children[v]
    return node


def _replace_at(node: Node, path: tuple, replacement: Node) -> Node:
    if not path:
        return replacement
    children = dict(node.children)
    children[path[0]] = _replace_at(children[path[0]], path[1:], replacement)
    return Split(node.feature, children, dict(node.counts), node.support)


# -- serialization ------------------------------------------------------------

def tree_to_text(tree: DecisionTree) -> str:
    lines: list[str] = []

    def emit(node: Node, depth: int) -> None:
        pad = "  " * depth
        if isinstance(node, Leaf):
            counts = ",".join(f"{k}:{v}" for k, v in sorted(node.counts.items()))
            lines.append(f"{pad}leaf {node.label} support={node.support} "
                         f"purity={node.purity:.6f} counts={counts}")
            return
        lines.append(f"{pad}split {node.feature}")
        for value in tree.schema.values(node.feature):
            lines.append(f"{pad}  {value}:")
            emit(node.children[value], depth + 2)

    emit(tree.root, 0)
    return "\n".join(lines) + "\n"


def tree_from_text(text: str, schema: FeatureSchema) -> DecisionTree:
    lines = [l for l in text.splitlines() if l.strip()]
    pos = 0

    def parse_node(depth: int) -> Node:
        nonlocal pos
        line = lines[pos]
        indent = (len(line) - len(line.lstrip())) // 2
        if indent != depth:
            raise ValueError(f"bad indentation at line: {line!r}")
        body = line.strip()
        pos += 1
        if body.startswith("leaf "):
            parts = dict(p.split("=", 1) for p in body.split()[2:])
            counts = {}
            for item in parts["counts"].split(","):
                k, v = item.split(":")
                counts[k] = int(v)
            return Leaf(body.split()[1], counts, int(parts["support"]))
        if not body.startswith("split "):
            raise ValueError(f"expected split/leaf, got: {body!r}")
        feature = body.split()[1]
        children: dict[Value, Node] = {}
        for value in schema.values(feature):
            branch = lines[pos].strip()
            if branch != f"{value}:":
                raise ValueError(f"expected branch {value!r}, got {branch!r}")
            pos += 1
            children[value] = parse_node(depth + 2)
        counts = Counter()
        for child in children.values():
            counts.update(child.counts)
        return Split(feature, children, dict(counts), sum(counts.values()))

    root = parse_node(0)
    return DecisionTree(root, schema)


# -- CSV dataset I/O ----------------------------------------------------------

def examples_to_csv(examples: Sequence[LabeledExample],
                    schema: FeatureSchema) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(schema.names + ["label"])
    for ex in examples:
        writer.writerow([ex.features[n] for n in schema.names] + [ex.label])
    return buf.getvalue()


def examples_from_csv(text: str, schema: FeatureSchema) -> list[LabeledExample]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != schema.names + ["label"]:
        raise ValueError(f"CSV header {header} does not match schema")
    out = []
    for row in reader:
        features = {n: _parse_value(v) for n, v in zip(schema.names, row)}
        ex = LabeledExample(features, row[-1])
        schema.validate(ex.features)
        out.append(ex)
    return out
