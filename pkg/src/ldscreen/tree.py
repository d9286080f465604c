"""Gain-ratio decision-tree induction with pessimistic pruning.

Trees are grown top-down: at every node the split with the highest gain
ratio (information gain over split information) is taken, nominal
attributes branching multi-way and numeric attributes on a binary
threshold.  Instances whose tested value is missing descend every branch
with fractionally scaled weight, both while growing and while classifying.
Pruning replaces subtrees by leaves whenever an upper-confidence-bound
error estimate favors the collapse.

A built model is immutable; concurrent classification is safe.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

from scipy.stats import beta

from .dataset import AttributeSpec, Dataset, Instance

MODEL_FORMAT = "ldscreen-tree"
MODEL_VERSION = 1

#: Gains at or below this are treated as zero when picking a split.
_GAIN_EPS = 1e-12


@dataclass(frozen=True)
class TreeConfig:
    """Induction parameters; defaults follow common C4.5 practice."""

    min_leaf_weight: float = 2.0
    confidence_factor: float = 0.25
    pruning: bool = True


@dataclass(frozen=True)
class SplitCandidate:
    """Quality of splitting on one attribute (at one threshold if numeric).

    ``gain_ratio`` is ``info_gain / intrinsic_value``; a candidate with
    zero intrinsic value (all weight on one branch) is flagged invalid
    instead of dividing by zero.
    """

    attribute_index: int
    threshold: float | None
    info_gain: float
    intrinsic_value: float
    gain_ratio: float
    valid: bool


@dataclass(frozen=True)
class Leaf:
    """Terminal node.

    ``class_counts`` holds the (possibly fractional) training weight per
    class, aligned to the class declaration order; it always sums > 0.  A
    branch that received no training weight borrows its parent's counts
    for prediction, with ``weight`` recording the true arriving weight 0.
    """

    class_counts: tuple
    weight: float

    @property
    def predicted_index(self):
        best = 0
        for i, c in enumerate(self.class_counts):
            if c > self.class_counts[best]:
                best = i
        return best


@dataclass(frozen=True)
class Decision:
    """Internal test node.

    Nominal tests carry one child per declared value (threshold None);
    numeric tests carry two children, <= threshold and > threshold.
    ``branch_weights`` is the training weight that descended each branch
    and drives fractional routing of missing values.  ``class_counts`` is
    retained for pruning and for patching empty branches.
    """

    attribute_index: int
    threshold: float | None
    children: tuple
    branch_weights: tuple
    class_counts: tuple


@dataclass(frozen=True)
class DecisionTreeModel:
    schema: tuple
    class_index: int
    root: object
    config: TreeConfig

    @property
    def class_values(self):
        return self.schema[self.class_index].values

    def node_count(self):
        return _count_nodes(self.root)

    def leaf_count(self):
        return _count_leaves(self.root)


def _count_nodes(node):
    if isinstance(node, Leaf):
        return 1
    return 1 + sum(_count_nodes(c) for c in node.children)


def _count_leaves(node):
    if isinstance(node, Leaf):
        return 1
    return sum(_count_leaves(c) for c in node.children)


# ---------------------------------------------------------------------------
# Split quality
# ---------------------------------------------------------------------------


def entropy(class_weights):
    """Shannon entropy, in bits, of a weight distribution.

    Parameters
    ----------
    class_weights : sequence of float
        Nonnegative weights per class; must not sum to zero.

    Returns
    -------
    float
        -sum(p * log2 p) with the 0*log0 = 0 convention; lies in
        [0, log2(number of classes)].
    """
    total = 0.0
    for w in class_weights:
        if w < 0:
            raise ValueError(f"negative class weight {w}")
        total += w
    if total <= 0:
        raise ValueError("entropy of an all-zero weight vector is undefined")
    h = 0.0
    for w in class_weights:
        if w > 0:
            p = w / total
            h -= p * math.log2(p)
    return h


def evaluate_split(dataset, attribute_index, threshold=None):
    """Score a candidate split of ``dataset`` on one attribute.

    Information gain is the drop in class entropy from the parent to the
    weighted children; intrinsic value is the entropy of the branch weight
    shares themselves; the gain ratio divides the two.  Instances whose
    tested value is missing are excluded from both quantities and the gain
    is discounted by the known-weight fraction, the C4.5 convention.

    A constant attribute yields a single branch, hence intrinsic value 0:
    the candidate comes back flagged invalid rather than raising.
    """
    if attribute_index == dataset.class_index:
        raise ValueError("cannot split on the class attribute")
    spec = dataset.schema[attribute_index]
    if spec.is_categorical:
        if threshold is not None:
            raise ValueError(f"threshold given for categorical attribute {spec.name}")
        n_branches = len(spec.values)
    else:
        if threshold is None:
            raise ValueError(f"numeric attribute {spec.name} needs a threshold")
        n_branches = 2
    rows = [(inst.values, inst.weight) for inst in dataset.instances]
    return _score_split(
        rows,
        dataset.schema,
        dataset.class_index,
        attribute_index,
        threshold,
        n_branches,
    )


def _branch_of(spec, threshold, value):
    if spec.is_categorical:
        return spec.values.index(value)
    return 0 if value <= threshold else 1


def _score_split(rows, schema, class_index, attribute_index, threshold, n_branches):
    spec = schema[attribute_index]
    class_values = schema[class_index].values
    n_classes = len(class_values)
    class_pos = {v: i for i, v in enumerate(class_values)}

    parent = [0.0] * n_classes
    branch_class = [[0.0] * n_classes for _ in range(n_branches)]
    known_w = 0.0
    total_w = 0.0
    for values, weight in rows:
        total_w += weight
        v = values[attribute_index]
        if v is None:
            continue
        c = class_pos[values[class_index]]
        b = _branch_of(spec, threshold, v)
        known_w += weight
        parent[c] += weight
        branch_class[b][c] += weight

    invalid = SplitCandidate(attribute_index, threshold, 0.0, 0.0, 0.0, False)
    if known_w <= 0:
        return invalid
    branch_w = [sum(bc) for bc in branch_class]
    if sum(1 for w in branch_w if w > 0) < 2:
        return invalid  # single branch: intrinsic value 0

    h_parent = entropy(parent)
    h_children = 0.0
    iv = 0.0
    for bc, w in zip(branch_class, branch_w):
        if w <= 0:
            continue
        share = w / known_w
        h_children += share * entropy(bc)
        iv -= share * math.log2(share)
    gain = (known_w / total_w) * (h_parent - h_children)
    return SplitCandidate(attribute_index, threshold, gain, iv, gain / iv, True)


# ---------------------------------------------------------------------------
# Growing
# ---------------------------------------------------------------------------


def build_tree(dataset, config=None):
    """Induce a decision tree for ``dataset``.

    Growth recurses greedily on the valid candidate with maximum gain
    ratio and stops on pure nodes, on nodes lighter than twice the minimum
    leaf weight, or when no candidate offers positive gain.  Each nominal
    attribute is tested at most once per path; numeric attributes may
    recur with new midpoint thresholds.  With ``config.pruning`` the grown
    tree is pessimistically pruned before being returned.
    """
    config = config or TreeConfig()
    if len(dataset) == 0:
        raise ValueError("cannot build a tree from an empty dataset")
    if not dataset.feature_indices:
        raise ValueError("dataset has no non-class attributes")
    for idx, inst in enumerate(dataset.instances):
        if inst.values[dataset.class_index] is None:
            raise ValueError(f"training instance {idx} has a missing class value")
    rows = [(inst.values, inst.weight) for inst in dataset.instances]
    root = _grow(rows, dataset.schema, dataset.class_index, frozenset(), config)
    model = DecisionTreeModel(dataset.schema, dataset.class_index, root, config)
    if config.pruning:
        model = prune_tree(model)
    return model


def _class_tally(rows, schema, class_index):
    class_values = schema[class_index].values
    pos = {v: i for i, v in enumerate(class_values)}
    counts = [0.0] * len(class_values)
    for values, weight in rows:
        counts[pos[values[class_index]]] += weight
    return counts


def _grow(rows, schema, class_index, used_nominal, config):
    counts = _class_tally(rows, schema, class_index)
    weight = sum(counts)
    nonzero = sum(1 for c in counts if c > 0)
    if nonzero <= 1 or weight < 2 * config.min_leaf_weight:
        return Leaf(tuple(counts), weight)

    best = _best_candidate(rows, schema, class_index, used_nominal)
    if best is None:
        return Leaf(tuple(counts), weight)

    spec = schema[best.attribute_index]
    n_branches = len(spec.values) if spec.is_categorical else 2

    known = [[] for _ in range(n_branches)]
    missing = []
    for values, w in rows:
        v = values[best.attribute_index]
        if v is None:
            missing.append((values, w))
        else:
            known[_branch_of(spec, best.threshold, v)].append((values, w))

    known_w = [sum(w for _, w in branch) for branch in known]
    known_total = sum(known_w)
    branch_rows = [list(branch) for branch in known]
    for values, w in missing:
        for b in range(n_branches):
            if known_w[b] > 0:
                branch_rows[b].append((values, w * known_w[b] / known_total))

    child_used = (
        used_nominal | {best.attribute_index} if spec.is_categorical else used_nominal
    )
    children = []
    branch_weights = []
    for b in range(n_branches):
        arriving = sum(w for _, w in branch_rows[b])
        branch_weights.append(arriving)
        if arriving <= 0:
            # empty branch: majority-class leaf borrowing the parent counts
            children.append(Leaf(tuple(counts), 0.0))
        else:
            children.append(
                _grow(branch_rows[b], schema, class_index, child_used, config)
            )
    return Decision(
        best.attribute_index,
        best.threshold,
        tuple(children),
        tuple(branch_weights),
        tuple(counts),
    )


def _best_candidate(rows, schema, class_index, used_nominal):
    best = None
    for i, spec in enumerate(schema):
        if i == class_index:
            continue
        if spec.is_categorical:
            if i in used_nominal:
                continue
            candidates = [
                _score_split(rows, schema, class_index, i, None, len(spec.values))
            ]
        else:
            candidates = [
                _score_split(rows, schema, class_index, i, t, 2)
                for t in _midpoint_thresholds(rows, i)
            ]
        for cand in candidates:
            if not cand.valid or cand.info_gain <= _GAIN_EPS:
                continue
            if best is None or _candidate_beats(cand, best):
                best = cand
    return best


def _candidate_beats(cand, best):
    # ties resolve to the lower attribute index, then the lower threshold
    if cand.gain_ratio != best.gain_ratio:
        return cand.gain_ratio > best.gain_ratio
    if cand.attribute_index != best.attribute_index:
        return cand.attribute_index < best.attribute_index
    if cand.threshold is not None and best.threshold is not None:
        return cand.threshold < best.threshold
    return False


def _midpoint_thresholds(rows, attribute_index):
    values = sorted({v[attribute_index] for v, _ in rows if v[attribute_index] is not None})
    return [(a + b) / 2 for a, b in zip(values, values[1:])]


# ---------------------------------------------------------------------------
# Pruning
# ---------------------------------------------------------------------------


def ucb_error_rate(errors, total, confidence_factor):
    """Upper confidence bound on a binomial error rate.

    The exact bound: the largest rate p with P(X <= errors | total, p)
    >= confidence_factor, i.e. the (1 - CF) quantile of
    Beta(errors + 1, total - errors).  For zero errors this reduces to the
    closed form 1 - CF**(1/total).  Fractional counts from missing-value
    routing interpolate smoothly.
    """
    if total <= 0:
        return 0.0
    if errors >= total:
        return 1.0
    return float(beta.ppf(1.0 - confidence_factor, errors + 1.0, total - errors))


def _leaf_ucb_errors(counts, weight, cf):
    if weight <= 0:
        return 0.0
    errors = weight - max(counts)
    return weight * ucb_error_rate(errors, weight, cf)


def _subtree_ucb_errors(node, cf):
    if isinstance(node, Leaf):
        return _leaf_ucb_errors(node.class_counts, node.weight, cf)
    return sum(_subtree_ucb_errors(c, cf) for c in node.children)


def prune_tree(model):
    """Pessimistic subtree replacement.

    Bottom-up, a decision node collapses to a leaf whenever the UCB error
    estimate of that leaf is no worse than the summed estimates of its
    (already pruned) children.  Node sets only shrink: every path of the
    pruned tree is a prefix of an original path.  Idempotent.
    """
    cf = model.config.confidence_factor
    return replace(model, root=_prune(model.root, cf))


def _prune(node, cf):
    if isinstance(node, Leaf):
        return node
    children = tuple(_prune(c, cf) for c in node.children)
    node = replace(node, children=children)
    weight = sum(node.class_counts)
    leaf_est = _leaf_ucb_errors(node.class_counts, weight, cf)
    if leaf_est <= _subtree_ucb_errors(node, cf):
        return Leaf(node.class_counts, weight)
    return node


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


def classify(model, instance):
    """Route an instance down the tree.

    Returns
    -------
    (str, dict)
        The predicted class label and the full class distribution, which
        sums to 1.  A missing tested value descends every branch, the
        resulting leaf distributions merged in proportion to the training
        branch weights.  Ties in the distribution resolve to the earlier
        declared class.
    """
    values = instance.values if isinstance(instance, Instance) else tuple(instance)
    if len(values) != len(model.schema):
        raise ValueError(
            f"instance has {len(values)} values, schema expects {len(model.schema)}"
        )
    for spec, v in zip(model.schema, values):
        if v is None:
            continue
        if spec.is_categorical and v not in spec.values:
            raise ValueError(f"value {v!r} not in schema for attribute {spec.name}")
    class_values = model.class_values
    merged = [0.0] * len(class_values)
    _accumulate(model.root, model.schema, values, 1.0, merged)
    total = sum(merged)
    dist = [c / total for c in merged]
    best = max(range(len(dist)), key=lambda i: (dist[i], -i))
    return class_values[best], dict(zip(class_values, dist))


def _accumulate(node, schema, values, weight, merged):
    if isinstance(node, Leaf):
        total = sum(node.class_counts)
        for i, c in enumerate(node.class_counts):
            merged[i] += weight * c / total
        return
    v = values[node.attribute_index]
    if v is None:
        total_bw = sum(node.branch_weights)
        for child, bw in zip(node.children, node.branch_weights):
            if bw > 0:
                _accumulate(child, schema, values, weight * bw / total_bw, merged)
        return
    spec = schema[node.attribute_index]
    b = _branch_of(spec, node.threshold, v)
    _accumulate(node.children[b], schema, values, weight, merged)


def training_accuracy(model, dataset):
    """Fraction of instances the model labels with their recorded class."""
    correct = 0
    for inst in dataset.instances:
        label, _ = classify(model, inst)
        if label == inst.values[dataset.class_index]:
            correct += 1
    return correct / len(dataset)


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------


def model_to_json(model):
    """Serialize a model to a JSON document (versioned)."""
    doc = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "schema": _schema_to_json(model.schema),
        "class_index": model.class_index,
        "config": {
            "min_leaf_weight": model.config.min_leaf_weight,
            "confidence_factor": model.config.confidence_factor,
            "pruning": model.config.pruning,
        },
        "root": _node_to_json(model.root, model.schema),
    }
    return json.dumps(doc, indent=2)


def _schema_to_json(schema):
    return [
        {"name": a.name, "kind": a.kind, "values": list(a.values)} for a in schema
    ]


def _schema_from_json(items):
    return tuple(AttributeSpec(a["name"], a["kind"], tuple(a["values"])) for a in items)


def _node_to_json(node, schema):
    if isinstance(node, Leaf):
        return {
            "type": "leaf",
            "class_counts": list(node.class_counts),
            "weight": node.weight,
        }
    return {
        "type": "decision",
        "attribute": schema[node.attribute_index].name,
        "threshold": node.threshold,
        "branch_weights": list(node.branch_weights),
        "class_counts": list(node.class_counts),
        "children": [_node_to_json(c, schema) for c in node.children],
    }


def _node_from_json(doc, schema, name_to_index):
    if doc["type"] == "leaf":
        return Leaf(tuple(doc["class_counts"]), doc["weight"])
    return Decision(
        name_to_index[doc["attribute"]],
        doc["threshold"],
        tuple(_node_from_json(c, schema, name_to_index) for c in doc["children"]),
        tuple(doc["branch_weights"]),
        tuple(doc["class_counts"]),
    )


def model_from_json(text):
    doc = json.loads(text)
    if doc.get("format") != MODEL_FORMAT:
        raise ValueError(f"not a {MODEL_FORMAT} document")
    if doc.get("version") != MODEL_VERSION:
        raise ValueError(f"unsupported model version {doc.get('version')}")
    schema = _schema_from_json(doc["schema"])
    name_to_index = {a.name: i for i, a in enumerate(schema)}
    config = TreeConfig(
        min_leaf_weight=doc["config"]["min_leaf_weight"],
        confidence_factor=doc["config"]["confidence_factor"],
        pruning=doc["config"]["pruning"],
    )
    root = _node_from_json(doc["root"], schema, name_to_index)
    return DecisionTreeModel(schema, doc["class_index"], root, config)
