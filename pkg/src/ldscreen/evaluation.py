"""Cross-validation driver and confusion-matrix metric suite.

Predictions from all test folds are pooled into one confusion matrix and
scored once, the way a single evaluation run reports: correctly and
incorrectly classified counts with percentages, then per-class TP rate,
FP rate, precision, recall, F-measure, and ROC area.

ROC area is the rank-sum probability that a random instance of the class
outranks a random non-member under the model's score for that class;
ties count one half.  Scores come from the tree's leaf distributions or,
for rule sets, from the matched rule's accuracy.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

from .dataset import Dataset, random_folds, stratified_folds
from .rules import extract_rules, rules_classify, simplify_rules
from .tree import TreeConfig, build_tree, classify

REPORT_FORMAT = "ldscreen-report"
REPORT_VERSION = 1


@dataclass(frozen=True)
class ConfusionMatrix:
    """counts[actual][predicted], both axes in ``class_values`` order."""

    class_values: tuple
    counts: tuple  # tuple of tuples, square

    def __post_init__(self):
        n = len(self.class_values)
        if len(self.counts) != n or any(len(r) != n for r in self.counts):
            raise ValueError("confusion matrix must be square over the classes")
        if any(c < 0 for row in self.counts for c in row):
            raise ValueError("negative count in confusion matrix")

    @property
    def total(self):
        return sum(sum(row) for row in self.counts)

    @property
    def correct(self):
        return sum(self.counts[i][i] for i in range(len(self.class_values)))

    def row_sum(self, i):
        return sum(self.counts[i])

    def column_sum(self, j):
        return sum(row[j] for row in self.counts)


@dataclass(frozen=True)
class ClassMetrics:
    tp_rate: float
    fp_rate: float
    precision: float
    recall: float
    f_measure: float
    roc_area: float | None = None


@dataclass(frozen=True)
class EvaluationReport:
    matrix: ConfusionMatrix
    per_class: tuple  # (class label, ClassMetrics) pairs in class order
    accuracy: float

    @property
    def error_rate(self):
        return 1.0 - self.accuracy

    def metrics_for(self, label):
        for name, m in self.per_class:
            if name == label:
                return m
        raise KeyError(label)


def confusion(actual, predicted, class_values) -> ConfusionMatrix:
    """Tally (actual, predicted) label pairs into a matrix."""
    if len(actual) != len(predicted):
        raise ValueError(
            f"{len(actual)} actual labels vs {len(predicted)} predictions"
        )
    index = {v: i for i, v in enumerate(class_values)}
    counts = [[0] * len(class_values) for _ in class_values]
    for a, p in zip(actual, predicted):
        if a not in index:
            raise ValueError(f"unknown actual label {a!r}")
        if p not in index:
            raise ValueError(f"unknown predicted label {p!r}")
        counts[index[a]][index[p]] += 1
    return ConfusionMatrix(tuple(class_values), tuple(tuple(r) for r in counts))


def per_class_metrics(matrix: ConfusionMatrix) -> EvaluationReport:
    """Score every class one-vs-rest from a confusion matrix.

    Zero-denominator conventions: precision and F are 0 for a class never
    predicted; fp_rate is 0 when no negatives exist.  ROC areas are not
    derivable from a matrix alone and stay unset here; cross_validate
    fills them from pooled scores.
    """
    total = matrix.total
    if total == 0:
        raise ValueError("empty confusion matrix has no defined metrics")
    per_class = []
    for i, label in enumerate(matrix.class_values):
        tp = matrix.counts[i][i]
        fn = matrix.row_sum(i) - tp
        fp = matrix.column_sum(i) - tp
        tn = total - tp - fn - fp
        tp_rate = tp / (tp + fn) if tp + fn > 0 else 0.0
        fp_rate = fp / (fp + tn) if fp + tn > 0 else 0.0
        precision = tp / (tp + fp) if tp + fp > 0 else 0.0
        f = (
            2 * precision * tp_rate / (precision + tp_rate)
            if precision + tp_rate > 0
            else 0.0
        )
        per_class.append(
            (label, ClassMetrics(tp_rate, fp_rate, precision, tp_rate, f))
        )
    return EvaluationReport(matrix, tuple(per_class), matrix.correct / total)


def roc_area(scores, actual, positive_class) -> float:
    """Rank-sum ROC area: P(random positive outranks random negative).

    Tied scores contribute one half, which makes this identical to
    trapezoidal integration of the ROC curve.
    """
    if len(scores) != len(actual):
        raise ValueError("scores and labels differ in length")
    flags = [a == positive_class for a in actual]
    n_pos = sum(flags)
    n_neg = len(flags) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("ROC area needs both classes present")
    order = sorted(range(len(scores)), key=lambda i: scores[i])
    ranks = [0.0] * len(scores)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and scores[order[j + 1]] == scores[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1  # 1-based average rank of the tie group
        for t in range(i, j + 1):
            ranks[order[t]] = avg
        i = j + 1
    rank_sum = sum(r for r, f in zip(ranks, flags) if f)
    return (rank_sum - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg)


# ---------------------------------------------------------------------------
# Learners
# ---------------------------------------------------------------------------
# A learner maps a training Dataset to a predict function; predict maps an
# instance to (label, score per class).  Scores feed the ROC columns.


def tree_learner(config: TreeConfig | None = None):
    def fit(train: Dataset):
        model = build_tree(train, config)

        def predict(instance):
            return classify(model, instance)

        return predict

    return fit


def rules_learner(config: TreeConfig | None = None, simplify=True):
    def fit(train: Dataset):
        ruleset = extract_rules(build_tree(train, config))
        if simplify:
            ruleset = simplify_rules(ruleset, train)
        class_values = train.class_values

        def predict(instance):
            values = instance.values if hasattr(instance, "values") else instance
            label = rules_classify(ruleset, values)
            acc = None
            for rule in ruleset.rules:
                if rule.matches(values) and rule.consequent == label:
                    acc = rule.accuracy if acc is None else max(acc, rule.accuracy)
            if acc is None:
                acc = 0.5  # default-class fallback carries no evidence
            rest = (1.0 - acc) / (len(class_values) - 1)
            return label, {
                v: (acc if v == label else rest) for v in class_values
            }

        return predict

    return fit


def majority_learner():
    def fit(train: Dataset):
        counts = [0.0] * len(train.class_values)
        for inst in train.instances:
            counts[train.class_values.index(inst.values[train.class_index])] += (
                inst.weight
            )
        total = sum(counts)
        dist = {v: c / total for v, c in zip(train.class_values, counts)}
        best = max(train.class_values, key=lambda v: (dist[v], -train.class_values.index(v)))

        def predict(instance):
            return best, dict(dist)

        return predict

    return fit


def cross_validate(dataset, k, seed, learner, stratify=True) -> EvaluationReport:
    """k-fold cross-validation with pooled scoring.

    Each instance is predicted exactly once, by the model trained on the
    folds it does not belong to; the pooled predictions produce a single
    report.  ROC areas use the pooled per-class scores.
    """
    folds = (
        stratified_folds(dataset, k, seed)
        if stratify
        else random_folds(dataset, k, seed)
    )
    class_values = dataset.class_values
    actual = []
    predicted = []
    scores = []
    for train, test in folds:
        predict = learner(train)
        for inst in test.instances:
            label, dist = predict(inst)
            actual.append(inst.values[dataset.class_index])
            predicted.append(label)
            scores.append(dist)
    report = per_class_metrics(confusion(actual, predicted, class_values))
    per_class = []
    for label, metrics in report.per_class:
        present = any(a == label for a in actual)
        if present and any(a != label for a in actual):
            area = roc_area([s[label] for s in scores], actual, label)
            metrics = replace(metrics, roc_area=area)
        per_class.append((label, metrics))
    return replace(report, per_class=tuple(per_class))


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

_COLUMNS = ("TP Rate", "FP Rate", "Precision", "Recall", "F-Measure", "ROC Area")


def _metric_cells(m: ClassMetrics):
    values = (m.tp_rate, m.fp_rate, m.precision, m.recall, m.f_measure)
    cells = [f"{v:.3f}" for v in values]
    cells.append("n/a" if m.roc_area is None else f"{m.roc_area:.3f}")
    return cells


def report_text(report: EvaluationReport) -> str:
    """Counts/percentage headline plus the aligned per-class table."""
    total = report.matrix.total
    correct = report.matrix.correct
    lines = [
        f"Correctly Classified Instances {correct} Nos. {100 * report.accuracy:.1f} %",
        f"Incorrectly Classified Instances {total - correct} Nos. "
        f"{100 * report.error_rate:.1f} %",
        "",
    ]
    rows = [list(_COLUMNS) + ["Class"]]
    for label, metrics in report.per_class:
        rows.append(_metric_cells(metrics) + [str(label)])
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    for r in rows:
        lines.append("  ".join(cell.rjust(w) for cell, w in zip(r, widths)))
    lines.append("")
    lines.append("Confusion Matrix (rows actual, columns predicted)")
    header = "  ".join(f"{v:>6}" for v in report.matrix.class_values)
    lines.append(f"{'':>6}  {header}")
    for label, row in zip(report.matrix.class_values, report.matrix.counts):
        cells = "  ".join(f"{c:>6}" for c in row)
        lines.append(f"{label:>6}  {cells}")
    return "\n".join(lines)


def report_to_json(report: EvaluationReport) -> str:
    doc = {
        "format": REPORT_FORMAT,
        "version": REPORT_VERSION,
        "classes": list(report.matrix.class_values),
        "confusion": [list(row) for row in report.matrix.counts],
        "accuracy": report.accuracy,
        "error_rate": report.error_rate,
        "per_class": {
            label: {
                "tp_rate": m.tp_rate,
                "fp_rate": m.fp_rate,
                "precision": m.precision,
                "recall": m.recall,
                "f_measure": m.f_measure,
                "roc_area": m.roc_area,
            }
            for label, m in report.per_class
        },
    }
    return json.dumps(doc, indent=2)


def report_from_json(text: str) -> EvaluationReport:
    doc = json.loads(text)
    if doc.get("format") != REPORT_FORMAT:
        raise ValueError(f"not a {REPORT_FORMAT} document")
    if doc.get("version") != REPORT_VERSION:
        raise ValueError(f"unsupported report version {doc.get('version')}")
    matrix = ConfusionMatrix(
        tuple(doc["classes"]), tuple(tuple(r) for r in doc["confusion"])
    )
    per_class = tuple(
        (
            label,
            ClassMetrics(
                tp_rate=m["tp_rate"],
                fp_rate=m["fp_rate"],
                precision=m["precision"],
                recall=m["recall"],
                f_measure=m["f_measure"],
                roc_area=m["roc_area"],
            ),
        )
        for label, m in doc["per_class"].items()
    )
    return EvaluationReport(matrix, per_class, doc["accuracy"])


def report_csv(report: EvaluationReport) -> str:
    """CSV mirror of the per-class table, full float precision."""
    out = ["class,tp_rate,fp_rate,precision,recall,f_measure,roc_area"]
    for label, m in report.per_class:
        roc = "" if m.roc_area is None else repr(m.roc_area)
        out.append(
            f"{label},{m.tp_rate!r},{m.fp_rate!r},{m.precision!r},"
            f"{m.recall!r},{m.f_measure!r},{roc}"
        )
    return "\n".join(out) + "\n"
