"""IF-THEN rule sets lifted from decision trees.

One rule per leaf: the tests along the root-to-leaf path become the
antecedent conjunction, the leaf's majority class the consequent.  The
unpruned set replicates the tree's predictions on missing-free instances.
Simplification greedily drops antecedent conditions that do not hurt a
pessimistic accuracy estimate, then discards rules that fall below the
default-class baseline; lost coverage is absorbed by the default class.

Rules are independent of each other at classification time: a missing
value simply fails the condition, so no fractional routing happens here
(the documented divergence from the tree on gappy inputs).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .dataset import Dataset
from .tree import DecisionTreeModel, Leaf, ucb_error_rate

RULES_FORMAT = "ldscreen-rules"
RULES_VERSION = 1

EQ = "="
LE = "<="
GT = ">"


@dataclass(frozen=True)
class Condition:
    """A single attribute test; '=' for categorical, '<='/'>' for numeric."""

    attribute_index: int
    relation: str
    value: object

    def holds(self, values):
        v = values[self.attribute_index]
        if v is None:
            return False
        if self.relation == EQ:
            return v == self.value
        if self.relation == LE:
            return v <= self.value
        return v > self.value


@dataclass(frozen=True)
class Rule:
    antecedent: tuple
    consequent: str
    coverage: float
    accuracy: float

    def matches(self, values):
        return all(c.holds(values) for c in self.antecedent)


@dataclass(frozen=True)
class RuleSet:
    schema: tuple
    class_index: int
    rules: tuple
    default_class: str


def _majority(class_counts, class_values):
    best = 0
    for i, c in enumerate(class_counts):
        if c > class_counts[best]:
            best = i
    return class_values[best]


def extract_rules(model: DecisionTreeModel) -> RuleSet:
    """One rule per leaf of ``model``; rule count equals leaf count.

    Coverage and accuracy come from the training weights recorded at the
    leaf.  Rule order follows a depth-first walk, but classification does
    not depend on it except as a final tie-break.
    """
    class_values = model.class_values
    rules = []

    def walk(node, conditions):
        if isinstance(node, Leaf):
            total = sum(node.class_counts)
            consequent = class_values[node.predicted_index]
            acc = node.class_counts[node.predicted_index] / total
            rules.append(Rule(tuple(conditions), consequent, node.weight, acc))
            return
        spec = model.schema[node.attribute_index]
        for b, child in enumerate(node.children):
            if spec.is_categorical:
                cond = Condition(node.attribute_index, EQ, spec.values[b])
            elif b == 0:
                cond = Condition(node.attribute_index, LE, node.threshold)
            else:
                cond = Condition(node.attribute_index, GT, node.threshold)
            walk(child, conditions + [cond])

    walk(model.root, [])
    default = _majority(model.root.class_counts, class_values)
    return RuleSet(model.schema, model.class_index, tuple(rules), default)


def _rule_stats(antecedent, consequent, dataset):
    matched = 0.0
    hit = 0.0
    for inst in dataset.instances:
        if all(c.holds(inst.values) for c in antecedent):
            matched += inst.weight
            if inst.values[dataset.class_index] == consequent:
                hit += inst.weight
    return matched, hit


def _pessimistic_accuracy(antecedent, consequent, dataset, cf):
    matched, hit = _rule_stats(antecedent, consequent, dataset)
    if matched <= 0:
        return 0.0
    return 1.0 - ucb_error_rate(matched - hit, matched, cf)


def simplify_rules(ruleset: RuleSet, dataset: Dataset, confidence_factor=0.25) -> RuleSet:
    """Prune redundant antecedent tests and weak rules against ``dataset``.

    Per rule, repeatedly drop the condition whose removal gives the best
    pessimistic accuracy, as long as that is no worse than keeping it.
    Rules whose estimate ends below the match-everything default-class
    baseline are discarded.  The default class becomes the majority among
    instances no surviving rule covers (global majority when none).
    """
    class_values = ruleset.schema[ruleset.class_index].values
    global_counts = [0.0] * len(class_values)
    for inst in dataset.instances:
        global_counts[class_values.index(inst.values[ruleset.class_index])] += inst.weight
    global_majority = _majority(global_counts, class_values)
    baseline = _pessimistic_accuracy((), global_majority, dataset, confidence_factor)

    kept = []
    for rule in ruleset.rules:
        conditions = list(rule.antecedent)
        current = _pessimistic_accuracy(
            conditions, rule.consequent, dataset, confidence_factor
        )
        while conditions:
            trials = []
            for i in range(len(conditions)):
                without = conditions[:i] + conditions[i + 1 :]
                est = _pessimistic_accuracy(
                    without, rule.consequent, dataset, confidence_factor
                )
                trials.append((est, i))
            best_est, best_i = max(trials, key=lambda t: (t[0], -t[1]))
            if best_est < current:
                break
            del conditions[best_i]
            current = best_est
        if current < baseline:
            continue
        matched, hit = _rule_stats(conditions, rule.consequent, dataset)
        acc = hit / matched if matched > 0 else 0.0
        kept.append(Rule(tuple(conditions), rule.consequent, matched, acc))

    # dedupe: simplification can collapse sibling rules into the same form
    seen = set()
    unique = []
    for r in kept:
        key = (frozenset(r.antecedent), r.consequent)
        if key not in seen:
            seen.add(key)
            unique.append(r)

    uncovered = [0.0] * len(class_values)
    for inst in dataset.instances:
        if not any(r.matches(inst.values) for r in unique):
            uncovered[class_values.index(inst.values[ruleset.class_index])] += inst.weight
    if sum(uncovered) > 0:
        default = _majority(uncovered, class_values)
    else:
        default = global_majority
    return RuleSet(ruleset.schema, ruleset.class_index, tuple(unique), default)


def rules_classify(ruleset: RuleSet, instance) -> str:
    """Label by the best matching rule, or the default class.

    Best = highest accuracy, ties broken by higher coverage, then by
    earlier position in the set.
    """
    values = instance.values if hasattr(instance, "values") else tuple(instance)
    best = None
    best_key = None
    for pos, rule in enumerate(ruleset.rules):
        if rule.matches(values):
            key = (rule.accuracy, rule.coverage, -pos)
            if best is None or key > best_key:
                best, best_key = rule, key
    if best is None:
        return ruleset.default_class
    return best.consequent


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def condition_text(condition: Condition, schema) -> str:
    name = schema[condition.attribute_index].name
    value = condition.value
    if condition.relation != EQ and isinstance(value, float):
        value = f"{value:g}"
    return f"{name}{condition.relation}{value}"


def rule_text(rule: Rule, schema, class_name: str) -> str:
    if rule.antecedent:
        body = " AND ".join(condition_text(c, schema) for c in rule.antecedent)
    else:
        body = "TRUE"
    return (
        f"IF {body} THEN {class_name}={rule.consequent}"
        f" [{rule.coverage:g}, {rule.accuracy:.3f}]"
    )


def ruleset_text(ruleset: RuleSet) -> str:
    class_name = ruleset.schema[ruleset.class_index].name
    lines = [rule_text(r, ruleset.schema, class_name) for r in ruleset.rules]
    lines.append(f"DEFAULT: {class_name}={ruleset.default_class}")
    return "\n".join(lines)


def ruleset_to_json(ruleset: RuleSet) -> str:
    doc = {
        "format": RULES_FORMAT,
        "version": RULES_VERSION,
        "class": ruleset.schema[ruleset.class_index].name,
        "default_class": ruleset.default_class,
        "rules": [
            {
                "conditions": [
                    {
                        "attribute": ruleset.schema[c.attribute_index].name,
                        "relation": c.relation,
                        "value": c.value,
                    }
                    for c in r.antecedent
                ],
                "class": r.consequent,
                "coverage": r.coverage,
                "accuracy": r.accuracy,
            }
            for r in ruleset.rules
        ],
    }
    return json.dumps(doc, indent=2)
