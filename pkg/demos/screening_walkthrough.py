"""
Screening a new checklist, start to finish
==========================================

Train a decision tree on checklist records, turn it into IF-THEN rules,
and score one child's sixteen answers.
"""

from ldscreen import (
    TreeConfig,
    build_tree,
    classify,
    extract_rules,
    rules_classify,
    ruleset_text,
    simplify_rules,
    synthetic_checklist,
    training_accuracy,
)

# A stand-in cohort: 94 children screened negative, 31 positive.
data = synthetic_checklist(n_no=94, n_yes=31, seed=7)
print(f"{len(data)} records, class attribute {data.class_attribute.name!r}")

model = build_tree(data, TreeConfig(min_leaf_weight=2.0, confidence_factor=0.25))
print(f"tree: {model.node_count()} nodes, {model.leaf_count()} leaves")
print(f"training accuracy: {100 * training_accuracy(model, data):.1f} %")

# Every leaf becomes a rule; simplification then drops conditions that do
# not hurt the pessimistic accuracy estimate.
rules = simplify_rules(extract_rules(model), data)
print()
print(ruleset_text(rules))
print()

# One new child: mostly "no" answers, but reading and spelling trouble
# plus slow learning.  Answers are ordered like the checklist attributes,
# the final None standing in for the unknown class.
answers = ["N"] * 16
schema = data.schema
for flag in ("DR", "DS", "STL"):
    answers[next(i for i, s in enumerate(schema) if s.name == flag)] = "Y"
instance = tuple(answers) + (None,)

label, distribution = classify(model, instance)
print(f"tree prediction: {data.class_attribute.name}={label}")
for value, share in distribution.items():
    print(f"  P({value}) = {share:.3f}")
print(f"rule prediction: {data.class_attribute.name}={rules_classify(rules, instance)}")
