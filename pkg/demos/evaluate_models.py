"""
Cross-validated comparison of three classifiers
===============================================

Twofold stratified cross-validation of the tree, its simplified rules,
and a majority-class baseline on the same cohort, reported with
per-class TP/FP rates, precision, recall, F-measure, and ROC area.
"""

from ldscreen import (
    cross_validate,
    majority_learner,
    report_text,
    report_to_json,
    rules_learner,
    synthetic_checklist,
    tree_learner,
)

data = synthetic_checklist(n_no=94, n_yes=31, seed=7)

for name, learner in (
    ("decision tree", tree_learner()),
    ("simplified rules", rules_learner()),
    ("majority baseline", majority_learner()),
):
    report = cross_validate(data, k=2, seed=1, learner=learner)
    print(f"=== {name} ===")
    print(report_text(report))
    print()

# Reports serialize to JSON for downstream tooling; the same text above
# can be rebuilt from this payload.
report = cross_validate(data, k=2, seed=1, learner=tree_learner())
payload = report_to_json(report)
print(f"JSON report: {len(payload)} bytes, accuracy {report.accuracy:.3f}")
