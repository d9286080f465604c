"""
Inside the tree: split scores, pruning, rule extraction
=======================================================
"""

from ldscreen import (
    TreeConfig,
    build_tree,
    entropy,
    evaluate_split,
    extract_rules,
    prune_tree,
    ruleset_text,
    synthetic_checklist,
    ucb_error_rate,
)

data = synthetic_checklist(n_no=94, n_yes=31, seed=7)

# Class entropy of the whole cohort.
counts = [0.0, 0.0]
for inst in data.instances:
    counts[data.class_values.index(inst.values[data.class_index])] += 1
print(f"class counts N/Y: {counts[0]:g}/{counts[1]:g}")
print(f"class entropy: {entropy(counts):.4f} bits")
print()

# Score every checklist question as a root split and rank by gain ratio.
scored = []
for i in data.feature_indices:
    cand = evaluate_split(data, i)
    if cand.valid:
        scored.append((cand.gain_ratio, cand.info_gain, data.schema[i].name))
scored.sort(reverse=True)
print("top five root splits (gain ratio, info gain):")
for ratio, gain, name in scored[:5]:
    print(f"  {name:<4} {ratio:.4f}  {gain:.4f}")
print()

# Grow without pruning, then prune.  Pruning replaces a subtree by a leaf
# whenever the leaf's pessimistic error bound is no worse than the sum of
# its children's bounds.
grown = build_tree(data, TreeConfig(pruning=False))
pruned = prune_tree(grown)
print(f"grown:  {grown.node_count()} nodes, {grown.leaf_count()} leaves")
print(f"pruned: {pruned.node_count()} nodes, {pruned.leaf_count()} leaves")

# The bound behind that decision: an exact binomial upper confidence
# limit on the error rate, here for 2 errors out of 9 at the default 0.25.
print(f"pessimistic error bound U(2, 9): {ucb_error_rate(2, 9, 0.25):.4f}")
print()

print("rules extracted from the pruned tree:")
print(ruleset_text(extract_rules(pruned)))
