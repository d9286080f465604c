"""
Two-cluster structure of the checklist cohort
=============================================

K-means with k=2 on the sixteen yes/no answers, then the cluster report:
sizes as percentages, per-attribute means, and the majority-class label
of each cluster.
"""

from ldscreen import (
    cluster_report_text,
    kmeans_fit,
    map_clusters_to_classes,
    synthetic_checklist,
)

data = synthetic_checklist(n_no=94, n_yes=31, seed=7)

model = kmeans_fit(data, k=2, seed=0)
print(cluster_report_text(model, data))
print()

# How well does the unsupervised split line up with the recorded class?
labels, counts = map_clusters_to_classes(model, data)
agree = sum(
    counts[j][data.class_values.index(labels[j])] for j in range(model.k)
)
print(f"cluster-majority agreement with LD: {100 * agree / len(data):.1f} %")

# WCSS falls monotonically until the assignment stops changing.
history = ", ".join(f"{w:.1f}" for w in model.wcss_history)
print(f"WCSS per iteration: {history}")
