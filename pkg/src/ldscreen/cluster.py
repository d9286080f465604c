"""K-means partitioning of checklist/survey instances.

Instances are encoded into real vectors: numeric attributes pass through,
a binary attribute becomes one 0/1 indicator of its second declared value
(so pure-binary data keeps the plain Hamming geometry), and wider nominal
attributes become one indicator column per value.  The class attribute is
never encoded.  Centroids are therefore always means and the within-
cluster sum of squared errors (WCSS) is well-defined.

Fitting runs Lloyd iterations from k randomly chosen distinct instances
until assignments stop changing.  Callers must impute gaps first; the
encoder refuses missing values.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset

CLUSTER_FORMAT = "ldscreen-cluster"
CLUSTER_VERSION = 1


@dataclass(frozen=True)
class ClusterModel:
    k: int
    column_labels: tuple
    centroids: tuple  # k tuples of floats
    assignments: tuple  # cluster index per instance
    wcss: float
    wcss_history: tuple  # one entry per iteration, non-increasing
    iterations: int
    seed: int

    def cluster_sizes(self):
        sizes = [0] * self.k
        for a in self.assignments:
            sizes[a] += 1
        return sizes


def encode_dataset(dataset: Dataset):
    """Encode non-class attributes into a real matrix.

    Returns
    -------
    (numpy.ndarray, tuple of str)
        An (n_instances, n_columns) float array and one label per column:
        the attribute name for numeric and binary columns, "name=value"
        for one-hot nominal columns.

    A missing value anywhere is an error; run impute_missing first.
    """
    columns = []
    labels = []
    encoders = []
    for i, spec in enumerate(dataset.schema):
        if i == dataset.class_index:
            continue
        if spec.kind == "numeric":
            labels.append(spec.name)
            encoders.append((i, None))
        elif spec.kind == "binary":
            labels.append(spec.name)
            encoders.append((i, spec.values[1]))
        else:
            for v in spec.values:
                labels.append(f"{spec.name}={v}")
                encoders.append((i, v))
    rows = np.empty((len(dataset), len(encoders)), dtype=float)
    for r, inst in enumerate(dataset.instances):
        for c, (i, positive) in enumerate(encoders):
            v = inst.values[i]
            if v is None:
                raise ValueError(
                    f"instance {r} has a missing value in attribute "
                    f"{dataset.schema[i].name}; impute before clustering"
                )
            rows[r, c] = float(v) if positive is None else float(v == positive)
    return rows, tuple(labels)


def distance2(a, b):
    """Squared Euclidean distance; Hamming count on 0/1 vectors."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    return float(np.dot(diff, diff))


def _assign(rows, centroids):
    # n x k squared distances; argmin takes the lowest index on ties
    d2 = ((rows[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    assign = d2.argmin(axis=1)
    return assign, d2[np.arange(len(rows)), assign].sum()

def _means(rows, assign, k, old_centroids):
    centroids = old_centroids.copy()
    for j in range(k):
        members = rows[assign == j]
        if len(members):
            centroids[j] = members.mean(axis=0)
    empties = [j for j in range(k) if not (assign == j).any()]
    if empties:
        assign = assign.copy()
        for j in empties:
            # repair: reseed with the instance farthest from its own centroid
            d2 = ((rows - centroids[assign]) ** 2).sum(axis=1)
            far = int(d2.argmax())
            centroids[j] = rows[far]
            assign[far] = j
    return centroids, assign


def kmeans_fit(dataset, k=2, seed=0, max_iter=100, initial_centroids=None):
    """Partition ``dataset`` into k clusters by Lloyd's method.

    Parameters
    ----------
    dataset : Dataset
        Fully imputed; the class attribute (if any) is ignored.
    k : int
        Cluster count; must not exceed the number of distinct instances.
    seed : int
        Drives the choice of initial centroids among distinct instances.
    max_iter : int
        Hard cap on assignment rounds.
    initial_centroids : sequence of vectors, optional
        Bypass random initialization (used for warm restarts; a fit
        restarted from its own centroids converges in one iteration).

    Returns
    -------
    ClusterModel
        Assignments, centroids, final WCSS, and the per-iteration WCSS
        history (non-increasing).  Deterministic for fixed inputs.
    """
    if len(dataset) == 0:
        raise ValueError("cannot cluster an empty dataset")
    rows, labels = encode_dataset(dataset)
    if initial_centroids is None:
        distinct = np.unique(rows, axis=0)
        if k > len(distinct):
            raise ValueError(
                f"k={k} exceeds the {len(distinct)} distinct instances"
            )
        picks = random.Random(seed).sample(range(len(distinct)), k)
        centroids = distinct[picks].astype(float)
    else:
        centroids = np.asarray(initial_centroids, dtype=float).copy()
        if centroids.shape != (k, rows.shape[1]):
            raise ValueError(
                f"initial centroids must have shape {(k, rows.shape[1])}"
            )

    assign, _ = _assign(rows, centroids)
    centroids, assign = _means(rows, assign, k, centroids)
    history = [float(((rows - centroids[assign]) ** 2).sum())]
    iterations = 1
    while iterations < max_iter:
        new_assign, _ = _assign(rows, centroids)
        if (new_assign == assign).all():
            break
        centroids, assign = _means(rows, new_assign, k, centroids)
        history.append(float(((rows - centroids[assign]) ** 2).sum()))
        iterations += 1
    return ClusterModel(
        k=k,
        column_labels=labels,
        centroids=tuple(tuple(float(x) for x in c) for c in centroids),
        assignments=tuple(int(a) for a in assign),
        wcss=history[-1],
        wcss_history=tuple(history),
        iterations=iterations,
        seed=seed,
    )


def map_clusters_to_classes(model: ClusterModel, dataset: Dataset):
    """Label each cluster by the majority class of its members.

    Returns
    -------
    (tuple of str, list of list of int)
        One class label per cluster (ties resolve to the earlier declared
        class) and the contingency counts[cluster][class].
    """
    class_values = dataset.class_values
    counts = [[0] * len(class_values) for _ in range(model.k)]
    for inst, a in zip(dataset.instances, model.assignments):
        label = inst.values[dataset.class_index]
        if label is not None:
            counts[a][class_values.index(label)] += 1
    labels = []
    for row in counts:
        best = 0
        for i, c in enumerate(row):
            if c > row[best]:
                best = i
        labels.append(class_values[best])
    return tuple(labels), counts


def cluster_profile(model: ClusterModel, dataset: Dataset):
    """Mean of every encoded column, over the full data and per cluster.

    Returns
    -------
    list of (label, full_mean, tuple of per-cluster means)
    """
    rows, labels = encode_dataset(dataset)
    assign = np.asarray(model.assignments)
    out = []
    for c, label in enumerate(labels):
        col = rows[:, c]
        per = tuple(
            float(col[assign == j].mean()) if (assign == j).any() else float("nan")
            for j in range(model.k)
        )
        out.append((label, float(col.mean()), per))
    return out


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def percentage(part, whole):
    """Share of ``whole`` formatted with two decimals, e.g. '75.20 %'."""
    return f"{100.0 * part / whole:.2f} %"


def clustered_instances_text(model: ClusterModel, dataset: Dataset) -> str:
    """The 'Clustered Instances' block: size and share per cluster."""
    class_name = dataset.class_attribute.name
    labels, _ = map_clusters_to_classes(model, dataset)
    sizes = model.cluster_sizes()
    total = len(dataset)
    lines = ["Clustered Instances"]
    for j, (size, label) in enumerate(zip(sizes, labels)):
        lines.append(
            f"{j}  {class_name}={label} - {size} Nos. - {percentage(size, total)}"
        )
    return "\n".join(lines)


def cluster_report_text(model: ClusterModel, dataset: Dataset) -> str:
    """Aligned clustering report: run stats, per-column means, sizes."""
    sizes = model.cluster_sizes()
    profile = cluster_profile(model, dataset)
    header = ["Attribute", f"Full Data ({len(dataset)})"]
    header += [f"Cluster {j} ({sizes[j]})" for j in range(model.k)]
    rows = [header]
    for label, full, per in profile:
        rows.append([label, f"{full:.3f}"] + [f"{m:.3f}" for m in per])
    widths = [max(len(r[c]) for r in rows) for c in range(len(header))]
    table = "\n".join(
        "  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip()
        for r in rows
    )
    lines = [
        f"Number of iterations: {model.iterations}",
        f"Within cluster sum of squared errors: {model.wcss:.3f}",
        "",
        table,
        "",
        clustered_instances_text(model, dataset),
    ]
    return "\n".join(lines)


def cluster_profile_csv(model: ClusterModel, dataset: Dataset) -> str:
    """CSV mirror of the profile table (full precision, no alignment)."""
    out = ["attribute,full_data," + ",".join(f"cluster_{j}" for j in range(model.k))]
    for label, full, per in cluster_profile(model, dataset):
        cells = [label, repr(full)] + [repr(m) for m in per]
        out.append(",".join(cells))
    return "\n".join(out) + "\n"


def cluster_model_to_json(model: ClusterModel) -> str:
    doc = {
        "format": CLUSTER_FORMAT,
        "version": CLUSTER_VERSION,
        "k": model.k,
        "seed": model.seed,
        "iterations": model.iterations,
        "wcss": model.wcss,
        "wcss_history": list(model.wcss_history),
        "column_labels": list(model.column_labels),
        "centroids": [list(c) for c in model.centroids],
        "assignments": list(model.assignments),
    }
    return json.dumps(doc, indent=2)


def cluster_model_from_json(text: str) -> ClusterModel:
    doc = json.loads(text)
    if doc.get("format") != CLUSTER_FORMAT:
        raise ValueError(f"not a {CLUSTER_FORMAT} document")
    if doc.get("version") != CLUSTER_VERSION:
        raise ValueError(f"unsupported cluster model version {doc.get('version')}")
    return ClusterModel(
        k=doc["k"],
        column_labels=tuple(doc["column_labels"]),
        centroids=tuple(tuple(c) for c in doc["centroids"]),
        assignments=tuple(doc["assignments"]),
        wcss=doc["wcss"],
        wcss_history=tuple(doc["wcss_history"]),
        iterations=doc["iterations"],
        seed=doc["seed"],
    )
