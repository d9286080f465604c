"""Encoding, Lloyd fitting, cluster labeling, and report formats."""

import itertools
import random

import numpy as np
import pytest

from ldscreen.cluster import (
    ClusterModel,
    cluster_model_from_json,
    cluster_model_to_json,
    cluster_profile,
    cluster_profile_csv,
    cluster_report_text,
    clustered_instances_text,
    distance2,
    encode_dataset,
    kmeans_fit,
    map_clusters_to_classes,
    percentage,
)
from ldscreen.dataset import (
    AttributeSpec,
    Dataset,
    Instance,
    impute_missing,
    synthetic_checklist,
)


def binvec_dataset(vectors, labels=None):
    n = len(vectors[0])
    schema = tuple(
        AttributeSpec.categorical(f"b{i}", ("0", "1")) for i in range(n)
    ) + (AttributeSpec.categorical("cls", ("N", "Y")),)
    labels = labels or ["N"] * len(vectors)
    rows = tuple(
        Instance(tuple(v) + (lbl,)) for v, lbl in zip(vectors, labels)
    )
    return Dataset(schema, n, rows)


# planted two-group fixture: anchors duplicated so every distinct-instance
# initialization falls into the global basin
G0 = ["00000000", "00000000", "10000000"]
G1 = ["11111111", "11111111", "11111110"]
PLANTED = [{0, 1, 2}, {3, 4, 5}]


def partition_of(model):
    groups = {}
    for i, a in enumerate(model.assignments):
        groups.setdefault(a, set()).add(i)
    return sorted(groups.values(), key=min)


def enumeration_min_wcss(rows):
    """Exhaustive WCSS minimum over all 2-partitions (point 0 pinned)."""
    rows = np.asarray(rows, dtype=float)
    n = len(rows)
    best = None
    for bits in range(1, 2 ** (n - 1)):
        mask = np.array([True] + [(bits >> i) & 1 == 0 for i in range(n - 1)])
        if mask.all():
            continue
        w = 0.0
        for grp in (rows[mask], rows[~mask]):
            w += ((grp - grp.mean(axis=0)) ** 2).sum()
        if best is None or w < best:
            best = w
    return best


# --- encoding ----------------------------------------------------------------


def test_binary_encodes_to_single_indicator():
    d = binvec_dataset(["01", "10"])
    rows, labels = encode_dataset(d)
    assert labels == ("b0", "b1")
    assert rows.tolist() == [[0.0, 1.0], [1.0, 0.0]]


def test_nominal_one_hot_and_numeric_passthrough():
    schema = (
        AttributeSpec.categorical("color", ("red", "green", "blue")),
        AttributeSpec.numeric("x"),
        AttributeSpec.categorical("cls", ("N", "Y")),
    )
    d = Dataset(schema, 2, (Instance(("green", 2.5, "N")),))
    rows, labels = encode_dataset(d)
    assert labels == ("color=red", "color=green", "color=blue", "x")
    assert rows.tolist() == [[0.0, 1.0, 0.0, 2.5]]


def test_class_attribute_not_encoded():
    d = synthetic_checklist(10, 5, seed=1)
    rows, labels = encode_dataset(d)
    assert rows.shape == (15, 16)
    assert "LD" not in labels


def test_missing_value_refused():
    d = synthetic_checklist(10, 5, seed=1, missing_rate=0.5)
    with pytest.raises(ValueError, match="impute"):
        encode_dataset(d)


# --- distance ----------------------------------------------------------------


def test_distance_identity():
    assert distance2((1.0, 2.0, 3.0), (1.0, 2.0, 3.0)) == 0.0


def test_distance_hamming_on_bits():
    assert distance2((1, 0, 1, 0), (0, 0, 1, 1)) == 2.0


def test_distance_symmetry():
    rng = random.Random(3)
    for _ in range(50):
        a = [rng.uniform(-5, 5) for _ in range(6)]
        b = [rng.uniform(-5, 5) for _ in range(6)]
        assert distance2(a, b) == pytest.approx(distance2(b, a), abs=1e-12)


def test_distance_dimension_mismatch():
    with pytest.raises(ValueError):
        distance2((1.0,), (1.0, 2.0))


# --- kmeans_fit --------------------------------------------------------------


def test_separated_pair_singletons():
    d = binvec_dataset(["00000000", "11111111"])
    m = kmeans_fit(d, k=2, seed=0)
    assert sorted(m.cluster_sizes()) == [1, 1]
    assert m.wcss == 0.0
    assert m.iterations <= 2


def test_k1_closed_form():
    d = synthetic_checklist(40, 20, seed=4)
    m = kmeans_fit(d, k=1, seed=0)
    rows, _ = encode_dataset(d)
    mean = rows.mean(axis=0)
    assert m.centroids[0] == pytest.approx(tuple(mean), abs=1e-12)
    assert m.wcss == pytest.approx(float(((rows - mean) ** 2).sum()), abs=1e-9)


def test_planted_partition_matches_enumeration_for_every_seed():
    d = binvec_dataset(G0 + G1)
    rows, _ = encode_dataset(d)
    target = enumeration_min_wcss(rows)
    for seed in range(50):
        m = kmeans_fit(d, k=2, seed=seed)
        assert partition_of(m) == PLANTED
        assert m.wcss == pytest.approx(target, abs=1e-9)


def test_wcss_history_non_increasing():
    rng = random.Random(6)
    for seed in range(10):
        d = synthetic_checklist(rng.randint(20, 60), rng.randint(10, 30), seed=seed)
        m = kmeans_fit(d, k=3, seed=seed)
        for a, b in zip(m.wcss_history, m.wcss_history[1:]):
            assert b <= a + 1e-9
        assert m.iterations <= 100


def test_restart_from_own_centroids_is_fixed_point():
    d = synthetic_checklist(60, 30, seed=2)
    m = kmeans_fit(d, k=2, seed=11)
    again = kmeans_fit(d, k=2, seed=11, initial_centroids=m.centroids)
    assert again.iterations == 1
    assert again.assignments == m.assignments
    assert again.wcss == pytest.approx(m.wcss, abs=1e-9)


def test_seed_determinism():
    d = synthetic_checklist(50, 25, seed=8)
    a = kmeans_fit(d, k=4, seed=5)
    b = kmeans_fit(d, k=4, seed=5)
    assert a == b


def test_every_cluster_nonempty():
    rng = random.Random(9)
    for seed in range(10):
        d = synthetic_checklist(rng.randint(15, 40), rng.randint(5, 20), seed=seed)
        for k in (2, 3, 5):
            m = kmeans_fit(d, k=k, seed=seed)
            assert sorted(set(m.assignments)) == list(range(k))


def test_k_beyond_distinct_instances_rejected():
    d = binvec_dataset(["01", "01", "10"])
    with pytest.raises(ValueError):
        kmeans_fit(d, k=3, seed=0)


def test_empty_dataset_rejected():
    schema = (
        AttributeSpec.categorical("b0", ("0", "1")),
        AttributeSpec.categorical("cls", ("N", "Y")),
    )
    d = Dataset(schema, 1)
    with pytest.raises(ValueError):
        kmeans_fit(d, k=1, seed=0)


# --- cluster -> class mapping -------------------------------------------------


def test_pure_cluster_takes_its_class():
    d = binvec_dataset(
        ["00000000", "10000000", "11111111", "11111110"],
        labels=["N", "N", "Y", "Y"],
    )
    m = kmeans_fit(d, k=2, seed=0)
    labels, counts = map_clusters_to_classes(m, d)
    by_first_member = labels[m.assignments[0]], labels[m.assignments[2]]
    assert by_first_member == ("N", "Y")
    assert sum(sum(row) for row in counts) == 4


def test_majority_labels_match_brute_force():
    rng = random.Random(12)
    d = synthetic_checklist(40, 30, seed=3)
    m = kmeans_fit(d, k=3, seed=7)
    labels, counts = map_clusters_to_classes(m, d)
    for j in range(3):
        members = [
            inst.values[d.class_index]
            for inst, a in zip(d.instances, m.assignments)
            if a == j
        ]
        n_count = members.count("N")
        y_count = members.count("Y")
        assert counts[j] == [n_count, y_count]
        expect = "N" if n_count >= y_count else "Y"  # ties: declared order
        assert labels[j] == expect


def test_percentage_formatting_94_31():
    assert percentage(94, 125) == "75.20 %"
    assert percentage(31, 125) == "24.80 %"


def test_clustered_instances_lines():
    d = synthetic_checklist(94, 31, seed=3)
    m = kmeans_fit(d, k=2, seed=0)
    fake = ClusterModel(
        k=2,
        column_labels=m.column_labels,
        centroids=m.centroids,
        assignments=tuple([0] * 94 + [1] * 31),
        wcss=m.wcss,
        wcss_history=m.wcss_history,
        iterations=m.iterations,
        seed=m.seed,
    )
    text = clustered_instances_text(fake, d)
    assert text.splitlines()[0] == "Clustered Instances"
    assert "94 Nos. - 75.20 %" in text
    assert "31 Nos. - 24.80 %" in text


# --- profiles and reports -----------------------------------------------------


def test_profile_k1_equals_full_data():
    d = synthetic_checklist(30, 20, seed=5)
    m = kmeans_fit(d, k=1, seed=0)
    for label, full, per in cluster_profile(m, d):
        assert per[0] == pytest.approx(full, abs=1e-12)


def test_profile_constant_attribute():
    d = binvec_dataset(["01", "00", "01", "00"])  # b0 constant 0
    m = kmeans_fit(d, k=2, seed=1)
    profile = {label: (full, per) for label, full, per in cluster_profile(m, d)}
    full, per = profile["b0"]
    assert full == 0.0
    assert all(p == 0.0 for p in per)


def test_profile_matches_column_average_oracle():
    d = synthetic_checklist(50, 25, seed=9)
    m = kmeans_fit(d, k=2, seed=3)
    rows, labels = encode_dataset(d)
    for (label, full, per), c in zip(cluster_profile(m, d), range(len(labels))):
        col = [rows[i][c] for i in range(len(rows))]
        assert full == pytest.approx(sum(col) / len(col), abs=1e-9)
        for j in range(2):
            members = [v for v, a in zip(col, m.assignments) if a == j]
            assert per[j] == pytest.approx(sum(members) / len(members), abs=1e-9)


def test_report_text_shape():
    d = synthetic_checklist(40, 20, seed=1)
    m = kmeans_fit(d, k=2, seed=0)
    text = cluster_report_text(m, d)
    assert text.startswith("Number of iterations: ")
    assert "Within cluster sum of squared errors: " in text
    assert "Full Data (60)" in text
    assert "Clustered Instances" in text
    # one mean column per cluster plus full data on each attribute row
    line = next(l for l in text.splitlines() if l.startswith("DR "))
    assert len(line.split()) == 4


def test_profile_csv_round_numbers():
    d = synthetic_checklist(20, 10, seed=2)
    m = kmeans_fit(d, k=2, seed=4)
    csv_text = cluster_profile_csv(m, d)
    lines = csv_text.strip().splitlines()
    assert lines[0] == "attribute,full_data,cluster_0,cluster_1"
    assert len(lines) == 17  # 16 encoded columns + header


def test_cluster_json_round_trip():
    d = synthetic_checklist(30, 15, seed=6)
    m = kmeans_fit(d, k=2, seed=9)
    back = cluster_model_from_json(cluster_model_to_json(m))
    assert back == m


def test_cluster_json_requires_version():
    import json

    d = binvec_dataset(["01", "10"])
    m = kmeans_fit(d, k=2, seed=0)
    doc = json.loads(cluster_model_to_json(m))
    doc["version"] = 99
    with pytest.raises(ValueError):
        cluster_model_from_json(json.dumps(doc))
