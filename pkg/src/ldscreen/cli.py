"""Command-line surface: train, evaluate, rules, cluster, checklist.

Exit codes: 0 on success, 1 when a valid request fails at runtime, 2 for
usage errors including unreadable or malformed input.  Diagnostics go to
stderr; stdout carries only the requested output.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .cluster import (
    cluster_model_to_json,
    cluster_profile_csv,
    cluster_report_text,
    kmeans_fit,
)
from .dataset import ParseError, impute_missing, parse_arff, parse_csv
from .evaluation import (
    cross_validate,
    majority_learner,
    report_text,
    report_to_json,
    rules_learner,
    tree_learner,
)
from .rules import extract_rules, rule_text, ruleset_text, ruleset_to_json, simplify_rules
from .tree import (
    TreeConfig,
    build_tree,
    classify,
    model_from_json,
    model_to_json,
    training_accuracy,
)


class UsageError(ValueError):
    """Bad request shape: wrong flags, counts, or symbols (exit 2)."""


def _add_input_flags(sub):
    sub.add_argument("--input", required=True, help="dataset file (ARFF or CSV)")
    sub.add_argument(
        "--format",
        choices=("arff", "csv"),
        help="input format; default follows the file extension",
    )
    sub.add_argument(
        "--class",
        dest="class_name",
        help="class attribute name; default last categorical attribute",
    )


def _add_tree_flags(sub):
    sub.add_argument("--no-prune", action="store_true", help="skip pruning")
    sub.add_argument(
        "--min-leaf-weight",
        type=float,
        default=2.0,
        help="minimum training weight per leaf (default 2)",
    )
    sub.add_argument(
        "--confidence",
        type=float,
        default=0.25,
        help="pruning confidence factor (default 0.25)",
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ldscreen",
        description="Decision-tree, rule, and clustering toolkit for "
        "checklist screening data.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name, help_text):
        return sub.add_parser(name, help=help_text, parents=[common])

    p = add_parser("train", "induce a decision tree and save it")
    _add_input_flags(p)
    _add_tree_flags(p)
    p.add_argument("--out", help="model JSON path (default: stdout)")
    p.set_defaults(func=cmd_train)

    p = add_parser("evaluate", "cross-validate and print the metric table")
    _add_input_flags(p)
    _add_tree_flags(p)
    p.add_argument("--folds", type=int, default=2, help="fold count (default 2)")
    p.add_argument(
        "--no-stratify", action="store_true", help="plain folds instead of stratified"
    )
    p.add_argument(
        "--learner",
        choices=("tree", "rules", "majority"),
        default="tree",
        help="model family to evaluate (default tree)",
    )
    p.add_argument("--out", help="also write the report as JSON to this path")
    p.set_defaults(func=cmd_evaluate)

    p = add_parser("rules", "print the IF-THEN rules of a tree")
    _add_input_flags(p)
    _add_tree_flags(p)
    p.add_argument(
        "--simplify",
        action="store_true",
        help="drop redundant conditions and weak rules",
    )
    p.add_argument("--out", help="also write the rule set as JSON to this path")
    p.set_defaults(func=cmd_rules)

    p = add_parser("cluster", "k-means partition with profile report")
    _add_input_flags(p)
    p.add_argument("--clusters", type=int, default=2, help="cluster count (default 2)")
    p.add_argument("--max-iter", type=int, default=100, help="iteration cap")
    p.add_argument("--out", help="write the cluster model as JSON to this path")
    p.add_argument("--profile-csv", help="write the profile table as CSV to this path")
    p.set_defaults(func=cmd_cluster)

    p = add_parser("checklist", "score one 16-answer symptom checklist")
    p.add_argument("--model", required=True, help="trained tree model JSON")
    p.add_argument(
        "--answers",
        help="comma-separated answers in schema order, e.g. Y,N,...,N",
    )
    p.add_argument(
        "--answers-file",
        help="file with the answers, comma- or line-separated",
    )
    p.set_defaults(func=cmd_checklist)
    return parser


def _load_dataset(args):
    path = Path(args.input)
    text = path.read_text()
    fmt = args.format
    if fmt is None:
        fmt = "arff" if path.suffix.lower() == ".arff" else "csv"
    if fmt == "arff":
        return parse_arff(text, class_name=args.class_name)
    return parse_csv(text, class_name=args.class_name)


def _tree_config(args):
    return TreeConfig(
        min_leaf_weight=args.min_leaf_weight,
        confidence_factor=args.confidence,
        pruning=not args.no_prune,
    )


def cmd_train(args):
    dataset = _load_dataset(args)
    model = build_tree(dataset, _tree_config(args))
    summary = (
        f"Nodes: {model.node_count()}\n"
        f"Leaves: {model.leaf_count()}\n"
        f"Training accuracy: {100 * training_accuracy(model, dataset):.1f} %"
    )
    doc = model_to_json(model)
    if args.out:
        Path(args.out).write_text(doc + "\n")
        print(summary)
        print(f"Model written to {args.out}")
    else:
        print(doc)
        print(summary, file=sys.stderr)
    return 0


def cmd_evaluate(args):
    dataset = _load_dataset(args)
    factories = {
        "tree": lambda: tree_learner(_tree_config(args)),
        "rules": lambda: rules_learner(_tree_config(args)),
        "majority": lambda: majority_learner(),
    }
    report = cross_validate(
        dataset,
        k=args.folds,
        seed=args.seed,
        learner=factories[args.learner](),
        stratify=not args.no_stratify,
    )
    print(report_text(report))
    if args.out:
        Path(args.out).write_text(report_to_json(report) + "\n")
    return 0


def cmd_rules(args):
    dataset = _load_dataset(args)
    ruleset = extract_rules(build_tree(dataset, _tree_config(args)))
    if args.simplify:
        ruleset = simplify_rules(ruleset, dataset)
    print(ruleset_text(ruleset))
    if args.out:
        Path(args.out).write_text(ruleset_to_json(ruleset) + "\n")
    return 0


def cmd_cluster(args):
    dataset = impute_missing(_load_dataset(args))
    model = kmeans_fit(
        dataset, k=args.clusters, seed=args.seed, max_iter=args.max_iter
    )
    print(cluster_report_text(model, dataset))
    if args.out:
        Path(args.out).write_text(cluster_model_to_json(model) + "\n")
    if args.profile_csv:
        Path(args.profile_csv).write_text(cluster_profile_csv(model, dataset))
    return 0


def _read_answers(args):
    if (args.answers is None) == (args.answers_file is None):
        raise UsageError("provide exactly one of --answers or --answers-file")
    if args.answers is not None:
        raw = args.answers
    else:
        raw = Path(args.answers_file).read_text()
    tokens = [t.strip() for t in raw.replace("\n", ",").split(",")]
    return [t for t in tokens if t]


def _normalize_answer(token, spec):
    for v in spec.values:
        if token.upper() == v.upper():
            return v
    raise UsageError(
        f"invalid answer {token!r} for {spec.name}; expected one of {spec.values}"
    )


def cmd_checklist(args):
    model = model_from_json(Path(args.model).read_text())
    # answers follow the model's own schema: 16 symptoms for the built-in
    # checklist, whatever the model was trained on otherwise
    features = [
        (i, spec)
        for i, spec in enumerate(model.schema)
        if i != model.class_index
    ]
    answers = _read_answers(args)
    if len(answers) != len(features):
        raise UsageError(
            f"expected {len(features)} answers, got {len(answers)}"
        )
    values = [None] * len(model.schema)
    for (i, spec), token in zip(features, answers):
        values[i] = _normalize_answer(token, spec)
    label, dist = classify(model, tuple(values))
    class_name = model.schema[model.class_index].name
    print(f"Prediction: {class_name}={label}")
    dist_text = ", ".join(f"{v}={dist[v]:.3f}" for v in model.class_values)
    print(f"Distribution: {dist_text}")
    ruleset = extract_rules(model)
    matched = [r for r in ruleset.rules if r.matches(tuple(values))]
    if matched:
        best = max(
            range(len(matched)),
            key=lambda i: (matched[i].accuracy, matched[i].coverage, -i),
        )
        print(
            "Matched rule: "
            + rule_text(matched[best], model.schema, class_name)
        )
    else:
        print(f"Matched rule: none (default {class_name}={ruleset.default_class})")
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, FileNotFoundError, IsADirectoryError, UsageError) as e:
        print(f"ldscreen: error: {e}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as e:
        print(f"ldscreen: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
