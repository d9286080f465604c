"""Dataset schema, ARFF/CSV parsing and serialization, imputation, fold splitting.

A dataset is a fixed schema (list of attribute specs) plus a list of
instances whose values are aligned to the schema order.  Missing values are
represented in memory by ``None``; the on-disk token is ``'?'`` (ARFF and
CSV) or an empty CSV cell.  Datasets are immutable after construction and
every operation here is a pure function of its inputs (plus a seed), so
they are safe to share across threads.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field

BINARY = "binary"
NOMINAL = "nominal"
NUMERIC = "numeric"


class ParseError(ValueError):
    """Malformed ARFF/CSV input. Carries the 1-based source line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class AttributeSpec:
    """One column of a schema.

    Parameters
    ----------
    name : str
        Attribute name, unique within a schema.
    kind : str
        One of ``binary``, ``nominal``, ``numeric``.
    values : tuple of str
        Declared symbols, in declaration order.  Exactly two for binary,
        at least two for nominal, empty for numeric.
    """

    name: str
    kind: str
    values: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if not self.name or any(c in self.name for c in " \t,{}%'\""):
            raise ValueError(f"invalid attribute name: {self.name!r}")
        if self.kind == NUMERIC:
            if self.values:
                raise ValueError(f"numeric attribute {self.name} must not declare values")
        elif self.kind == BINARY:
            if len(self.values) != 2:
                raise ValueError(f"binary attribute {self.name} needs exactly two values")
        elif self.kind == NOMINAL:
            if not self.values:
                raise ValueError(f"nominal attribute {self.name} declares no values")
        else:
            raise ValueError(f"unknown attribute kind: {self.kind}")

    @property
    def is_categorical(self):
        return self.kind in (BINARY, NOMINAL)

    @staticmethod
    def categorical(name, values):
        """Nominal spec; two declared values make it binary."""
        values = tuple(values)
        return AttributeSpec(name, BINARY if len(values) == 2 else NOMINAL, values)

    @staticmethod
    def numeric(name):
        return AttributeSpec(name, NUMERIC)


@dataclass(frozen=True)
class Instance:
    """One row; ``values`` aligned to schema order, ``weight`` > 0.

    Fractional weights arise from missing-value routing during tree
    induction; parsed data always starts at weight 1.
    """

    values: tuple
    weight: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if not self.weight > 0:
            raise ValueError(f"instance weight must be > 0, got {self.weight}")

    def reweighted(self, weight):
        return Instance(self.values, weight)


@dataclass(frozen=True)
class Dataset:
    """Schema + instances with a designated class attribute.

    The class attribute must be categorical.  Construction validates every
    instance against the schema: correct arity, declared symbols only,
    numbers in numeric columns.  Missing values (``None``) are allowed
    anywhere; training entry points reject datasets whose class column has
    gaps.
    """

    schema: tuple
    class_index: int
    instances: tuple = ()
    name: str = "dataset"

    def __post_init__(self):
        object.__setattr__(self, "schema", tuple(self.schema))
        object.__setattr__(self, "instances", tuple(self.instances))
        names = [a.name for a in self.schema]
        if len(set(names)) != len(names):
            raise ValueError("duplicate attribute names in schema")
        if not 0 <= self.class_index < len(self.schema):
            raise ValueError(f"class index {self.class_index} out of range")
        if not self.schema[self.class_index].is_categorical:
            raise ValueError("class attribute must be binary or nominal")
        for row, inst in enumerate(self.instances):
            _check_instance(self.schema, inst, row)

    @property
    def class_attribute(self):
        return self.schema[self.class_index]

    @property
    def class_values(self):
        return self.class_attribute.values

    @property
    def feature_indices(self):
        return tuple(i for i in range(len(self.schema)) if i != self.class_index)

    def __len__(self):
        return len(self.instances)

    def attribute_index(self, name):
        for i, spec in enumerate(self.schema):
            if spec.name == name:
                return i
        raise KeyError(f"no attribute named {name!r}")

    def column(self, index):
        return [inst.values[index] for inst in self.instances]

    def with_instances(self, instances):
        return Dataset(self.schema, self.class_index, instances, self.name)


def _check_instance(schema, inst, row):
    if len(inst.values) != len(schema):
        raise ValueError(
            f"instance {row}: expected {len(schema)} values, got {len(inst.values)}"
        )
    for spec, v in zip(schema, inst.values):
        if v is None:
            continue
        if spec.is_categorical:
            if v not in spec.values:
                raise ValueError(
                    f"instance {row}: {v!r} not declared for attribute {spec.name}"
                )
        elif not isinstance(v, (int, float)) or isinstance(v, bool):
            raise ValueError(
                f"instance {row}: non-numeric value {v!r} in numeric attribute {spec.name}"
            )


# ---------------------------------------------------------------------------
# Built-in screening checklist schema
# ---------------------------------------------------------------------------

#: The 16 symptom indicators of the screening checklist, in canonical order.
CHECKLIST_ATTRIBUTES = (
    ("DR", "Difficulty with Reading"),
    ("DS", "Difficulty with Spelling"),
    ("DH", "Difficulty with Handwriting"),
    ("DWE", "Difficulty with Written Expression"),
    ("DBA", "Difficulty with Basic Arithmetic skills"),
    ("DHA", "Difficulty with Higher Arithmetic skills"),
    ("DA", "Difficulty with Attention"),
    ("ED", "Easily Distracted"),
    ("DM", "Difficulty with Memory"),
    ("LM", "Lack of Motivation"),
    ("DSS", "Difficulty with Study Skills"),
    ("DNS", "Does Not like School"),
    ("DLL", "Difficulty Learning a Language"),
    ("DLS", "Difficulty Learning a Subject"),
    ("STL", "Slow To Learn"),
    ("RG", "Repeated a Grade"),
)

CHECKLIST_CLASS = "LD"


def checklist_schema():
    """Schema of the 16 binary Y/N symptom attributes plus the LD class.

    Values are declared as (N, Y) so that the positive state encodes to 1.
    """
    specs = [AttributeSpec(abbr, BINARY, ("N", "Y")) for abbr, _ in CHECKLIST_ATTRIBUTES]
    specs.append(AttributeSpec(CHECKLIST_CLASS, BINARY, ("N", "Y")))
    return tuple(specs)


def checklist_dataset(instances=()):
    """Empty (or pre-filled) dataset over the checklist schema."""
    schema = checklist_schema()
    return Dataset(schema, len(schema) - 1, instances, name="ld_checklist")


def synthetic_checklist(n_no=94, n_yes=31, seed=0, missing_rate=0.0):
    """Generate a synthetic screening dataset with the given class split.

    Each symptom is drawn class-conditionally: children labeled Y show each
    symptom with an attribute-specific high probability, children labeled N
    with a low one.  ``missing_rate`` knocks out symptom cells (never the
    class) to exercise imputation and fractional routing.
    """
    rng = random.Random(seed)
    p_yes = [rng.uniform(0.6, 0.95) for _ in CHECKLIST_ATTRIBUTES]
    p_no = [rng.uniform(0.05, 0.4) for _ in CHECKLIST_ATTRIBUTES]
    rows = []
    for label, probs, count in (("N", p_no, n_no), ("Y", p_yes, n_yes)):
        for _ in range(count):
            vals = ["Y" if rng.random() < p else "N" for p in probs]
            vals.append(label)
            rows.append(vals)
    rng.shuffle(rows)
    if missing_rate > 0:
        for vals in rows:
            for i in range(len(CHECKLIST_ATTRIBUTES)):
                if rng.random() < missing_rate:
                    vals[i] = None
    return checklist_dataset([Instance(tuple(v)) for v in rows])


# ---------------------------------------------------------------------------
# ARFF
# ---------------------------------------------------------------------------

_NUMERIC_KEYWORDS = {"numeric", "real", "integer"}


def parse_arff(text, class_name=None):
    """Parse an ARFF document into a Dataset.

    Supported subset: ``@relation``, ``@attribute name {v1,...}`` or
    ``@attribute name numeric|real|integer``, ``@data``, ``%`` comments,
    ``'?'`` missing markers.  The class defaults to the last declared
    categorical attribute.

    Raises
    ------
    ParseError
        On malformed declarations, undeclared symbols, or row arity
        mismatches; the error carries the offending line number.
    """
    relation = "dataset"
    specs = []
    instances = []
    in_data = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if not in_data:
            lowered = line.lower()
            if lowered.startswith("@relation"):
                parts = line.split(None, 1)
                if len(parts) == 2:
                    relation = parts[1].strip()
            elif lowered.startswith("@attribute"):
                specs.append(_parse_attribute_line(line, lineno))
            elif lowered.startswith("@data"):
                if not specs:
                    raise ParseError("@data before any @attribute", lineno)
                in_data = True
            else:
                raise ParseError(f"unrecognized declaration: {line}", lineno)
        else:
            instances.append(_parse_row(line.split(","), specs, lineno))
    if not in_data:
        raise ParseError("missing @data section", len(text.splitlines()) or 1)
    class_index = _resolve_class(specs, class_name)
    return Dataset(tuple(specs), class_index, instances, name=relation)


def _parse_attribute_line(line, lineno):
    body = line.split(None, 1)[1].strip() if len(line.split(None, 1)) == 2 else ""
    if not body:
        raise ParseError("@attribute needs a name and a type", lineno)
    if "{" in body:
        name, _, rest = body.partition("{")
        name = name.strip()
        values_part, brace, tail = rest.partition("}")
        if not brace or tail.strip():
            raise ParseError(f"malformed value set for attribute {name!r}", lineno)
        values = tuple(v.strip() for v in values_part.split(","))
        if any(not v for v in values):
            raise ParseError(f"empty symbol in value set of {name!r}", lineno)
        try:
            return AttributeSpec.categorical(name, values)
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from exc
    parts = body.split()
    if len(parts) != 2 or parts[1].lower() not in _NUMERIC_KEYWORDS:
        raise ParseError(f"unsupported attribute type: {body!r}", lineno)
    try:
        return AttributeSpec.numeric(parts[0])
    except ValueError as exc:
        raise ParseError(str(exc), lineno) from exc


def _parse_row(tokens, specs, lineno):
    if len(tokens) != len(specs):
        raise ParseError(
            f"expected {len(specs)} values, got {len(tokens)}", lineno
        )
    values = []
    for spec, token in zip(specs, tokens):
        token = token.strip()
        if token == "?" or token == "":
            values.append(None)
        elif spec.is_categorical:
            if token not in spec.values:
                raise ParseError(
                    f"symbol {token!r} not declared for attribute {spec.name}", lineno
                )
            values.append(token)
        else:
            try:
                values.append(float(token))
            except ValueError:
                raise ParseError(
                    f"non-numeric value {token!r} in numeric attribute {spec.name}",
                    lineno,
                ) from None
    return Instance(tuple(values))


def _resolve_class(specs, class_name):
    if class_name is not None:
        for i, spec in enumerate(specs):
            if spec.name == class_name:
                return i
        raise ParseError(f"no attribute named {class_name!r}")
    for i in range(len(specs) - 1, -1, -1):
        if specs[i].is_categorical:
            return i
    raise ParseError("no categorical attribute available as class")


def serialize_arff(dataset):
    """Render a Dataset in the same ARFF subset parse_arff accepts."""
    out = [f"@relation {dataset.name}", ""]
    for spec in dataset.schema:
        if spec.is_categorical:
            out.append(f"@attribute {spec.name} {{{','.join(spec.values)}}}")
        else:
            out.append(f"@attribute {spec.name} numeric")
    out.append("")
    out.append("@data")
    for inst in dataset.instances:
        out.append(",".join(_format_cell(v) for v in inst.values))
    return "\n".join(out) + "\n"


def _format_cell(v):
    if v is None:
        return "?"
    if isinstance(v, float):
        return repr(v)
    return str(v)


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------


def parse_csv(text, schema=None, has_header=True, class_name=None):
    """Parse CSV (RFC-4180 quoting) into a Dataset.

    With ``schema`` given, columns must match it positionally (the header,
    if present, is checked against the attribute names).  Without a schema,
    column kinds are inferred: numeric if every non-missing token parses as
    a number, else categorical with symbols in first-appearance order.
    Empty cells and ``'?'`` are missing.
    """
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r and any(cell.strip() for cell in r)]
    if not rows:
        raise ParseError("empty CSV input")
    header = None
    if has_header:
        header, rows = rows[0], rows[1:]
    if schema is not None:
        schema = tuple(schema)
        if header is not None and [h.strip() for h in header] != [a.name for a in schema]:
            raise ParseError("CSV header does not match the given schema")
        width = len(schema)
    else:
        width = len(header) if header is not None else len(rows[0])
    for lineno, row in enumerate(rows, start=2 if has_header else 1):
        if len(row) != width:
            raise ParseError(f"expected {width} columns, got {len(row)}", lineno)
    if schema is None:
        names = (
            [h.strip() for h in header]
            if header is not None
            else [f"a{i}" for i in range(width)]
        )
        schema = _infer_schema(names, rows)
    instances = [
        _parse_row(row, schema, lineno)
        for lineno, row in enumerate(rows, start=2 if has_header else 1)
    ]
    class_index = _resolve_class(schema, class_name)
    return Dataset(tuple(schema), class_index, instances)


def _infer_schema(names, rows):
    specs = []
    for col, name in enumerate(names):
        tokens = [r[col].strip() for r in rows]
        known = [t for t in tokens if t not in ("", "?")]
        if known and all(_is_number(t) for t in known):
            specs.append(AttributeSpec.numeric(name))
        else:
            symbols = []
            for t in known:
                if t not in symbols:
                    symbols.append(t)
            if not symbols:
                raise ParseError(f"column {name!r} is entirely missing; cannot infer a type")
            specs.append(AttributeSpec.categorical(name, symbols))
    return tuple(specs)


def _is_number(token):
    try:
        float(token)
        return True
    except ValueError:
        return False


def serialize_csv(dataset, has_header=True):
    """Render a Dataset as CSV; missing values become '?'."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if has_header:
        writer.writerow([a.name for a in dataset.schema])
    for inst in dataset.instances:
        writer.writerow([_format_cell(v) for v in inst.values])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Imputation
# ---------------------------------------------------------------------------


def impute_missing(dataset):
    """Replace every gap by the global column mean (numeric) or mode.

    Mode ties break by schema value order.  The input dataset is not
    modified; imputation is idempotent.

    Raises
    ------
    ValueError
        If some column is entirely missing (names the column).
    """
    fills = []
    for i, spec in enumerate(dataset.schema):
        column = dataset.column(i)
        known = [v for v in column if v is not None]
        if len(known) == len(column):
            fills.append(None)  # nothing to fill
            continue
        if not known:
            raise ValueError(f"attribute {spec.name} is entirely missing")
        if spec.is_categorical:
            counts = {v: 0 for v in spec.values}
            for v in known:
                counts[v] += 1
            fills.append(max(spec.values, key=lambda v: counts[v]))  # first max wins
        else:
            fills.append(sum(known) / len(known))
    if all(f is None for f in fills):
        return dataset
    instances = []
    for inst in dataset.instances:
        values = tuple(
            fills[i] if v is None else v for i, v in enumerate(inst.values)
        )
        instances.append(Instance(values, inst.weight))
    return dataset.with_instances(instances)


# ---------------------------------------------------------------------------
# Cross-validation folds
# ---------------------------------------------------------------------------


def stratified_folds(dataset, k, seed=0):
    """Split into k (train, test) pairs preserving class proportions.

    Test sets partition the instances; per-fold class counts deviate at
    most one instance from the exact proportional share.  Deterministic for
    a fixed seed.
    """
    _check_fold_args(dataset, k)
    rng = random.Random(seed)
    by_class = {}
    for idx, inst in enumerate(dataset.instances):
        label = inst.values[dataset.class_index]
        if label is None:
            raise ValueError(f"instance {idx} has a missing class value")
        by_class.setdefault(label, []).append(idx)
    fold_indices = [[] for _ in range(k)]
    cursor = 0  # continues across classes so no fold is starved (k near n)
    for label in dataset.class_values:
        indices = by_class.get(label, [])
        rng.shuffle(indices)
        for idx in indices:
            fold_indices[cursor % k].append(idx)
            cursor += 1
    return _folds_from_indices(dataset, fold_indices)


def random_folds(dataset, k, seed=0):
    """Unstratified variant: plain shuffled round-robin deal."""
    _check_fold_args(dataset, k)
    rng = random.Random(seed)
    indices = list(range(len(dataset)))
    rng.shuffle(indices)
    fold_indices = [indices[f::k] for f in range(k)]
    return _folds_from_indices(dataset, fold_indices)


def _check_fold_args(dataset, k):
    if k < 2:
        raise ValueError(f"need at least 2 folds, got {k}")
    if k > len(dataset):
        raise ValueError(f"cannot make {k} folds from {len(dataset)} instances")


def _folds_from_indices(dataset, fold_indices):
    folds = []
    for f, test_idx in enumerate(fold_indices):
        test_set = set(test_idx)
        test = [dataset.instances[i] for i in sorted(test_set)]
        train = [inst for i, inst in enumerate(dataset.instances) if i not in test_set]
        folds.append((dataset.with_instances(train), dataset.with_instances(test)))
    return folds
