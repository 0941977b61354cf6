"""Tabular dataset schema, ingestion, and sampling primitives.

A :class:`DataTable` stores a mixed nominal/numeric table as one float
matrix: nominal cells hold the index of their value in the attribute's
domain, numeric cells hold the raw value, and missing cells hold NaN.
The class column is binary (0 = negative, 1 = positive) and never
missing.  Tables are immutable once built; every sampling operation is a
pure function of its inputs and an explicit seed.
"""

from __future__ import annotations

import hashlib
import io
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .seeds import generator

__all__ = [
    "Attribute",
    "DataTable",
    "FeatureMask",
    "FoldPlan",
    "IngestionError",
    "IngestionReport",
    "CLEVELAND_SCHEMA",
    "CLEVELAND_CLASS_LABELS",
    "load_cleveland",
    "load_csv",
    "read_schema_sidecar",
    "stratified_folds",
    "bootstrap_sample",
    "random_subspace",
    "full_mask",
    "project",
    "project_instance",
]

MISSING = "?"


class IngestionError(ValueError):
    """Raised when an input file cannot be parsed into a DataTable."""


@dataclass(frozen=True)
class Attribute:
    """One column of a schema: ``values`` lists the nominal domain, or is
    None for a numeric attribute."""

    name: str
    values: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.values is not None:
            if len(self.values) == 0:
                raise ValueError(f"attribute {self.name!r}: empty nominal domain")
            if len(set(self.values)) != len(self.values):
                raise ValueError(f"attribute {self.name!r}: duplicate nominal values")

    @property
    def is_nominal(self) -> bool:
        return self.values is not None

    def encode(self, raw: str | float | None) -> float:
        """Encode one raw cell value to its float representation (NaN = missing)."""
        if raw is None or raw == MISSING:
            return math.nan
        if self.values is None:
            return float(raw)
        label = _canonical_label(raw)
        try:
            return float(self.values.index(label))
        except ValueError:
            raise ValueError(f"value {raw!r} not in domain of attribute {self.name!r}")

    def decode(self, cell: float) -> str | float:
        if math.isnan(cell):
            return MISSING
        if self.values is None:
            return cell
        return self.values[int(cell)]


def _canonical_label(raw: str | float) -> str:
    """Nominal labels are matched after float normalization, so the file
    cell '3.0' finds the domain label '3'."""
    if isinstance(raw, str):
        raw = raw.strip()
        try:
            value = float(raw)
        except ValueError:
            return raw
    else:
        value = float(raw)
    if value == int(value):
        return str(int(value))
    return repr(value)


def schema_fingerprint(schema: tuple[Attribute, ...], class_labels: tuple[str, str]) -> str:
    parts = []
    for a in schema:
        kind = "numeric" if a.values is None else "nominal(" + ",".join(a.values) + ")"
        parts.append(f"{a.name}:{kind}")
    parts.append("class:" + ",".join(class_labels))
    return hashlib.sha256("|".join(parts).encode("utf-8")).hexdigest()[:16]


class DataTable:
    """Immutable schema-typed table with a binary class column.

    Parameters
    ----------
    schema : sequence of Attribute
    class_labels : (negative, positive) label pair
    X : (n, p) float array; nominal cells are domain indices, NaN = missing
    y : (n,) integer array of 0/1 class codes
    weights : optional (n,) nonnegative instance weights, default 1
    """

    __slots__ = ("schema", "class_labels", "X", "y", "weights", "fingerprint")

    def __init__(self, schema, class_labels, X, y, weights=None):
        schema = tuple(schema)
        names = [a.name for a in schema]
        if len(set(names)) != len(names):
            raise ValueError("attribute names must be unique")
        class_labels = tuple(class_labels)
        if len(class_labels) != 2 or class_labels[0] == class_labels[1]:
            raise ValueError("class_labels must be two distinct labels")

        X = np.array(X, dtype=np.float64)
        y = np.array(y, dtype=np.int8)
        if X.ndim != 2 or X.shape[1] != len(schema):
            raise ValueError(f"X must be (n, {len(schema)}), got {X.shape}")
        if y.shape != (X.shape[0],):
            raise ValueError("y length must match X rows")
        if not np.isin(y, (0, 1)).all():
            raise ValueError("class column must be 0/1 and never missing")
        for j, attr in enumerate(schema):
            if attr.values is not None:
                col = X[:, j]
                ok = np.isnan(col) | ((col == np.floor(col)) & (col >= 0) & (col < len(attr.values)))
                if not ok.all():
                    raise ValueError(f"attribute {attr.name!r}: cell outside nominal domain")
        if weights is None:
            weights = np.ones(X.shape[0])
        weights = np.array(weights, dtype=np.float64)
        if weights.shape != (X.shape[0],) or not (np.isfinite(weights) & (weights >= 0)).all():
            raise ValueError("weights must be nonnegative, one per row")

        for arr in (X, y, weights):
            arr.setflags(write=False)
        self.schema = schema
        self.class_labels = class_labels
        self.X = X
        self.y = y
        self.weights = weights
        self.fingerprint = schema_fingerprint(schema, class_labels)

    def __setattr__(self, name, value):
        if hasattr(self, "fingerprint"):
            raise AttributeError("DataTable is immutable")
        object.__setattr__(self, name, value)

    @property
    def n_rows(self) -> int:
        return self.X.shape[0]

    @property
    def n_attrs(self) -> int:
        return self.X.shape[1]

    def class_counts(self) -> tuple[int, int]:
        pos = int(self.y.sum())
        return self.n_rows - pos, pos

    def take(self, indices) -> "DataTable":
        """Row subset/resample (copying), preserving schema and weights."""
        idx = np.asarray(indices, dtype=np.intp)
        return DataTable(self.schema, self.class_labels, self.X[idx], self.y[idx], self.weights[idx])

    @classmethod
    def from_rows(cls, schema, class_labels, rows, weights=None):
        """Build from python rows of raw values: nominal cells as labels,
        numerics as numbers, None/'?' as missing, last element the class label."""
        schema = tuple(schema)
        class_labels = tuple(class_labels)
        X = np.empty((len(rows), len(schema)))
        y = np.empty(len(rows), dtype=np.int8)
        for i, row in enumerate(rows):
            if len(row) != len(schema) + 1:
                raise ValueError(f"row {i}: expected {len(schema) + 1} cells, got {len(row)}")
            for j, attr in enumerate(schema):
                X[i, j] = attr.encode(row[j])
            try:
                y[i] = class_labels.index(str(row[-1]))
            except ValueError:
                raise ValueError(f"row {i}: class label {row[-1]!r} not in {class_labels}")
        return cls(schema, class_labels, X, y, weights)

    def __repr__(self):
        neg, pos = self.class_counts()
        return (f"DataTable({self.n_rows} rows, {self.n_attrs} attrs, "
                f"{self.class_labels[0]}={neg}/{self.class_labels[1]}={pos})")


@dataclass(frozen=True)
class FeatureMask:
    """Non-empty set of attribute indices, kept sorted."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(sorted(int(i) for i in self.indices))
        if len(idx) == 0:
            raise ValueError("feature mask must be non-empty")
        if len(set(idx)) != len(idx):
            raise ValueError("feature mask indices must be unique")
        if idx[0] < 0:
            raise ValueError("feature mask indices must be nonnegative")
        object.__setattr__(self, "indices", idx)

    def __len__(self):
        return len(self.indices)

    def validate_for(self, n_attrs: int) -> None:
        if self.indices[-1] >= n_attrs:
            raise ValueError(f"mask index {self.indices[-1]} out of range for {n_attrs} attributes")


def full_mask(n_attrs: int) -> FeatureMask:
    return FeatureMask(tuple(range(n_attrs)))


@dataclass(frozen=True)
class FoldPlan:
    """Assignment of every row to one of k folds."""

    k: int
    assignments: np.ndarray
    seed: int

    def __post_init__(self):
        arr = np.array(self.assignments, dtype=np.intp)
        arr.setflags(write=False)
        object.__setattr__(self, "assignments", arr)

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)


# ---------------------------------------------------------------------------
# Cleveland ingestion

CLEVELAND_SCHEMA: tuple[Attribute, ...] = (
    Attribute("age"),
    Attribute("sex", ("0", "1")),
    Attribute("cp", ("1", "2", "3", "4")),
    Attribute("trestbps"),
    Attribute("chol"),
    Attribute("fbs", ("0", "1")),
    Attribute("restecg", ("0", "1", "2")),
    Attribute("thalach"),
    Attribute("exang", ("0", "1")),
    Attribute("oldpeak"),
    Attribute("slope", ("1", "2", "3")),
    Attribute("ca"),
    Attribute("thal", ("3", "6", "7")),
)

CLEVELAND_CLASS_LABELS = ("absent", "present")


@dataclass(frozen=True)
class IngestionReport:
    """Load-time accounting: which cells were imputed and how many."""

    n_rows: int
    imputed: tuple[tuple[int, str], ...] = field(default_factory=tuple)

    @property
    def n_imputed_cells(self) -> int:
        return len(self.imputed)


def _open_text(source) -> io.TextIOBase:
    if isinstance(source, (str, os.PathLike)):
        return open(source, "r", encoding="utf-8")
    if isinstance(source, bytes):
        return io.StringIO(source.decode("utf-8"))
    if isinstance(source, io.TextIOBase):
        return source
    # binary stream
    return io.TextIOWrapper(source, encoding="utf-8")


def _parse_rows(stream, schema, n_fields, label_of, first_line=1):
    """Parse comma-separated lines into (cells, label, line_no) triples."""
    rows = []
    for offset, line in enumerate(stream):
        line = line.strip()
        if not line:
            continue
        line_no = first_line + offset
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != n_fields:
            raise IngestionError(f"line {line_no}: expected {n_fields} fields, got {len(fields)}")
        cells = np.empty(len(schema))
        for j, attr in enumerate(schema):
            raw = fields[j]
            if raw == MISSING:
                cells[j] = np.nan
                continue
            try:
                cells[j] = attr.encode(raw)
            except ValueError as exc:
                raise IngestionError(f"line {line_no}, field {attr.name!r}: {exc}") from None
        try:
            label = label_of(fields[-1], line_no)
        except IngestionError:
            raise
        except Exception:
            raise IngestionError(f"line {line_no}, field 'class': bad value {fields[-1]!r}") from None
        rows.append((cells, label, line_no))
    return rows


def _impute(X, schema):
    """Fill NaN cells in place: column mode for nominal, median for numeric,
    both computed over the whole file.  Returns ((row, attr name), ...)."""
    filled = []
    for j, attr in enumerate(schema):
        col = X[:, j]
        nan_rows = np.flatnonzero(np.isnan(col))
        if nan_rows.size == 0:
            continue
        observed = col[~np.isnan(col)]
        if observed.size == 0:
            raise IngestionError(f"attribute {attr.name!r}: all values missing, cannot impute")
        if attr.is_nominal:
            counts = np.bincount(observed.astype(np.intp), minlength=len(attr.values))
            fill = float(np.argmax(counts))
        else:
            fill = float(np.median(observed))
        col[nan_rows] = fill
        filled.extend((int(r), attr.name) for r in nan_rows)
    return tuple(sorted(filled))


def load_cleveland(source, impute: bool = True) -> tuple[DataTable, IngestionReport]:
    """Load the processed-Cleveland CSV layout (13 attributes + ``num``).

    ``num`` is binarized: 0 -> negative ("absent"), 1..4 -> positive
    ("present").  '?' cells are imputed (mode for nominal, median for
    numeric, computed over the whole file); the report lists them.
    """

    def label_of(raw, line_no):
        try:
            value = int(float(raw))
        except ValueError:
            raise IngestionError(f"line {line_no}, field 'num': bad value {raw!r}") from None
        if value not in (0, 1, 2, 3, 4):
            raise IngestionError(f"line {line_no}, field 'num': value {raw!r} outside 0-4")
        return 0 if value == 0 else 1

    stream = _open_text(source)
    with stream:
        parsed = _parse_rows(stream, CLEVELAND_SCHEMA, len(CLEVELAND_SCHEMA) + 1, label_of)
    if not parsed:
        raise IngestionError("empty input: no data rows")
    X = np.stack([cells for cells, _, _ in parsed])
    y = np.array([label for _, label, _ in parsed], dtype=np.int8)
    imputed = _impute(X, CLEVELAND_SCHEMA) if impute else ()
    if not impute and np.isnan(X).any():
        raise IngestionError("missing cells present and imputation disabled")
    table = DataTable(CLEVELAND_SCHEMA, CLEVELAND_CLASS_LABELS, X, y)
    return table, IngestionReport(n_rows=table.n_rows, imputed=imputed)


# ---------------------------------------------------------------------------
# Generic CSV + schema sidecar

def read_schema_sidecar(source) -> tuple[tuple[Attribute, ...], tuple[str, str]]:
    """Parse a sidecar schema file: one ``name: kind`` line per attribute,
    nominal domains comma-separated in parentheses, and the final line
    describing the class column, e.g.::

        age: numeric
        cp: nominal(1,2,3,4)
        diagnosis: nominal(absent,present)

    The last line is the class attribute and must be nominal with exactly
    two values, negative label first.
    """
    stream = _open_text(source)
    with stream:
        lines = [ln.strip() for ln in stream if ln.strip() and not ln.lstrip().startswith("#")]
    if len(lines) < 2:
        raise IngestionError("schema sidecar needs at least one attribute and a class line")
    attrs = []
    for ln in lines:
        name, _, kind = ln.partition(":")
        name, kind = name.strip(), kind.strip()
        if not name or not kind:
            raise IngestionError(f"bad schema line: {ln!r}")
        if kind == "numeric":
            attrs.append(Attribute(name))
        elif kind.startswith("nominal(") and kind.endswith(")"):
            values = tuple(v.strip() for v in kind[len("nominal("):-1].split(","))
            attrs.append(Attribute(name, values))
        else:
            raise IngestionError(f"bad kind {kind!r} in schema line: {ln!r}")
    class_attr = attrs.pop()
    if class_attr.values is None or len(class_attr.values) != 2:
        raise IngestionError("class line must be nominal with exactly two values")
    return tuple(attrs), class_attr.values


def load_csv(source, schema_source, impute: bool = True) -> tuple[DataTable, IngestionReport]:
    """Load a headered CSV against a schema sidecar (see
    :func:`read_schema_sidecar`).  Header names must match the sidecar,
    class column last; '?' denotes missing."""
    schema, class_labels = read_schema_sidecar(schema_source)
    stream = _open_text(source)
    with stream:
        header_line = stream.readline().strip()
        if not header_line:
            raise IngestionError("empty input: no header")
        header = [h.strip() for h in header_line.split(",")]
        expected = [a.name for a in schema] + ["<class>"]
        if len(header) != len(expected):
            raise IngestionError(f"header has {len(header)} fields, schema expects {len(expected)}")
        for got, attr in zip(header, schema):
            if got != attr.name:
                raise IngestionError(f"header field {got!r} does not match schema attribute {attr.name!r}")

        def label_of(raw, line_no):
            raw = raw.strip()
            if raw not in class_labels:
                raise IngestionError(f"line {line_no}, field {header[-1]!r}: "
                                     f"label {raw!r} not in {class_labels}")
            return class_labels.index(raw)

        parsed = _parse_rows(stream, schema, len(schema) + 1, label_of, first_line=2)
    if not parsed:
        raise IngestionError("empty input: no data rows")
    X = np.stack([cells for cells, _, _ in parsed])
    y = np.array([label for _, label, _ in parsed], dtype=np.int8)
    imputed = _impute(X, schema) if impute else ()
    if not impute and np.isnan(X).any():
        raise IngestionError("missing cells present and imputation disabled")
    table = DataTable(schema, class_labels, X, y)
    return table, IngestionReport(n_rows=table.n_rows, imputed=imputed)


# ---------------------------------------------------------------------------
# Sampling primitives

def stratified_folds(table: DataTable, k: int, seed: int) -> FoldPlan:
    """Deal rows into k folds, stratified by class.

    Within each class the shuffled members are dealt round-robin; each
    class continues where the previous one stopped, so total fold sizes
    differ by at most one and per-class counts by at most one.  A class
    with fewer than k members simply leaves some folds without it.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if k > table.n_rows:
        raise ValueError(f"k={k} exceeds row count {table.n_rows}")
    rng = generator(seed)
    assignments = np.empty(table.n_rows, dtype=np.intp)
    offset = 0
    for cls in (0, 1):
        members = np.flatnonzero(table.y == cls)
        members = members[rng.permutation(members.size)]
        assignments[members] = (offset + np.arange(members.size)) % k
        offset = (offset + members.size) % k
    return FoldPlan(k=k, assignments=assignments, seed=seed)


def unstratified_folds(table: DataTable, k: int, seed: int) -> FoldPlan:
    """Plain shuffled round-robin folds (no class balancing)."""
    if k < 2:
        raise ValueError("k must be >= 2")
    if k > table.n_rows:
        raise ValueError(f"k={k} exceeds row count {table.n_rows}")
    rng = generator(seed)
    order = rng.permutation(table.n_rows)
    assignments = np.empty(table.n_rows, dtype=np.intp)
    assignments[order] = np.arange(table.n_rows) % k
    return FoldPlan(k=k, assignments=assignments, seed=seed)


def bootstrap_sample(table: DataTable, seed: int) -> DataTable:
    """Uniform with-replacement resample of the same size."""
    if table.n_rows == 0:
        raise ValueError("cannot bootstrap an empty table")
    rng = generator(seed)
    idx = rng.integers(0, table.n_rows, size=table.n_rows)
    return table.take(idx)


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def subspace_size(n_attrs: int, fraction: float) -> int:
    return max(1, _round_half_up(fraction * n_attrs))


def random_subspace(schema, fraction: float, seed: int) -> FeatureMask:
    """Uniform random attribute subset of size max(1, round-half-up(fraction*p))."""
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    p = len(schema)
    size = subspace_size(p, fraction)
    rng = generator(seed)
    picked = rng.permutation(p)[:size]
    return FeatureMask(tuple(int(i) for i in picked))


def project(table: DataTable, mask: FeatureMask) -> DataTable:
    """Restrict a table to the masked attributes (class column retained)."""
    mask.validate_for(table.n_attrs)
    idx = np.asarray(mask.indices, dtype=np.intp)
    schema = tuple(table.schema[i] for i in mask.indices)
    return DataTable(schema, table.class_labels, table.X[:, idx], table.y, table.weights)


def project_instance(x: np.ndarray, mask: FeatureMask) -> np.ndarray:
    return np.asarray(x)[np.asarray(mask.indices, dtype=np.intp)]
