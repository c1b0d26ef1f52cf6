"""Labeled binary datasets: CSV loading, edge vectors and stratified folds."""

from __future__ import annotations

import csv
import json
import os
import re
import warnings
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Iterable, Union

import numpy as np

from .errors import DatasetError

PositiveRule = Union[str, float, Iterable[str], Callable[[str], bool]]

_THRESHOLD = re.compile(r"^\s*(>=|<=|==|!=|>|<)\s*([-+0-9.eE]+)\s*$")


@dataclass(frozen=True)
class Dataset:
    """m examples over d real features with labels in {-1, +1}.

    ``X`` has shape (m, d) and ``y`` shape (m,).  Arrays are made read-only
    on construction so a dataset can be shared between workers.
    """

    X: np.ndarray
    y: np.ndarray
    feature_names: tuple = ()
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        X = np.array(self.X, dtype=np.float64)
        y = np.array(self.y, dtype=np.int64).ravel()
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        if X.ndim != 2 or X.shape[0] == 0 or X.shape[1] == 0:
            raise DatasetError(f"expected a non-empty (m, d) feature matrix, got shape {X.shape}")
        if y.shape[0] != X.shape[0]:
            raise DatasetError(f"{X.shape[0]} observations but {y.shape[0]} labels")
        if not np.all(np.isin(y, (-1, 1))):
            raise DatasetError("labels must be -1 or +1")
        if not np.all(np.isfinite(X)):
            raise DatasetError("features contain NaN or infinite values")
        X.flags.writeable = False
        y.flags.writeable = False
        names = tuple(self.feature_names) or tuple(f"x{k}" for k in range(X.shape[1]))
        if len(names) != X.shape[1]:
            raise DatasetError(f"{len(names)} feature names for {X.shape[1]} features")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "feature_names", names)

    @property
    def m(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    @property
    def edges(self) -> np.ndarray:
        """All edge vectors y_i * x_i as an (m, d) array."""
        return self.y[:, None] * self.X

    def subset(self, index) -> "Dataset":
        return Dataset(self.X[index], self.y[index], self.feature_names, dict(self.metadata))

    def with_features(self, X: np.ndarray) -> "Dataset":
        return Dataset(X, self.y, self.feature_names, dict(self.metadata))

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.feature_names == other.feature_names
            and np.array_equal(self.X, other.X)
            and np.array_equal(self.y, other.y)
        )

    __hash__ = None


def edge_vector(x, y: int) -> np.ndarray:
    """Return y * x for one example."""
    return y * np.asarray(x, dtype=np.float64)


def max_abs_scale(dataset: Dataset) -> Dataset:
    """Divide each feature by its largest absolute value (zero columns kept)."""
    scale = np.abs(dataset.X).max(axis=0)
    scale[scale == 0] = 1.0
    return dataset.with_features(dataset.X / scale)


def _label_mapper(rule: PositiveRule) -> Callable[[str], bool]:
    if callable(rule):
        return rule
    if isinstance(rule, (int, float)) and not isinstance(rule, bool):
        threshold = float(rule)
        return lambda v: float(v) > threshold
    if isinstance(rule, str):
        match = _THRESHOLD.match(rule)
        if match:
            op, value = match.group(1), float(match.group(2))
            compare = {
                ">": float.__gt__, ">=": float.__ge__, "<": float.__lt__,
                "<=": float.__le__, "==": float.__eq__, "!=": float.__ne__,
            }[op]
            return lambda v: compare(float(v), value)
        values = {s.strip() for s in rule.split(",")}
        return lambda v: v.strip() in values
    values = {str(s).strip() for s in rule}
    return lambda v: v.strip() in values


def load_csv(path, label_column: Union[str, int] = -1, positive_rule: PositiveRule = ">0",
             header: bool = True, scale: bool = False) -> Dataset:
    """Load a binary classification dataset from a CSV file.

    ``positive_rule`` maps raw label cells to +1: a threshold string such as
    ``"> 5"``, a comma separated value list (``"A,B"``), an iterable of values,
    or a predicate.  Everything else becomes -1.  Every non-label cell must
    parse as a real number; missing values are rejected.
    """
    with open(path, newline="") as handle:
        rows = [row for row in csv.reader(handle) if row]
    if header:
        if not rows:
            raise DatasetError(f"{path}: empty file")
        names, rows = [c.strip() for c in rows[0]], rows[1:]
    else:
        names = None
    if not rows:
        raise DatasetError(f"{path}: no data rows")

    width = len(rows[0])
    if names is not None and len(names) != width:
        raise DatasetError(f"{path}: header has {len(names)} columns, first row has {width}")
    if isinstance(label_column, str):
        if names is None or label_column not in names:
            raise DatasetError(f"{path}: label column {label_column!r} not found")
        label_idx = names.index(label_column)
    else:
        label_idx = label_column % width if -width <= label_column < width else None
        if label_idx is None:
            raise DatasetError(f"{path}: label column index {label_column} out of range")

    is_positive = _label_mapper(positive_rule)
    X = np.empty((len(rows), width - 1))
    y = np.empty(len(rows), dtype=np.int64)
    for r, row in enumerate(rows):
        line = r + 1 + int(header)
        if len(row) != width:
            raise DatasetError(f"{path}: line {line} has {len(row)} columns, expected {width}")
        features = row[:label_idx] + row[label_idx + 1:]
        for c, cell in enumerate(features):
            try:
                X[r, c] = float(cell)
            except ValueError:
                column = c if c < label_idx else c + 1
                raise DatasetError(
                    f"{path}: line {line}, column {column}: cannot parse {cell!r} as a number"
                ) from None
        try:
            y[r] = 1 if is_positive(row[label_idx]) else -1
        except ValueError:
            raise DatasetError(
                f"{path}: line {line}: label {row[label_idx]!r} does not fit rule {positive_rule!r}"
            ) from None

    if names is None:
        feature_names = tuple(f"x{k}" for k in range(width - 1))
        label_name = "label"
    else:
        feature_names = tuple(names[:label_idx] + names[label_idx + 1:])
        label_name = names[label_idx]
    if len(np.unique(y)) < 2:
        warnings.warn(f"{path}: all examples have label {y[0]:+d}", stacklevel=2)
    meta = {
        "source": os.fspath(path),
        "label_column": label_name,
        "positive_rule": positive_rule if isinstance(positive_rule, (str, int, float)) else repr(positive_rule),
        "scaled": bool(scale),
    }
    ds = Dataset(X, y, feature_names, meta)
    return max_abs_scale(ds) if scale else ds


def save_csv(dataset: Dataset, path, label_name: str = "label") -> None:
    """Write a dataset with a trailing label column holding -1/1.

    Reading the file back with ``load_csv(path, label_name, ">0")`` gives an
    equal dataset (floats are written with ``repr``).
    """
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(list(dataset.feature_names) + [label_name])
        for x, label in zip(dataset.X, dataset.y):
            writer.writerow([repr(float(v)) for v in x] + [int(label)])


def load_haberman() -> Dataset:
    """Haberman's survival data (306 patients, 3 features) shipped with the package.

    The positive class is death within five years of surgery.
    """
    ref = resources.files("rados") / "data" / "haberman.csv"
    with resources.as_file(ref) as path:
        ds = load_csv(path, "status", {"positive"})
    return ds


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignments: np.ndarray
    seed: int = 0

    def test_index(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)

    def train_index(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)

    def split(self, dataset: Dataset, fold: int):
        """Return (train, test) datasets for one fold."""
        return dataset.subset(self.train_index(fold)), dataset.subset(self.test_index(fold))

    def fold_sizes(self) -> np.ndarray:
        return np.bincount(self.assignments, minlength=self.k)

    def to_json(self) -> str:
        return json.dumps({"k": self.k, "seed": self.seed, "assignments": self.assignments.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "FoldPlan":
        obj = json.loads(text)
        return cls(obj["k"], np.asarray(obj["assignments"], dtype=np.int64), obj.get("seed", 0))


def stratified_folds(dataset: Dataset, k: int = 10, seed: int = 0) -> FoldPlan:
    """Assign examples to k folds preserving class proportions.

    Within each class the examples are shuffled and dealt round-robin; the
    dealing position carries over from one class to the next so fold sizes
    differ by at most one.
    """
    if k < 2:
        raise DatasetError("need at least 2 folds")
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0x5F01D]))
    assignments = np.empty(dataset.m, dtype=np.int64)
    offset = 0
    for label in (1, -1):
        members = np.flatnonzero(dataset.y == label)
        if len(members) < k:
            raise DatasetError(f"class {label:+d} has {len(members)} examples, fewer than k={k}")
        members = rng.permutation(members)
        assignments[members] = (offset + np.arange(len(members))) % k
        offset = (offset + len(members)) % k
    return FoldPlan(k, assignments, seed)


def folds_are_stratified(dataset: Dataset, plan: FoldPlan) -> bool:
    """Check that each fold holds floor or ceil of n_c / k examples of every class."""
    for label in (1, -1):
        counts = np.bincount(plan.assignments[dataset.y == label], minlength=plan.k)
        total = counts.sum()
        if counts.min() < total // plan.k or counts.max() > -(-total // plan.k):
            return False
    return bool(plan.fold_sizes().min() > 0)

