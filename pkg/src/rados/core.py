"""Signatures, Rademacher observations and the samplers that generate them.

A signature is a vector sigma in {-1, +1}^m.  Its rado is the sum of the edge
vectors y_i * x_i over the examples where sigma_i == y_i.  Batches of
signatures are stored as (n, m) int8 arrays.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dataset import Dataset
from .errors import DatasetError

ENUMERATION_LIMIT = 20
_CHUNK = 1 << 14


@dataclass(frozen=True)
class Rado:
    values: np.ndarray
    support_size: int


@dataclass
class RadoSet:
    """n rados over d features, plus how they were produced.

    ``signatures`` is kept when the generator knows them (it is never needed by
    the learner).  ``metadata`` carries provenance details such as the DP
    acceptance window.
    """

    values: np.ndarray
    support: np.ndarray
    provenance: str = "unknown"
    signatures: Optional[np.ndarray] = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.atleast_2d(np.asarray(self.values, dtype=np.float64))
        self.support = np.asarray(self.support, dtype=np.int64).ravel()
        if self.support.shape[0] != self.values.shape[0]:
            raise ValueError("one support size per rado is required")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]

    def __len__(self):
        return self.n

    def __getitem__(self, j) -> Rado:
        return Rado(self.values[j], int(self.support[j]))

    def column_max(self) -> np.ndarray:
        """pi_{*k} = max_j |pi_jk| for every feature k."""
        return np.abs(self.values).max(axis=0)

    def to_csv(self, feature_names=None) -> str:
        names = list(feature_names) if feature_names else [f"x{k}" for k in range(self.d)]
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(names + ["support_size", "provenance"])
        for row, s in zip(self.values, self.support):
            writer.writerow([repr(float(v)) for v in row] + [int(s), self.provenance])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "RadoSet":
        rows = list(csv.reader(io.StringIO(text)))
        header, body = rows[0], [r for r in rows[1:] if r]
        d = len(header) - 2
        values = np.array([[float(v) for v in r[:d]] for r in body]).reshape(len(body), d)
        support = [int(r[d]) for r in body]
        provenance = body[0][d + 1] if body else "unknown"
        return cls(values, support, provenance)

    def to_json(self) -> str:
        return json.dumps({
            "provenance": self.provenance,
            "n": self.n,
            "d": self.d,
            "values": self.values.tolist(),
            "support": self.support.tolist(),
            "metadata": self.metadata,
        }, default=_jsonable)

    @classmethod
    def from_json(cls, text: str) -> "RadoSet":
        obj = json.loads(text)
        values = np.asarray(obj["values"], dtype=np.float64).reshape(obj["n"], obj["d"])
        return cls(values, obj["support"], obj["provenance"], metadata=obj.get("metadata", {}))


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"{type(obj).__name__} is not JSON serializable")


def _check_signatures(sigmas: np.ndarray, m: int) -> np.ndarray:
    sigmas = np.atleast_2d(np.asarray(sigmas))
    if sigmas.shape[1] != m:
        raise DatasetError(f"signature length {sigmas.shape[1]} does not match m={m}")
    if not np.all((sigmas == 1) | (sigmas == -1)):
        raise DatasetError("signature entries must be -1 or +1")
    return sigmas


def compute_rado(dataset: Dataset, sigma) -> Rado:
    """Rado of a single signature."""
    sigma = _check_signatures(sigma, dataset.m)[0]
    selected = sigma == dataset.y
    values = np.zeros(dataset.d)
    for e in dataset.edges[selected]:
        values += e
    return Rado(values, int(selected.sum()))


def compute_rados(dataset: Dataset, sigmas, provenance: str = "given") -> RadoSet:
    """Rados of a batch of signatures, as one matrix product S^T E."""
    sigmas = _check_signatures(sigmas, dataset.m)
    edges = dataset.edges
    values = np.empty((sigmas.shape[0], dataset.d))
    support = np.empty(sigmas.shape[0], dtype=np.int64)
    for start in range(0, sigmas.shape[0], _CHUNK):
        selection = (sigmas[start:start + _CHUNK] == dataset.y).astype(np.float64)
        values[start:start + _CHUNK] = selection @ edges
        support[start:start + _CHUNK] = selection.sum(axis=1)
    return RadoSet(values, support, provenance, sigmas.astype(np.int8))


def mean_operator(dataset: Dataset) -> np.ndarray:
    return dataset.edges.mean(axis=0)


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_uniform_signatures(m: int, n: int, seed=0) -> np.ndarray:
    """n i.i.d. Rademacher signatures of length m."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    bits = _rng(seed).integers(0, 2, size=(n, m), dtype=np.int8)
    return 2 * bits - 1


def sample_fixed_support_signatures(labels, m_star: int, n: int, seed=0) -> np.ndarray:
    """n signatures agreeing with ``labels`` on exactly ``m_star`` positions.

    Each support set is a uniformly random m_star-subset (prefix of a
    Fisher-Yates shuffle); the n draws are independent.
    """
    y = np.asarray(labels, dtype=np.int8)
    m = y.shape[0]
    if not 0 <= m_star <= m:
        raise ValueError(f"m_star={m_star} outside [0, {m}]")
    rng = _rng(seed)
    sigmas = np.tile(-y, (n, 1))
    for j in range(n):
        support = rng.permutation(m)[:m_star]
        sigmas[j, support] = y[support]
    return sigmas


def all_signatures(m: int) -> np.ndarray:
    """Every signature in {-1, +1}^m, lexicographic with -1 < +1."""
    codes = np.arange(2 ** m, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(m - 1, -1, -1)) & 1
    return (2 * bits - 1).astype(np.int8)


def enumerate_all_rados(dataset: Dataset, limit: int = ENUMERATION_LIMIT) -> RadoSet:
    if dataset.m > limit:
        raise DatasetError(f"m={dataset.m} exceeds the enumeration limit {limit}")
    return compute_rados(dataset, all_signatures(dataset.m), "exhaustive")


def uniform_rados(dataset: Dataset, n: int, seed=0) -> RadoSet:
    sigmas = sample_uniform_signatures(dataset.m, n, seed)
    return compute_rados(dataset, sigmas, "uniform")


def fixed_support_rados(dataset: Dataset, m_star: int, n: int, seed=0) -> RadoSet:
    sigmas = sample_fixed_support_signatures(dataset.y, m_star, n, seed)
    return compute_rados(dataset, sigmas, f"fixed-support m*={m_star}")
