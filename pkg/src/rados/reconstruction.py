"""Recovering edge vectors from rados, and why it can fail.

Matrices follow the column conventions of the algebra: the edge matrix E is
d x m (column i is y_i x_i), the rado matrix Pi is d x n, and the selection
matrix S is m x n with S[i, j] = 1 iff rado j sums edge i, so Pi = E S.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy import linalg
from scipy.spatial.distance import cdist

from .dataset import Dataset
from .errors import DatasetError, UnderdeterminedError

RANK_TOL = 1e-10


def build_gm(m: int) -> np.ndarray:
    """The m x 2^m binary matrix whose columns list every support pattern.

    Built by the block recursion G_m = [[0...0, 1...1], [G_{m-1}, G_{m-1}]]
    from G_1 = [0 1]; column c is the binary expansion of c, top row most
    significant.
    """
    if not 1 <= m <= 20:
        raise ValueError("m must lie in [1, 20]")
    g = np.array([[0, 1]], dtype=np.uint8)
    for _ in range(1, m):
        half = g.shape[1]
        top = np.concatenate([np.zeros(half, np.uint8), np.ones(half, np.uint8)])
        g = np.vstack([top, np.hstack([g, g])])
    return g


def signatures_to_selection(signatures, labels) -> np.ndarray:
    """m x n bit matrix with S[i, j] = 1 iff sigma_j[i] == y_i."""
    sigmas = np.atleast_2d(np.asarray(signatures))
    y = np.asarray(labels).ravel()
    if sigmas.shape[1] != y.shape[0]:
        raise DatasetError(f"signatures have length {sigmas.shape[1]}, labels {y.shape[0]}")
    return (sigmas == y).T.astype(np.uint8)


def selection_to_gm_index(selection: np.ndarray) -> np.ndarray:
    """Column index in G_m of each selection column."""
    S = np.asarray(selection, dtype=np.int64)
    m = S.shape[0]
    weights = 1 << np.arange(m - 1, -1, -1, dtype=np.int64)
    return weights @ S


def one_hot_u(selection: np.ndarray) -> np.ndarray:
    """The 2^m x n one-hot matrix U with G_m U equal to ``selection``."""
    index = selection_to_gm_index(selection)
    m, n = np.shape(selection)
    U = np.zeros((2 ** m, n), dtype=np.uint8)
    U[index, np.arange(n)] = 1
    return U


def edge_matrix(dataset: Dataset) -> np.ndarray:
    return dataset.edges.T.copy()


@dataclass
class Recovery:
    E: np.ndarray
    residual: float
    rank: int
    status: str = "recovered"

    def report(self) -> dict:
        return {"status": self.status, "rank": self.rank, "residual": self.residual,
                "d": int(self.E.shape[0]), "m": int(self.E.shape[1])}

    def to_json(self) -> str:
        return json.dumps(self.report())


def recover_edges(Pi, S) -> Recovery:
    """Solve E S = Pi for E through the normal equations E (S S^T) = Pi S^T.

    S S^T is factorized by Cholesky after a rank check on its eigenvalues
    (tolerance 1e-10 times its largest entry).  A rank below m means the rados
    do not pin the edges down and :class:`UnderdeterminedError` is raised.
    """
    Pi = np.atleast_2d(np.asarray(Pi, dtype=np.float64))
    S = np.asarray(S, dtype=np.float64)
    m, n = S.shape
    if Pi.shape[1] != n:
        raise DatasetError(f"Pi has {Pi.shape[1]} rados, S has {n} columns")
    gram = S @ S.T
    eig = linalg.eigvalsh(gram)
    tol = RANK_TOL * max(np.abs(gram).max(), 1.0)
    rank = int(np.sum(eig > tol))
    if n < m or rank < m:
        raise UnderdeterminedError(
            f"S S^T has rank {rank} < m={m} (n={n} rados): the edges are not determined",
            rank=rank,
        )
    factor = linalg.cho_factor(gram)
    E = linalg.cho_solve(factor, S @ Pi.T).T
    residual = float(np.linalg.norm(E @ S - Pi))
    return Recovery(E, residual, rank)


def hausdorff(E, E2) -> float:
    """Two-sided Hausdorff distance between the column sets of E and E2."""
    A = np.atleast_2d(np.asarray(E, dtype=np.float64))
    B = np.atleast_2d(np.asarray(E2, dtype=np.float64))
    if A.shape[1] == 0 or B.shape[1] == 0:
        raise ValueError("empty column set")
    if A.shape[0] != B.shape[0]:
        raise ValueError(f"dimension mismatch: {A.shape[0]} vs {B.shape[0]}")
    dist = cdist(A.T, B.T)
    return float(max(dist.min(axis=1).max(), dist.min(axis=0).max()))


def ambiguity_witness(dataset: Dataset, signatures, split_index: int, e_star):
    """A different dataset that yields exactly the same rados.

    Example ``split_index`` with edge e is replaced by two examples with the
    same label whose edges are ``e_star`` and ``e - e_star``; each signature
    selects both children iff it selected the parent.  Returns the new
    (m+1)-example dataset and the adjusted signatures.
    """
    if not 0 <= split_index < dataset.m:
        raise IndexError(f"split index {split_index} out of range for m={dataset.m}")
    e_star = np.asarray(e_star, dtype=np.float64).ravel()
    if e_star.shape[0] != dataset.d:
        raise DatasetError(f"e_star has {e_star.shape[0]} coordinates, expected {dataset.d}")
    sigmas = np.atleast_2d(np.asarray(signatures))
    y_i = dataset.y[split_index]
    x_i = dataset.X[split_index]
    # observations are y * edge, so the two edges sum back to y_i * x_i
    first = y_i * e_star
    second = x_i - y_i * e_star
    X = np.vstack([dataset.X[:split_index], first, second, dataset.X[split_index + 1:]])
    y = np.concatenate([dataset.y[:split_index], [y_i, y_i], dataset.y[split_index + 1:]])
    new_sigmas = np.insert(sigmas, split_index + 1, sigmas[:, split_index], axis=1)
    return Dataset(X, y, dataset.feature_names), new_sigmas


def enclosing_radius(E) -> float:
    """Norm of the longest column of E."""
    return float(np.linalg.norm(np.asarray(E), axis=0).max())


def save_matrix(path, M) -> None:
    np.savetxt(path, np.asarray(M), delimiter=",", fmt="%.17g")


def load_matrix(path) -> np.ndarray:
    return np.atleast_2d(np.loadtxt(path, delimiter=",", ndmin=2))
