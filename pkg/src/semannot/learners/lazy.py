"""Lazy learners: k-nearest neighbors and the Rocchio nearest-centroid
classifier, both under cosine distance."""

from __future__ import annotations

import numpy as np
from scipy import sparse as sp

from ..multilabel import RankedPrediction, rank_labels
from ..sparse import SparseVector, vstack
from .labels import LabelMatrix


def _normalize_rows(matrix: sp.csr_matrix) -> sp.csr_matrix:
    norms = np.sqrt(np.asarray(matrix.multiply(matrix).sum(axis=1)).ravel())
    scale = np.divide(1.0, norms, out=np.zeros_like(norms), where=norms > 0)
    return (sp.diags(scale) @ matrix).tocsr()


def _unit_dense(x: SparseVector) -> np.ndarray:
    dense = np.zeros(x.dimension, dtype=np.float64)
    norm = x.norm()
    if norm > 0:
        dense[x.indices] = x.weights / norm
    return dense


class KnnClassifier:
    """Stores the training vectors verbatim; votes at prediction time.

    Cosine distance throughout; an all-zero query is at distance 1 from
    every neighbor, so ties resolve to the lowest training ordinal.
    """

    def __init__(self, k: int = 1):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = k
        self.matrix: sp.csr_matrix | None = None
        self.labels: LabelMatrix | None = None

    def fit(self, X: list[SparseVector], labels: LabelMatrix) -> "KnnClassifier":
        if not X:
            raise ValueError("empty training set")
        if len(X) != labels.n_docs:
            raise ValueError("X and labels must align")
        self.matrix = _normalize_rows(vstack(X))
        self.labels = labels
        return self

    @property
    def n_train(self) -> int:
        return self.matrix.shape[0]

    def similarities(self, x: SparseVector) -> np.ndarray:
        if self.matrix is None:
            raise RuntimeError("classifier is not fitted")
        return self.matrix @ _unit_dense(x)

    def neighbors(
        self, x: SparseVector, k: int | None = None, exclude: int | None = None
    ) -> tuple[np.ndarray, np.ndarray]:
        """Indices and cosine similarities of the k nearest training docs,
        ordered by similarity descending, ties by lowest ordinal."""
        sims = self.similarities(x)
        if exclude is not None:
            sims = sims.copy()
            sims[exclude] = -np.inf
        k = min(self.k if k is None else k, len(sims) - (1 if exclude is not None else 0))
        order = np.lexsort((np.arange(len(sims)), -sims))[:k]
        return order, sims[order]

    def predict(self, x: SparseVector) -> set[str]:
        idx, _ = self.neighbors(x)
        if self.k == 1:
            return set(self.labels.row_set(idx[0]))
        votes = np.zeros(self.labels.n_labels, dtype=np.int64)
        for i in idx:
            votes[self.labels.rows[i]] += 1
        winners = np.nonzero(votes * 2 > len(idx))[0]
        return {self.labels.label_ids[j] for j in winners}


class RocchioClassifier:
    """Keeps one centroid per label; ranks labels by cosine distance to them."""

    def __init__(self):
        self.centroids: sp.csr_matrix | None = None
        self.label_ids: tuple[str, ...] = ()

    def fit(self, X: list[SparseVector], labels: LabelMatrix) -> "RocchioClassifier":
        if not X:
            raise ValueError("empty training set")
        matrix = vstack(X)
        indicator = labels.to_csr()
        counts = np.asarray(indicator.sum(axis=0)).ravel()
        sums = (indicator.T @ matrix).tocsr()
        scale = np.divide(1.0, counts, out=np.zeros_like(counts), where=counts > 0)
        self.centroids = _normalize_rows((sp.diags(scale) @ sums).tocsr())
        self.label_ids = labels.label_ids
        return self

    def rank(self, x: SparseVector) -> RankedPrediction:
        """Labels ascending by cosine distance; score = 1 - distance."""
        if self.centroids is None:
            raise RuntimeError("classifier is not fitted")
        sims = self.centroids @ _unit_dense(x)
        return rank_labels(self.label_ids, sims)
