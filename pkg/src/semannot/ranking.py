"""Learning-to-Rank label assignment.

Candidate labels for a document are the union of the gold labels of its k
nearest training neighbors.  A pointwise logistic ranker scores each
candidate from four neighborhood/overlap features, and the ranked list is
cut off at the training corpus's mean label count (rounded half up).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse as sp
from scipy.special import expit

from .learners.labels import LabelMatrix
from .learners.lazy import KnnClassifier
from .learners.linear import LINEAR_ALPHA, LINEAR_EPOCHS, LINEAR_ETA0, averaged_sgd_train
from .multilabel import RankedPrediction, rank_labels, round_half_up
from .sparse import SparseVector

L2R_K = 45
N_RANKING_FEATURES = 4


@dataclass
class CandidateSet:
    """Candidate labels of one document with their ranking features.

    Feature columns: summed neighbor similarity, neighbor count, training
    prior, and maximum neighbor similarity.
    """

    doc_id: str | None
    labels: list[str]
    features: np.ndarray


def generate_candidates(
    x: SparseVector,
    knn: KnnClassifier,
    priors: np.ndarray,
    k: int = L2R_K,
    exclude: int | None = None,
    doc_id: str | None = None,
) -> CandidateSet:
    """Union of the k nearest neighbors' gold labels, with features.

    k is clamped to the training-set size.  ``exclude`` removes one
    training ordinal from the neighborhood (leave-one-out candidate
    generation when ranking training documents themselves).
    """
    idx, sims = knn.neighbors(x, k=k, exclude=exclude)
    labels = knn.labels
    f1 = np.zeros(labels.n_labels)
    f2 = np.zeros(labels.n_labels)
    f4 = np.zeros(labels.n_labels)
    seen: set[int] = set()
    for i, sim in zip(idx, sims):
        for j in labels.rows[i]:
            f1[j] += sim
            f2[j] += 1.0
            f4[j] = max(f4[j], sim)
            seen.add(int(j))
    chosen = sorted(seen)
    features = np.column_stack(
        [f1[chosen], f2[chosen], priors[chosen], f4[chosen]]
    ) if chosen else np.empty((0, N_RANKING_FEATURES))
    return CandidateSet(
        doc_id=doc_id,
        labels=[labels.label_ids[j] for j in chosen],
        features=features,
    )


@dataclass
class RankerModel:
    weights: np.ndarray
    bias: float
    cutoff: int

    def score(self, features: np.ndarray) -> np.ndarray:
        return features @ self.weights - self.bias


def ranker_fit(
    candidate_sets: list[CandidateSet],
    gold_sets: list[frozenset[str] | set[str]],
    cutoff: int,
    alpha: float = LINEAR_ALPHA,
    eta0: float = LINEAR_ETA0,
    epochs: int = LINEAR_EPOCHS,
    seed: int = 0,
) -> RankerModel:
    """Pointwise logistic ranker: a candidate is relevant iff it is gold.

    Documents with no candidates are skipped.  Trained with the same
    averaged-SGD machinery as the linear models.
    """
    rows: list[np.ndarray] = []
    relevance: list[np.ndarray] = []
    empty = np.empty(0, dtype=np.int64)
    hit = np.array([0], dtype=np.int64)
    for cs, gold in zip(candidate_sets, gold_sets):
        for label, fvec in zip(cs.labels, cs.features):
            rows.append(fvec)
            relevance.append(hit if label in gold else empty)
    if not rows:
        raise ValueError("no candidates to train on")
    if not any(len(r) for r in relevance):
        raise ValueError("degenerate corpus: no relevant candidates anywhere")
    X = sp.csr_matrix(np.vstack(rows))
    W, b = averaged_sgd_train(
        X, relevance, 1, loss="logistic", alpha=alpha, eta0=eta0, epochs=epochs, seed=seed
    )
    return RankerModel(weights=W[0], bias=float(b[0]), cutoff=cutoff)


def rank_candidates(model: RankerModel, candidates: CandidateSet) -> RankedPrediction:
    scores = expit(model.score(candidates.features)) if len(candidates.labels) else np.empty(0)
    return rank_labels(candidates.labels, scores)


def rank_and_cut(model: RankerModel, candidates: CandidateSet) -> set[str]:
    """Top labels of the scored candidate list, at most ``cutoff`` of them."""
    ranking = rank_candidates(model, candidates)
    return {cid for cid, _, rank in ranking if rank <= model.cutoff}


class L2RClassifier:
    """Candidate generation around a kNN index plus the trained ranker."""

    def __init__(
        self,
        k: int = L2R_K,
        alpha: float = LINEAR_ALPHA,
        eta0: float = LINEAR_ETA0,
        epochs: int = LINEAR_EPOCHS,
        seed: int = 0,
    ):
        self.k = k
        self.alpha = alpha
        self.eta0 = eta0
        self.epochs = epochs
        self.seed = seed
        self.knn: KnnClassifier | None = None
        self.priors: np.ndarray | None = None
        self.model: RankerModel | None = None

    def fit(self, X: list[SparseVector], labels: LabelMatrix) -> "L2RClassifier":
        self.knn = KnnClassifier(k=1).fit(X, labels)
        self.priors = labels.priors()
        candidate_sets = [
            generate_candidates(x, self.knn, self.priors, k=self.k, exclude=i)
            for i, x in enumerate(X)
        ]
        gold_sets = [labels.row_set(i) for i in range(len(X))]
        cutoff = max(1, round_half_up(labels.mean_labels_per_doc()))
        self.model = ranker_fit(
            candidate_sets,
            gold_sets,
            cutoff,
            alpha=self.alpha,
            eta0=self.eta0,
            epochs=self.epochs,
            seed=self.seed,
        )
        return self

    def candidates(self, x: SparseVector) -> CandidateSet:
        if self.knn is None:
            raise RuntimeError("classifier is not fitted")
        return generate_candidates(x, self.knn, self.priors, k=self.k)

    def rank(self, x: SparseVector) -> RankedPrediction:
        if self.model is None:
            raise RuntimeError("classifier is not fitted")
        return rank_candidates(self.model, self.candidates(x))

    def predict(self, x: SparseVector) -> set[str]:
        if self.model is None:
            raise RuntimeError("classifier is not fitted")
        return rank_and_cut(self.model, self.candidates(x))
