"""Bernoulli and multinomial Naive Bayes under binary relevance.

Both variants consume raw counts from the pre-weighting stage (the
multinomial generative story needs count-valued features; the Bernoulli
variant binarizes at weight > 0).  Lidstone smoothing with a very small
alpha keeps every likelihood finite.
"""

from __future__ import annotations

import numpy as np

from ..multilabel import RankedPrediction, binary_relevance_decide, rank_labels
from ..sparse import SparseVector, vstack
from .labels import LabelMatrix

NB_ALPHA = 1e-5


class NaiveBayesClassifier:
    """One-vs-rest Naive Bayes; scores are per-label posterior log-odds."""

    def __init__(self, variant: str = "bernoulli", alpha: float = NB_ALPHA):
        if variant not in ("bernoulli", "multinomial"):
            raise ValueError(f"unknown Naive Bayes variant {variant!r}")
        self.variant = variant
        self.alpha = alpha
        self.label_ids: tuple[str, ...] = ()
        # per-label log-odds parameters, precomputed at fit time
        self._const: np.ndarray | None = None   # prior + presence-independent terms
        self._coef: np.ndarray | None = None    # (L, F) added per occurrence/presence
        # multinomial only: fitted per-class log feature distributions
        self.log_theta_pos: np.ndarray | None = None
        self.log_theta_neg: np.ndarray | None = None

    def fit(self, X_counts: list[SparseVector], labels: LabelMatrix) -> "NaiveBayesClassifier":
        if not X_counts:
            raise ValueError("empty training set")
        alpha = self.alpha
        matrix = vstack(X_counts)
        if self.variant == "bernoulli":
            matrix = matrix.copy()
            matrix.data = np.ones_like(matrix.data)
        indicator = labels.to_csr()
        n_docs = matrix.shape[0]
        n_pos = np.asarray(indicator.sum(axis=0)).ravel()
        included = n_pos > 0  # labels without a positive training doc are excluded
        self.label_ids = tuple(
            cid for cid, keep in zip(labels.label_ids, included) if keep
        )
        pos = np.asarray((indicator.T @ matrix).todense())[included]
        total = np.asarray(matrix.sum(axis=0)).ravel()
        neg = total[None, :] - pos
        n_pos = n_pos[included]
        n_neg = n_docs - n_pos
        log_prior_odds = np.log(n_pos + alpha) - np.log(n_neg + alpha)

        if self.variant == "multinomial":
            n_features = matrix.shape[1]
            z_pos = pos.sum(axis=1) + alpha * n_features
            z_neg = neg.sum(axis=1) + alpha * n_features
            self.log_theta_pos = np.log(pos + alpha) - np.log(z_pos)[:, None]
            self.log_theta_neg = np.log(neg + alpha) - np.log(z_neg)[:, None]
            self._coef = self.log_theta_pos - self.log_theta_neg
            self._const = log_prior_odds
        else:
            theta_pos = (pos + alpha) / (n_pos + 2.0 * alpha)[:, None]
            theta_neg = (neg + alpha) / (n_neg + 2.0 * alpha)[:, None]
            # log-odds of a document splits into a presence-independent base
            # (sum of log(1-theta) over all features) plus a per-presence term
            self._coef = (np.log(theta_pos) - np.log1p(-theta_pos)) - (
                np.log(theta_neg) - np.log1p(-theta_neg)
            )
            base = np.log1p(-theta_pos).sum(axis=1) - np.log1p(-theta_neg).sum(axis=1)
            self._const = log_prior_odds + base
        return self

    def log_odds(self, x: SparseVector) -> np.ndarray:
        """Posterior log-odds per included label."""
        if self._coef is None:
            raise RuntimeError("classifier is not fitted")
        if x.dimension != self._coef.shape[1]:
            raise ValueError("feature dimension mismatch")
        if x.nnz == 0:
            return self._const.copy()
        if self.variant == "multinomial":
            return self._const + self._coef[:, x.indices] @ x.weights
        return self._const + self._coef[:, x.indices].sum(axis=1)

    def predict(self, x: SparseVector) -> set[str]:
        return binary_relevance_decide(self.label_ids, self.log_odds(x) > 0.0)

    def rank(self, x: SparseVector) -> RankedPrediction:
        return rank_labels(self.label_ids, self.log_odds(x))
