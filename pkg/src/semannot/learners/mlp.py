"""One-hidden-layer perceptron for multi-label decisions.

The network computes sigmoid(W2 f(W1 x + b1) + b2) per label, is trained
on summed per-label binary cross-entropy with inverted dropout on the
hidden layer, and optimized with Adam.  Prediction runs with dropout
disabled; a label is assigned when its probability exceeds the fixed
threshold (strictly).
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit

from ..multilabel import RankedPrediction, rank_labels, threshold_decide
from ..sparse import SparseVector, vstack
from .labels import LabelMatrix

MLP_HIDDEN = 1000
MLP_THRESHOLD = 0.2
MLP_DROPOUT = 0.5
MLP_LEARNING_RATE = 0.01
MLP_EPOCHS = 20
MLP_BATCH = 256

ACTIVATIONS = ("relu", "tanh")


class TrainingDiverged(RuntimeError):
    pass


def init_params(n_features: int, hidden: int, n_labels: int, rng: np.random.Generator) -> dict:
    """Glorot-scaled normal init for both layers, zero biases."""
    s1 = np.sqrt(2.0 / (n_features + hidden))
    s2 = np.sqrt(2.0 / (hidden + n_labels))
    return {
        "W1": rng.normal(0.0, s1, size=(hidden, n_features)),
        "b1": np.zeros(hidden, dtype=np.float64),
        "W2": rng.normal(0.0, s2, size=(n_labels, hidden)),
        "b2": np.zeros(n_labels, dtype=np.float64),
    }


def forward_scores(params: dict, X: np.ndarray, activation: str) -> np.ndarray:
    """Per-label probabilities with dropout disabled (prediction path)."""
    Z1 = X @ params["W1"].T + params["b1"]
    H = np.maximum(Z1, 0.0) if activation == "relu" else np.tanh(Z1)
    return expit(H @ params["W2"].T + params["b2"])


def loss_and_grads(
    params: dict,
    X: np.ndarray,
    T: np.ndarray,
    activation: str = "relu",
    dropout_mask: np.ndarray | None = None,
    dropout: float = MLP_DROPOUT,
) -> tuple[float, dict]:
    """Mean-over-batch of label-summed binary cross-entropy, with gradients.

    When a dropout mask is given the hidden activations are masked and
    rescaled by 1/(1-dropout); the gradient flows through the same mask.
    """
    Z1 = X @ params["W1"].T + params["b1"]
    if activation == "relu":
        H = np.maximum(Z1, 0.0)
        dH = (Z1 > 0.0).astype(np.float64)
    elif activation == "tanh":
        H = np.tanh(Z1)
        dH = 1.0 - H * H
    else:
        raise ValueError(f"unknown activation {activation!r}")
    if dropout_mask is not None:
        keep = dropout_mask / (1.0 - dropout)
        Hd = H * keep
    else:
        Hd = H
    Y = Hd @ params["W2"].T + params["b2"]
    batch = X.shape[0]
    # BCE(y, t) = softplus(y) - t*y, summed over labels, averaged over batch
    loss = float((np.logaddexp(0.0, Y) - T * Y).sum() / batch)
    Gy = (expit(Y) - T) / batch
    grads = {
        "W2": Gy.T @ Hd,
        "b2": Gy.sum(axis=0),
    }
    Gh = Gy @ params["W2"]
    if dropout_mask is not None:
        Gh = Gh * keep
    Gz = Gh * dH
    grads["W1"] = Gz.T @ X
    grads["b1"] = Gz.sum(axis=0)
    return loss, grads


class MlpClassifier:
    def __init__(
        self,
        hidden: int = MLP_HIDDEN,
        activation: str = "relu",
        epochs: int = MLP_EPOCHS,
        batch_size: int = MLP_BATCH,
        learning_rate: float = MLP_LEARNING_RATE,
        dropout: float = MLP_DROPOUT,
        threshold: float = MLP_THRESHOLD,
        seed: int = 0,
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps: float = 1e-8,
    ):
        if activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {activation!r}")
        self.hidden = hidden
        self.activation = activation
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.dropout = dropout
        self.threshold = threshold
        self.seed = seed
        self.beta1, self.beta2, self.eps = beta1, beta2, eps
        self.label_ids: tuple[str, ...] = ()
        self.params: dict | None = None
        self.epoch_losses: list[float] = []

    def fit(self, X: list[SparseVector], labels: LabelMatrix) -> "MlpClassifier":
        if not X:
            raise ValueError("empty training set")
        matrix = vstack(X)
        n_docs, n_features = matrix.shape
        n_labels = labels.n_labels
        targets = np.zeros((n_docs, n_labels), dtype=np.float64)
        for i, row in enumerate(labels.rows):
            targets[i, row] = 1.0

        rng = np.random.default_rng(self.seed)
        params = init_params(n_features, self.hidden, n_labels, rng)
        moments = {k: (np.zeros_like(v), np.zeros_like(v)) for k, v in params.items()}
        step = 0
        self.epoch_losses = []
        for epoch in range(self.epochs):
            order = rng.permutation(n_docs)
            epoch_loss = 0.0
            n_batches = 0
            for lo in range(0, n_docs, self.batch_size):
                batch_idx = order[lo:lo + self.batch_size]
                Xb = matrix[batch_idx].toarray()
                Tb = targets[batch_idx]
                mask = None
                if self.dropout > 0.0:
                    mask = (rng.random((len(batch_idx), self.hidden)) >= self.dropout).astype(
                        np.float64
                    )
                loss, grads = loss_and_grads(
                    params, Xb, Tb, self.activation, mask, self.dropout
                )
                if not np.isfinite(loss):
                    raise TrainingDiverged(
                        f"non-finite loss at epoch {epoch}, batch {n_batches}; "
                        "consider the tanh activation or a lower learning rate"
                    )
                step += 1
                for key, grad in grads.items():
                    m, v = moments[key]
                    m *= self.beta1
                    m += (1.0 - self.beta1) * grad
                    v *= self.beta2
                    v += (1.0 - self.beta2) * grad * grad
                    m_hat = m / (1.0 - self.beta1 ** step)
                    v_hat = v / (1.0 - self.beta2 ** step)
                    params[key] -= self.learning_rate * m_hat / (np.sqrt(v_hat) + self.eps)
                epoch_loss += loss
                n_batches += 1
            self.epoch_losses.append(epoch_loss / max(1, n_batches))
        self.params = params
        self.label_ids = labels.label_ids
        return self

    def scores(self, x: SparseVector) -> np.ndarray:
        if self.params is None:
            raise RuntimeError("classifier is not fitted")
        if x.dimension != self.params["W1"].shape[1]:
            raise ValueError("feature dimension mismatch")
        dense = np.zeros((1, x.dimension), dtype=np.float64)
        dense[0, x.indices] = x.weights
        return forward_scores(self.params, dense, self.activation)[0]

    def predict(self, x: SparseVector) -> set[str]:
        return threshold_decide(self.label_ids, self.scores(x), self.threshold)

    def rank(self, x: SparseVector) -> RankedPrediction:
        return rank_labels(self.label_ids, self.scores(x))
