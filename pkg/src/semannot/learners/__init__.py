"""Base classifiers: lazy (kNN, Rocchio) and eager (Naive Bayes, averaged
SGD linear models, MLP)."""

from .labels import LabelMatrix
from .lazy import KnnClassifier, RocchioClassifier
from .bayes import NaiveBayesClassifier, NB_ALPHA
from .linear import (
    LinearClassifier,
    averaged_sgd_train,
    LINEAR_ALPHA,
    LINEAR_EPOCHS,
    LINEAR_ETA0,
)
from .mlp import (
    MlpClassifier,
    TrainingDiverged,
    forward_scores,
    init_params,
    loss_and_grads,
    MLP_THRESHOLD,
)

__all__ = [
    "LabelMatrix",
    "KnnClassifier",
    "RocchioClassifier",
    "NaiveBayesClassifier",
    "LinearClassifier",
    "MlpClassifier",
    "TrainingDiverged",
    "averaged_sgd_train",
    "forward_scores",
    "init_params",
    "loss_and_grads",
    "NB_ALPHA",
    "LINEAR_ALPHA",
    "LINEAR_EPOCHS",
    "LINEAR_ETA0",
    "MLP_THRESHOLD",
]
