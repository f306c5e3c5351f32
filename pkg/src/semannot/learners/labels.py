"""Dense label index and per-document binary rows shared by all learners."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse as sp


@dataclass
class LabelMatrix:
    """Per-document binary label rows over a dense 0..L-1 label index.

    label_ids are sorted concept ids; every row is a sorted array of label
    indices and must be nonempty for training corpora.
    """

    label_ids: tuple[str, ...]
    rows: list[np.ndarray]

    @classmethod
    def from_gold(cls, gold_sets: list[frozenset[str] | set[str]]) -> "LabelMatrix":
        used = sorted(set().union(*gold_sets)) if gold_sets else []
        index = {cid: i for i, cid in enumerate(used)}
        rows = []
        for i, gold in enumerate(gold_sets):
            if not gold:
                raise ValueError(f"document {i} has an empty gold label set")
            rows.append(np.array(sorted(index[c] for c in gold), dtype=np.int64))
        return cls(label_ids=tuple(used), rows=rows)

    @property
    def n_labels(self) -> int:
        return len(self.label_ids)

    @property
    def n_docs(self) -> int:
        return len(self.rows)

    def row_set(self, i: int) -> frozenset[str]:
        return frozenset(self.label_ids[j] for j in self.rows[i])

    def to_csr(self) -> sp.csr_matrix:
        indptr = np.zeros(len(self.rows) + 1, dtype=np.int64)
        for i, row in enumerate(self.rows):
            indptr[i + 1] = indptr[i] + len(row)
        indices = np.concatenate(self.rows) if self.rows else np.empty(0, dtype=np.int64)
        data = np.ones(len(indices), dtype=np.float64)
        return sp.csr_matrix((data, indices, indptr), shape=(len(self.rows), self.n_labels))

    def priors(self) -> np.ndarray:
        """Fraction of documents carrying each label."""
        counts = np.zeros(self.n_labels, dtype=np.float64)
        for row in self.rows:
            counts[row] += 1.0
        return counts / max(1, self.n_docs)

    def mean_labels_per_doc(self) -> float:
        return sum(len(row) for row in self.rows) / max(1, self.n_docs)
