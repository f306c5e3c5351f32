"""Sparse feature construction: term counts, concept extraction, IDF/BM25
re-weighting, L2 normalization and block concatenation.

Six vectorization variants are supported; term-based, concept-based, and
the concatenation of both, each with IDF or BM25 re-weighting:

    tf-idf, bm25, cf-idf, bm25c, ctf-idf, bm25ct
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .corpus import Thesaurus
from .preprocess import LemmaTable, preprocess
from .sparse import SparseVector

BM25_K = 1.6
BM25_B = 0.75

VARIANTS = ("tf-idf", "bm25", "cf-idf", "bm25c", "ctf-idf", "bm25ct")

# variant -> (uses term block, uses concept block, weighting scheme)
_VARIANT_PLAN = {
    "tf-idf": (True, False, "idf"),
    "bm25": (True, False, "bm25"),
    "cf-idf": (False, True, "idf"),
    "bm25c": (False, True, "bm25"),
    "ctf-idf": (True, True, "idf"),
    "bm25ct": (True, True, "bm25"),
}


class Vocabulary:
    """Frozen token -> dense feature index map, fitted on training text only."""

    def __init__(self, index: dict[str, int]):
        self.index = index

    @classmethod
    def fit(cls, token_seqs: list[list[str]]) -> "Vocabulary":
        index: dict[str, int] = {}
        for seq in token_seqs:
            for token in seq:
                if token not in index:
                    index[token] = len(index)
        return cls(index)

    def __len__(self) -> int:
        return len(self.index)

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def tokens_in_order(self) -> list[str]:
        return sorted(self.index, key=self.index.get)


def count_terms(tokens: list[str], vocab: Vocabulary) -> SparseVector:
    """Term-frequency vector; tokens outside the vocabulary are ignored."""
    counts: Counter[int] = Counter()
    for token in tokens:
        idx = vocab.index.get(token)
        if idx is not None:
            counts[idx] += 1
    return SparseVector.from_dict(counts, len(vocab))


class _TrieNode:
    __slots__ = ("children", "concepts")

    def __init__(self):
        self.children: dict[str, _TrieNode] = {}
        self.concepts: tuple[str, ...] = ()


class ConceptMatcher:
    """Multi-pattern matcher over lemmatized phrase token sequences.

    Scanning is greedy left to right: at each position the longest phrase
    starting there wins and is consumed whole; if phrases of that length are
    owned by several concepts, each is counted once.
    """

    def __init__(self, thesaurus: Thesaurus, lemma_table: LemmaTable | None = None):
        patterns: dict[tuple[str, ...], set[str]] = {}
        for cid in thesaurus.sorted_ids():
            for phrase in thesaurus.get(cid).phrases():
                tokens = tuple(preprocess(phrase, lemma_table))
                if tokens:
                    patterns.setdefault(tokens, set()).add(cid)
        self._init_from(thesaurus.sorted_ids(), patterns)

    def _init_from(
        self, concept_ids: list[str], patterns: dict[tuple[str, ...], set[str]]
    ) -> None:
        self.concept_index = {cid: i for i, cid in enumerate(concept_ids)}
        self._patterns = patterns
        self._root = _TrieNode()
        for tokens, owners in patterns.items():
            node = self._root
            for token in tokens:
                node = node.children.setdefault(token, _TrieNode())
            node.concepts = tuple(sorted(owners))

    def to_state(self) -> dict:
        ids = sorted(self.concept_index, key=self.concept_index.get)
        return {
            "concept_ids": ids,
            "patterns": [
                [list(tokens), sorted(owners)] for tokens, owners in sorted(self._patterns.items())
            ],
        }

    @classmethod
    def from_state(cls, state: dict) -> "ConceptMatcher":
        matcher = cls.__new__(cls)
        matcher._init_from(
            list(state["concept_ids"]),
            {tuple(tokens): set(owners) for tokens, owners in state["patterns"]},
        )
        return matcher

    @property
    def n_concepts(self) -> int:
        return len(self.concept_index)

    def patterns(self) -> dict[tuple[str, ...], tuple[str, ...]]:
        return {toks: tuple(sorted(owners)) for toks, owners in self._patterns.items()}

    def match_counts(self, tokens: list[str]) -> Counter[str]:
        counts: Counter[str] = Counter()
        pos = 0
        n = len(tokens)
        while pos < n:
            node = self._root
            best_len = 0
            best_concepts: tuple[str, ...] = ()
            for j in range(pos, n):
                node = node.children.get(tokens[j])
                if node is None:
                    break
                if node.concepts:
                    best_len = j + 1 - pos
                    best_concepts = node.concepts
            if best_len:
                for cid in best_concepts:
                    counts[cid] += 1
                pos += best_len
            else:
                pos += 1
        return counts


def extract_concepts(tokens: list[str], matcher: ConceptMatcher) -> SparseVector:
    """Concept-frequency vector from the longest-match scan."""
    counts = matcher.match_counts(tokens)
    entries = {matcher.concept_index[cid]: float(c) for cid, c in counts.items()}
    return SparseVector.from_dict(entries, matcher.n_concepts)


@dataclass(frozen=True)
class WeightingModel:
    """Per-feature IDF values plus the BM25 corpus statistics.

    idf(w) = 1 + ln((N + 1) / (df(w) + 1)); both counts are incremented by
    one, as if one artificial document contained every feature, so features
    absent from all training documents still get a finite weight and
    features present everywhere keep idf = 1.
    """

    scheme: str
    idf: np.ndarray
    n_docs: int
    mean_doc_len: float
    k: float = BM25_K
    b: float = BM25_B

    @property
    def dimension(self) -> int:
        return len(self.idf)


def fit_weighting(
    doc_vectors: list[SparseVector],
    scheme: str,
    k: float = BM25_K,
    b: float = BM25_B,
) -> WeightingModel:
    """Fit IDF (and BM25 length statistics) on training count vectors."""
    if scheme not in ("none", "idf", "bm25"):
        raise ValueError(f"unknown weighting scheme {scheme!r}")
    if not doc_vectors:
        raise ValueError("empty training set")
    dimension = doc_vectors[0].dimension
    df = np.zeros(dimension, dtype=np.float64)
    total_len = 0.0
    for v in doc_vectors:
        if v.dimension != dimension:
            raise ValueError("inconsistent vector dimensions")
        df[v.indices] += 1.0
        total_len += v.sum()
    n = len(doc_vectors)
    idf = 1.0 + np.log((n + 1.0) / (df + 1.0))
    return WeightingModel(
        scheme=scheme,
        idf=idf,
        n_docs=n,
        mean_doc_len=total_len / n,
        k=k,
        b=b,
    )


def apply_weighting(v: SparseVector, model: WeightingModel) -> SparseVector:
    """Re-weight a raw count vector under the fitted model.

    bm25 uses the Okapi saturation form
    idf * tf * (k + 1) / (tf + k * (1 - b + b * len / mean_len)) with the
    document length taken as the sum of the raw counts.
    """
    if v.dimension != model.dimension:
        raise ValueError(
            f"vector dimension {v.dimension} does not match model dimension {model.dimension}"
        )
    if model.scheme == "none" or v.nnz == 0:
        return v
    idf = model.idf[v.indices]
    if model.scheme == "idf":
        return SparseVector(v.indices, v.weights * idf, v.dimension)
    # bm25
    rel_len = v.sum() / model.mean_doc_len if model.mean_doc_len > 0 else 1.0
    denom = v.weights + model.k * (1.0 - model.b + model.b * rel_len)
    weights = idf * v.weights * (model.k + 1.0) / denom
    return SparseVector(v.indices, weights, v.dimension)


def l2_normalize(v: SparseVector) -> SparseVector:
    """Scale to unit Euclidean norm; the zero vector passes through."""
    norm = v.norm()
    if norm == 0.0:
        return v
    return v.scale(1.0 / norm)


def concat(term_v: SparseVector, concept_v: SparseVector) -> SparseVector:
    """Concatenate two blocks; concept indices shift past the term block.

    The result is intentionally not re-normalized: each block keeps its own
    unit norm, so the whole vector has norm sqrt(2) when both blocks are
    nonzero.
    """
    dimension = term_v.dimension + concept_v.dimension
    indices = np.concatenate([term_v.indices, concept_v.indices + term_v.dimension])
    weights = np.concatenate([term_v.weights, concept_v.weights])
    return SparseVector(indices, weights, dimension)


class TextVectorizer:
    """One fitted path through the vectorization half of the pipeline.

    fit() learns the vocabulary and the IDF/BM25 statistics from training
    token sequences only; transform() applies the identical pipeline to any
    sequence.  transform_counts() exposes the raw pre-weighting counts in
    the same index layout (the count-based classifiers consume these).
    """

    def __init__(
        self,
        variant: str,
        thesaurus: Thesaurus | None = None,
        lemma_table: LemmaTable | None = None,
        k: float = BM25_K,
        b: float = BM25_B,
    ):
        key = variant.lower()
        if key not in _VARIANT_PLAN:
            raise ValueError(
                f"unknown vectorization {variant!r}; valid: {', '.join(VARIANTS)}"
            )
        self.variant = key
        self.uses_terms, self.uses_concepts, self.scheme = _VARIANT_PLAN[key]
        self.k = k
        self.b = b
        if self.uses_concepts and thesaurus is None:
            raise ValueError(f"vectorization {key!r} needs a thesaurus")
        self.matcher = (
            ConceptMatcher(thesaurus, lemma_table) if self.uses_concepts else None
        )
        self.vocab: Vocabulary | None = None
        self.term_weighting: WeightingModel | None = None
        self.concept_weighting: WeightingModel | None = None

    def fit(self, token_seqs: list[list[str]]) -> "TextVectorizer":
        if not token_seqs:
            raise ValueError("cannot fit a vectorizer on an empty training set")
        if self.uses_terms:
            self.vocab = Vocabulary.fit(token_seqs)
            term_counts = [count_terms(seq, self.vocab) for seq in token_seqs]
            self.term_weighting = fit_weighting(term_counts, self.scheme, self.k, self.b)
        if self.uses_concepts:
            concept_counts = [extract_concepts(seq, self.matcher) for seq in token_seqs]
            self.concept_weighting = fit_weighting(
                concept_counts, self.scheme, self.k, self.b
            )
        return self

    def _check_fitted(self) -> None:
        if (self.uses_terms and self.term_weighting is None) or (
            self.uses_concepts and self.concept_weighting is None
        ):
            raise RuntimeError("vectorizer is not fitted")

    @property
    def dimension(self) -> int:
        self._check_fitted()
        dim = 0
        if self.uses_terms:
            dim += len(self.vocab)
        if self.uses_concepts:
            dim += self.matcher.n_concepts
        return dim

    def transform_one(self, tokens: list[str]) -> SparseVector:
        self._check_fitted()
        blocks = []
        if self.uses_terms:
            counts = count_terms(tokens, self.vocab)
            blocks.append(l2_normalize(apply_weighting(counts, self.term_weighting)))
        if self.uses_concepts:
            counts = extract_concepts(tokens, self.matcher)
            blocks.append(l2_normalize(apply_weighting(counts, self.concept_weighting)))
        return blocks[0] if len(blocks) == 1 else concat(blocks[0], blocks[1])

    def counts_one(self, tokens: list[str]) -> SparseVector:
        self._check_fitted()
        blocks = []
        if self.uses_terms:
            blocks.append(count_terms(tokens, self.vocab))
        if self.uses_concepts:
            blocks.append(extract_concepts(tokens, self.matcher))
        return blocks[0] if len(blocks) == 1 else concat(blocks[0], blocks[1])

    def transform(self, token_seqs: list[list[str]]) -> list[SparseVector]:
        return [self.transform_one(seq) for seq in token_seqs]

    def transform_counts(self, token_seqs: list[list[str]]) -> list[SparseVector]:
        return [self.counts_one(seq) for seq in token_seqs]


def dump_vectors(path, doc_ids: list[str], vectors: list[SparseVector]) -> None:
    """Debug dump: one JSON line per document with indices and weights."""
    with open(path, "w", encoding="utf-8") as fh:
        for doc_id, v in zip(doc_ids, vectors):
            fh.write(
                json.dumps(
                    {
                        "id": doc_id,
                        "indices": [int(i) for i in v.indices],
                        "weights": [float(w) for w in v.weights],
                    }
                )
                + "\n"
            )
