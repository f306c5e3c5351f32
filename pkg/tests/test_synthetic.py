import pytest

from semannot.preprocess import lemmatize, tokenize
from semannot.synthetic import generate_corpus, noisy_corpus, separable_corpus, synonym_corpus


def test_document_count_and_nonempty_gold():
    made = generate_corpus(n_labels=7, docs_per_label=9, seed=2)
    assert len(made.documents) == 63
    assert len(made.thesaurus) == 7
    for doc in made.documents:
        assert doc.gold_labels
        assert all(cid in made.thesaurus for cid in doc.gold_labels)


def test_labels_per_doc_respects_range():
    made = generate_corpus(n_labels=10, docs_per_label=10, labels_per_doc=(2, 4), seed=5)
    for doc in made.documents:
        assert 2 <= len(doc.gold_labels) <= 4


def test_same_seed_reproduces_corpus():
    a = generate_corpus(n_labels=4, docs_per_label=6, seed=9)
    b = generate_corpus(n_labels=4, docs_per_label=6, seed=9)
    assert a.documents == b.documents
    assert a.thesaurus.concepts == b.thesaurus.concepts


def test_generated_words_survive_preprocessing_unchanged():
    # titles must tokenize to themselves so the signal design is exact
    made = generate_corpus(n_labels=6, docs_per_label=5, synonyms_per_concept=2, seed=4)
    for doc in made.documents[:20]:
        tokens = doc.title.split()
        assert lemmatize(tokenize(doc.title)) == tokens


def test_synonym_corpus_uses_alternative_phrases():
    made = synonym_corpus(seed=5)
    alt_forms = {
        alt for concept in made.thesaurus.concepts.values() for alt in concept.alt_labels
    }
    assert alt_forms
    used = set()
    for doc in made.documents:
        used.update(doc.title.split())
    assert used & alt_forms  # some titles mention a synonym form


def test_presets_have_expected_shapes():
    assert len(separable_corpus(seed=0).documents) == 1000
    assert len(noisy_corpus(seed=0).documents) == 800
    assert len(synonym_corpus(seed=0).documents) == 480


def test_invalid_label_range_rejected():
    with pytest.raises(ValueError, match="labels_per_doc"):
        generate_corpus(n_labels=3, labels_per_doc=(1, 5))
