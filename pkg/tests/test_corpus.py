import json
import os
import random

import pytest

from semannot.corpus import (
    Concept,
    CorpusFormatError,
    Thesaurus,
    ThesaurusFormatError,
    corpus_stats,
    dump_corpus_jsonl,
    dump_thesaurus_tsv,
    load_corpus,
    load_thesaurus,
)


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r) + "\n")


class TestLoadCorpus:
    def test_three_wellformed_lines_in_order(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        write_jsonl(
            path,
            [
                {"id": "a", "title": "one", "labels": ["x"]},
                {"id": "b", "title": "two", "labels": ["y"]},
                {"id": "c", "title": "three", "labels": ["x", "y"]},
            ],
        )
        result = load_corpus(path, "title")
        assert [d.doc_id for d in result.documents] == ["a", "b", "c"]
        assert result.documents[2].gold_labels == {"x", "y"}

    def test_empty_labels_excluded_with_warning(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        write_jsonl(
            path,
            [
                {"id": "a", "title": "one", "labels": []},
                {"id": "b", "title": "two", "labels": ["y"]},
            ],
        )
        result = load_corpus(path, "title")
        assert [d.doc_id for d in result.documents] == ["b"]
        assert result.n_empty_labels == 1

    def test_missing_field_dropped_only_for_that_field(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        write_jsonl(
            path,
            [
                {"id": "a", "title": "only title", "labels": ["x"]},
                {"id": "b", "title": "both", "fulltext": "text", "labels": ["y"]},
            ],
        )
        by_fulltext = load_corpus(path, "fulltext")
        assert [d.doc_id for d in by_fulltext.documents] == ["b"]
        assert by_fulltext.n_missing_field == 1
        by_title = load_corpus(path, "title")
        assert [d.doc_id for d in by_title.documents] == ["a", "b"]
        assert by_title.n_missing_field == 0

    def test_malformed_line_reports_line_number(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        path.write_text('{"id": "a", "title": "t", "labels": ["x"]}\n{oops\n', encoding="utf-8")
        with pytest.raises(CorpusFormatError, match=":2"):
            load_corpus(path, "title")

    def test_duplicate_id_rejected(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        write_jsonl(
            path,
            [
                {"id": "a", "title": "one", "labels": ["x"]},
                {"id": "a", "title": "again", "labels": ["y"]},
            ],
        )
        with pytest.raises(CorpusFormatError, match="duplicate"):
            load_corpus(path, "title")

    def test_unknown_labels_dropped_against_thesaurus(self, tmp_path):
        thesaurus = Thesaurus({"x": Concept("x", "xx")})
        path = tmp_path / "corpus.jsonl"
        write_jsonl(
            path,
            [
                {"id": "a", "title": "one", "labels": ["x", "ghost"]},
                {"id": "b", "title": "two", "labels": ["ghost"]},
            ],
        )
        result = load_corpus(path, "title", thesaurus=thesaurus)
        assert [d.doc_id for d in result.documents] == ["a"]
        assert result.documents[0].gold_labels == {"x"}
        assert result.n_unknown_labels == 2
        assert result.n_empty_labels == 1  # doc b lost all its labels

    def test_unlabeled_corpus_for_annotation(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        write_jsonl(path, [{"id": "a", "title": "one"}])
        result = load_corpus(path, "title", require_labels=False)
        assert result.documents[0].gold_labels == frozenset()

    def test_deterministic(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        write_jsonl(
            path, [{"id": f"d{i}", "title": f"t {i}", "labels": ["x"]} for i in range(20)]
        )
        first = load_corpus(path, "title")
        second = load_corpus(path, "title")
        assert [d.doc_id for d in first.documents] == [d.doc_id for d in second.documents]


class TestLoadThesaurus:
    def test_ntriples_pref_and_alt(self, tmp_path):
        path = tmp_path / "thesaurus.nt"
        path.write_text(
            '<c1> <http://www.w3.org/2004/02/skos/core#prefLabel> "interest rate"@en .\n'
            '<c1> <http://www.w3.org/2004/02/skos/core#altLabel> "interest rates"@en .\n',
            encoding="utf-8",
        )
        thesaurus = load_thesaurus(path, "ntriples")
        concept = thesaurus.get("c1")
        assert concept.pref_label == "interest rate"
        assert concept.alt_labels == ("interest rates",)

    def test_ntriples_ignores_unknown_predicates(self, tmp_path):
        path = tmp_path / "thesaurus.nt"
        path.write_text(
            '<c1> <http://www.w3.org/2004/02/skos/core#prefLabel> "rate" .\n'
            "<c1> <http://www.w3.org/2004/02/skos/core#broader> <c9> .\n",
            encoding="utf-8",
        )
        thesaurus = load_thesaurus(path, "ntriples")
        assert list(thesaurus.concepts) == ["c1"]

    def test_ntriples_two_pref_labels_error_names_subject(self, tmp_path):
        path = tmp_path / "thesaurus.nt"
        path.write_text(
            '<c1> <http://x/prefLabel> "rate" .\n<c1> <http://x/prefLabel> "other" .\n',
            encoding="utf-8",
        )
        with pytest.raises(ThesaurusFormatError, match="c1"):
            load_thesaurus(path, "ntriples")

    def test_ntriples_missing_pref_label(self, tmp_path):
        path = tmp_path / "thesaurus.nt"
        path.write_text('<c1> <http://x/altLabel> "rate" .\n', encoding="utf-8")
        with pytest.raises(ThesaurusFormatError, match="no preferred label"):
            load_thesaurus(path, "ntriples")

    def test_tsv_minimal_row(self, tmp_path):
        path = tmp_path / "thesaurus.tsv"
        path.write_text("c2\tinflation\t\n", encoding="utf-8")
        thesaurus = load_thesaurus(path, "tsv")
        assert thesaurus.get("c2") == Concept("c2", "inflation", ())

    def test_tsv_alt_labels_split_on_pipe(self, tmp_path):
        path = tmp_path / "thesaurus.tsv"
        path.write_text("c1\trate\trates|rate of interest\n", encoding="utf-8")
        concept = load_thesaurus(path, "tsv").get("c1")
        assert concept.alt_labels == ("rates", "rate of interest")

    def test_empty_file_is_error(self, tmp_path):
        path = tmp_path / "thesaurus.tsv"
        path.write_text("", encoding="utf-8")
        with pytest.raises(ThesaurusFormatError, match="no concepts"):
            load_thesaurus(path, "tsv")

    def test_tsv_round_trip_random_thesauri(self, tmp_path):
        rng = random.Random(7)
        words = ["alpha", "beta", "gamma", "delta", "epsilon"]
        for trial in range(25):
            concepts = {}
            for c in range(rng.randint(1, 8)):
                cid = f"c{trial}_{c}"
                pref = " ".join(rng.sample(words, rng.randint(1, 3)))
                alts = []
                for _ in range(rng.randint(0, 3)):
                    alt = " ".join(rng.sample(words, rng.randint(1, 3)))
                    if alt != pref and alt not in alts:
                        alts.append(alt)
                concepts[cid] = Concept(cid, pref, tuple(alts))
            original = Thesaurus(concepts)
            path = tmp_path / f"round{trial}.tsv"
            dump_thesaurus_tsv(original, path)
            reloaded = load_thesaurus(path, "tsv")
            assert reloaded.concepts == original.concepts


class TestCorpusStats:
    def test_two_doc_hand_case(self, tmp_path):
        thesaurus = Thesaurus({c: Concept(c, c + c) for c in ("a", "b")})
        path = tmp_path / "c.jsonl"
        write_jsonl(
            path,
            [
                {"id": "1", "title": "t", "labels": ["a", "b"]},
                {"id": "2", "title": "t", "labels": ["b"]},
            ],
        )
        docs = load_corpus(path, "title", thesaurus=thesaurus).documents
        stats = corpus_stats(docs, thesaurus, [3, 5], [1, 0])
        assert stats.n_labels_used == 2
        assert stats.mean_labels_per_doc == pytest.approx(1.5)
        assert stats.sd_labels_per_doc == pytest.approx(0.5)  # population SD
        assert stats.mean_words_per_doc == pytest.approx(4.0)
        assert stats.mean_concepts_per_doc == pytest.approx(0.5)

    def test_single_doc(self, tmp_path):
        thesaurus = Thesaurus({"a": Concept("a", "aa")})
        path = tmp_path / "c.jsonl"
        write_jsonl(path, [{"id": "1", "title": "t", "labels": ["a"]}])
        docs = load_corpus(path, "title", thesaurus=thesaurus).documents
        stats = corpus_stats(docs, thesaurus, [2], [0])
        assert stats.mean_labels_per_doc == 1.0
        assert stats.sd_labels_per_doc == 0.0

    def test_empty_corpus_error(self):
        thesaurus = Thesaurus({"a": Concept("a", "aa")})
        with pytest.raises(ValueError, match="empty"):
            corpus_stats([], thesaurus, [], [])

    def test_labels_used_matches_brute_force_union(self, tmp_path):
        rng = random.Random(3)
        ids = [f"c{i}" for i in range(12)]
        thesaurus = Thesaurus({cid: Concept(cid, cid * 2) for cid in ids})
        for trial in range(20):
            records = []
            for d in range(rng.randint(1, 15)):
                labels = rng.sample(ids, rng.randint(1, 4))
                records.append({"id": f"d{d}", "title": "t", "labels": labels})
            path = tmp_path / f"s{trial}.jsonl"
            write_jsonl(path, records)
            docs = load_corpus(path, "title", thesaurus=thesaurus).documents
            stats = corpus_stats(docs, thesaurus, [0] * len(docs), [0] * len(docs))
            union = set()
            for doc in docs:
                union |= doc.gold_labels
            assert stats.n_labels_used == len(union)
            assert stats.n_labels_used <= stats.n_concepts_in_thesaurus


def test_corpus_jsonl_round_trip(tmp_path, tiny_corpus):
    path = tmp_path / "dump.jsonl"
    dump_corpus_jsonl(tiny_corpus, path)
    reloaded = load_corpus(path, "title").documents
    assert reloaded == tiny_corpus


ECON_DIR = os.environ.get("SEMANNOT_ECONOMICS_DIR")


@pytest.mark.skipif(
    not ECON_DIR,
    reason="licensed economics corpus not available; set SEMANNOT_ECONOMICS_DIR "
    "to a directory holding corpus.jsonl and thesaurus.tsv to enable",
)
def test_economics_reference_statistics():
    """Published reference statistics of the licensed economics corpus."""
    thesaurus = load_thesaurus(os.path.join(ECON_DIR, "thesaurus.tsv"), "tsv")
    docs = load_corpus(
        os.path.join(ECON_DIR, "corpus.jsonl"), "title", thesaurus=thesaurus
    ).documents
    stats = corpus_stats(docs, thesaurus, [0] * len(docs), [0] * len(docs))
    assert stats.n_docs == 62_924
    assert stats.n_concepts_in_thesaurus == 6_217
    assert stats.n_labels_used == 4_682
    assert stats.mean_labels_per_doc == pytest.approx(5.26, abs=0.005)
