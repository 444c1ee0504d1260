import json
import os
import random
import time
from collections import Counter, defaultdict

import pytest
from hypothesis import given, settings, strategies as st

from annotext.builder import (AnnotatedCorpusDoc, BuildReport, GoldAnnotation, build_all,
                              build_cooccurrence, build_mention_dict, count_cooccurrence,
                              count_mentions, merge_mention_counts, priors_from_counts,
                              prune_cooccurrence, read_cooccurrence, read_corpus,
                              read_mention_dict, write_cooccurrence, write_mention_dict)
from annotext.errors import FormatError
from annotext.text import normalize_key

ENTITIES = ["A", "B", "C", "D", "E", "NIL", "MISC"]
SURFACES = ["jordan", "apple", "Paris", "New York", "café", "the"]


def random_corpus(rng, max_tokens=200):
    """A few documents with random non-overlapping annotations."""
    docs = []
    for d in range(rng.randint(0, 4)):
        n_tokens = rng.randint(0, max_tokens)
        anns, pos = [], 0
        while pos < n_tokens:
            pos += rng.randint(0, 12)
            length = rng.randint(1, 3)
            if pos + length > n_tokens:
                break
            anns.append(GoldAnnotation(pos, pos + length, rng.choice(SURFACES),
                                       rng.choice(ENTITIES)))
            pos += length
        docs.append(AnnotatedCorpusDoc(rng.choice(["en", "fr"]), "x " * n_tokens, anns, f"d{d}"))
    return docs


def oracle_priors(docs, lang):
    counts = defaultdict(Counter)
    for doc in docs:
        if doc.language == lang:
            for a in doc.annotations:
                counts[normalize_key(a.surface)][a.entity_id] += 1
    return {s: {e: c / sum(cnt.values()) for e, c in cnt.items()} for s, cnt in counts.items()}


def oracle_pairs(docs, window=50):
    """Every ordered-index pair of linked annotations, checked directly."""
    counts = Counter()
    for doc in docs:
        linked = [a for a in doc.annotations if a.entity_id not in ("NIL", "MISC")]
        for i in range(len(linked)):
            for j in range(i + 1, len(linked)):
                a, b = linked[i], linked[j]
                if a.entity_id != b.entity_id and abs(a.token_start - b.token_start) < window:
                    counts[tuple(sorted((a.entity_id, b.entity_id)))] += 1
    return counts


def oracle_prune(raw, min_count=10, top_k=30):
    neighbors = defaultdict(list)
    for (a, b), c in raw.items():
        neighbors[a].append((b, c))
        neighbors[b].append((a, c))
    out = {}
    for e, lst in neighbors.items():
        kept = sorted([p for p in lst if p[1] >= min_count], key=lambda p: (-p[1], p[0]))[:top_k]
        if kept:
            out[e] = kept
    return out


class TestMentionDict:
    def test_toy_priors(self):
        anns = [GoldAnnotation(i, i + 1, "Jordan", "Basketball_Jordan") for i in range(3)]
        anns.append(GoldAnnotation(5, 6, "jordan", "Professor_Jordan"))
        table, report = build_mention_dict([AnnotatedCorpusDoc("en", "", anns)], "en")
        assert [(e.entity_id, e.count, e.prior) for e in table["jordan"]] == [
            ("Basketball_Jordan", 3, 0.75), ("Professor_Jordan", 1, 0.25)]
        assert report.documents == 1 and report.mentions == 4 and report.entities == 2

    def test_single_observation(self):
        doc = AnnotatedCorpusDoc("en", "", [GoldAnnotation(0, 1, "x", "X")])
        assert build_mention_dict([doc], "en")[0]["x"][0].prior == 1.0

    def test_empty(self):
        table, report = build_mention_dict([], "en")
        assert table == {} and report.documents == 0

    def test_other_language_ignored(self):
        doc = AnnotatedCorpusDoc("fr", "", [GoldAnnotation(0, 1, "x", "X")])
        table, report = build_mention_dict([doc], "en")
        assert table == {} and report.documents == 0

    def test_nil_counted(self):
        doc = AnnotatedCorpusDoc("en", "", [GoldAnnotation(0, 1, "the", "NIL"),
                                            GoldAnnotation(1, 2, "the", "MISC")])
        table, _ = build_mention_dict([doc], "en")
        assert {e.entity_id: e.prior for e in table["the"]} == {"NIL": 0.5, "MISC": 0.5}

    def test_merge_order_independent(self):
        rng = random.Random(5)
        docs = random_corpus(rng) + random_corpus(rng) + random_corpus(rng)
        parts = [count_mentions(docs[i::3], "en") for i in range(3)]
        a = priors_from_counts(merge_mention_counts(parts))
        b = priors_from_counts(merge_mention_counts(parts[::-1]))
        assert a == b == build_mention_dict(docs, "en")[0]


class TestCooccurrence:
    def _doc(self, *positions):
        anns = [GoldAnnotation(p, p + 1, f"e{i}", f"E{i}") for i, p in enumerate(positions)]
        return AnnotatedCorpusDoc("en", "", anns)

    def test_within_window(self):
        assert count_cooccurrence([self._doc(0, 30)]) == {("E0", "E1"): 1}

    def test_outside_window(self):
        assert count_cooccurrence([self._doc(0, 80)]) == {}

    def test_window_boundary_is_exclusive(self):
        assert count_cooccurrence([self._doc(0, 49)]) == {("E0", "E1"): 1}
        assert count_cooccurrence([self._doc(0, 50)]) == {}

    def test_single_entity(self):
        assert count_cooccurrence([self._doc(3)]) == {}

    def test_nil_and_self_pairs_excluded(self):
        doc = AnnotatedCorpusDoc("en", "", [GoldAnnotation(0, 1, "a", "A"),
                                            GoldAnnotation(1, 2, "a", "A"),
                                            GoldAnnotation(2, 3, "the", "NIL"),
                                            GoldAnnotation(3, 4, "b", "MISC")])
        assert count_cooccurrence([doc]) == {}

    def test_languages_aggregate(self):
        en, fr = self._doc(0, 1), self._doc(0, 1)
        fr.language = "fr"
        assert count_cooccurrence([en, fr]) == {("E0", "E1"): 2}

    def test_raw_then_pruned(self):
        # co-occurring once: present raw, gone after pruning
        pruned, _, raw = build_cooccurrence([self._doc(0, 10)])
        assert raw[("E0", "E1")] == 1 and pruned == {}


class TestPrune:
    def test_top_thirty(self):
        raw = {("H", f"N{i:02d}"): 10 + i for i in range(40)}
        pruned = prune_cooccurrence(raw)
        assert len(pruned["H"]) == 30
        assert [n for n, _ in pruned["H"]] == [f"N{i:02d}" for i in range(39, 9, -1)]

    def test_drop_below_ten(self):
        report = BuildReport()
        pruned = prune_cooccurrence({("A", "B"): 9, ("A", "C"): 10}, report=report)
        assert pruned == {"A": [("C", 10)], "C": [("A", 10)]}
        assert report.pruned == 2

    def test_ties_by_id(self):
        raw = {("H", n): 20 for n in ["z", "b", "m"]}
        assert [n for n, _ in prune_cooccurrence(raw, top_k=2)["H"]] == ["b", "m"]

    @settings(max_examples=200, deadline=None)
    @given(st.dictionaries(st.tuples(st.sampled_from("ABCDEFG"), st.sampled_from("ABCDEFG"))
                           .filter(lambda p: p[0] < p[1]), st.integers(1, 40)),
           st.integers(1, 4))
    def test_monotone(self, raw, top_k):
        pruned = prune_cooccurrence(raw, top_k=top_k)
        for head, kept in pruned.items():
            assert len(kept) <= top_k and all(c >= 10 for _, c in kept)
            all_counts = sorted((c for (a, b), c in raw.items() if head in (a, b)), reverse=True)
            dropped = all_counts[len(kept):]
            assert all(min(c for _, c in kept) >= d for d in dropped)


def test_oracle_equivalence_random_corpora():
    rng = random.Random(2024)
    start = time.perf_counter()
    for _ in range(600):
        docs = random_corpus(rng)
        for lang in ("en", "fr"):
            table, _ = build_mention_dict(docs, lang)
            got = {s: {e.entity_id: e.prior for e in entries} for s, entries in table.items()}
            assert got == oracle_priors(docs, lang)
            for entries in table.values():
                assert abs(sum(e.prior for e in entries) - 1.0) <= 1e-9
        pruned, _, raw = build_cooccurrence(docs, min_count=2, top_k=3)
        expected = oracle_pairs(docs)
        assert dict(raw) == dict(expected)
        assert pruned == oracle_prune(expected, 2, 3)
    assert time.perf_counter() - start < 30


class TestFiles:
    def test_mention_dict_round_trip_unicode(self, tmp_path):
        docs = [AnnotatedCorpusDoc("fr", "", [GoldAnnotation(0, 1, "Zürich", "Zurich"),
                                             GoldAnnotation(1, 2, "東京", "Tokyo"),
                                             GoldAnnotation(2, 3, "القاهرة", "Cairo"),
                                             GoldAnnotation(3, 4, "1/3", "Third")])]
        table, _ = build_mention_dict(docs * 3, "fr")
        path = tmp_path / "m.tsv"
        write_mention_dict(table, path)
        assert read_mention_dict(path) == table
        first = path.read_bytes()
        write_mention_dict(read_mention_dict(path), path)
        assert path.read_bytes() == first

    def test_prior_bits_survive(self, tmp_path):
        doc = AnnotatedCorpusDoc("en", "", [GoldAnnotation(i, i + 1, "x", "XYZ"[i % 3])
                                            for i in range(7)])
        table, _ = build_mention_dict([doc], "en")
        write_mention_dict(table, tmp_path / "m.tsv")
        assert [e.prior for e in read_mention_dict(tmp_path / "m.tsv")["x"]] == [3 / 7, 2 / 7, 2 / 7]

    def test_cooccurrence_round_trip(self, tmp_path):
        rng = random.Random(9)
        raw = {tuple(sorted(rng.sample("ABCDEFGHIJ", 2))): rng.randint(1, 60) for _ in range(40)}
        pruned = prune_cooccurrence(raw)
        write_cooccurrence(pruned, tmp_path / "c.tsv")
        assert read_cooccurrence(tmp_path / "c.tsv") == pruned

    def test_unwritable(self, tmp_path):
        with pytest.raises(OSError):
            write_mention_dict({}, tmp_path / "missing" / "m.tsv")

    def test_malformed_lines_skipped(self, tmp_path):
        good = {"lang": "en", "text": "a b", "annotations": [{"s": 0, "e": 1, "surface": "a", "id": "A"}]}
        lines = [json.dumps(good), "{not json", json.dumps({"lang": "en"}),
                 json.dumps({**good, "annotations": [{"s": 1, "e": 0, "surface": "a", "id": "A"}]}),
                 json.dumps({**good, "annotations": [{"s": 0, "e": 2, "surface": "a", "id": "A"},
                                                     {"s": 1, "e": 2, "surface": "b", "id": "B"}]}),
                 ""]
        path = tmp_path / "c.jsonl"
        path.write_text("\n".join(lines), encoding="utf-8")
        report = BuildReport()
        docs = list(read_corpus([str(path)], report))
        assert len(docs) == 1 and report.malformed == 4

    def test_doc_json_round_trip(self):
        obj = {"id": "7", "lang": "en", "text": "hi",
               "annotations": [{"s": 0, "e": 1, "surface": "hi", "id": "NIL"}]}
        assert AnnotatedCorpusDoc.from_json(obj).to_json() == obj
        with pytest.raises(FormatError):
            AnnotatedCorpusDoc.from_json([1, 2])


def _write_corpus(path, docs):
    with open(path, "w", encoding="utf-8") as fh:
        for d in docs:
            fh.write(json.dumps(d.to_json(), ensure_ascii=False) + "\n")


class TestBuildAll:
    def test_deterministic_and_sharding_invariant(self, tmp_path):
        rng = random.Random(77)
        docs = [d for _ in range(30) for d in random_corpus(rng)]
        _write_corpus(tmp_path / "all.jsonl", docs)
        for i in range(3):
            _write_corpus(tmp_path / f"shard{i}.jsonl", docs[i::3])
        build_all([str(tmp_path / "all.jsonl")], "all", tmp_path / "one", min_count=2)
        build_all([str(tmp_path / "all.jsonl")], "all", tmp_path / "two", min_count=2)
        build_all([str(tmp_path / f"shard{i}.jsonl") for i in range(3)], "all",
                  tmp_path / "sharded", min_count=2, workers=2)
        for name in ("mentions.en.tsv", "mentions.fr.tsv", "cooccurrence.tsv"):
            one = (tmp_path / "one" / name).read_bytes()
            assert one == (tmp_path / "two" / name).read_bytes()
            assert one == (tmp_path / "sharded" / name).read_bytes()
        report = json.loads((tmp_path / "one" / "report.json").read_text())
        assert report["documents"] == len(docs)

    def test_single_language(self, tmp_path):
        docs = [AnnotatedCorpusDoc("en", "", [GoldAnnotation(0, 1, "x", "X")]),
                AnnotatedCorpusDoc("fr", "", [GoldAnnotation(0, 1, "y", "Y")])]
        _write_corpus(tmp_path / "c.jsonl", docs)
        build_all([str(tmp_path / "c.jsonl")], "fr", tmp_path / "out")
        assert sorted(os.listdir(tmp_path / "out")) == ["cooccurrence.tsv", "mentions.fr.tsv",
                                                         "report.json"]


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=30))
def test_normalize_key_idempotent(text):
    assert normalize_key(normalize_key(text)) == normalize_key(text)
