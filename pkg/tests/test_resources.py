import json
import math
import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from annotext.errors import FormatError, InvariantViolation, MissingFile, UnknownLanguage, UnknownTopic
from annotext.resources import (EntityCooccurDict, TopicOntology, candidates_for,
                                cooccurrence_count, entity_importance, load_cooccurrence,
                                load_mention_table, load_metadata, load_resources, read_manifest,
                                topic_distance)
from conftest import write_tsv


def toy_manifest(tmp_path, **overrides):
    """Six-entry toy dictionaries plus a manifest naming them."""
    files = {
        "mentions.en.tsv": [("android", "Android_OS", 6, 0.6), ("android", "Android_robot", 3, 0.3),
                            ("android", "NIL", 1, 0.1), ("apple", "Apple_Inc", 5, 0.5),
                            ("apple", "Apple_fruit", 5, 0.5), ("Café", "Cafe", 1, 1.0)],
        "cooc.tsv": [("A", "B", 12), ("A", "C", 19), ("B", "C", 40), ("C", "D", 10),
                     ("D", "E", 11), ("E", "F", 100)],
        "importance.tsv": [("A", 0.1), ("B", 0.2), ("C", 0.3), ("D", 0.4), ("E", 0.5), ("F", 0.6)],
        "topics.tsv": [("t1", "one", "One"), ("t2", "two", "Two"), ("t3", "three", "Three"),
                       ("t4", "four", "Four"), ("t5", "five", "Five"), ("t6", "six", "Six")],
        "parents.tsv": [("t2", "t1"), ("t3", "t1"), ("t4", "t2"), ("t5", "t4"), ("t3", "t4"),
                        ("t2", "t3")],
        "etopics.tsv": [("A", "t1", 1.0), ("B", "t2", 0.5), ("C", "t3", 0.5), ("D", "t4", 0.1),
                        ("E", "t5", 0.9), ("F", "t6", 1.0)],
        "hashtags.tsv": [("t1", "#One", 1.0), ("t2", "Two", 2.0), ("t3", "Three", 3.0),
                         ("t4", "Four", 4.0), ("t5", "Five", 5.0), ("t6", "Six", 6.0)],
        "lexicon.tsv": [("good", 1, 1.0), ("bad", -1, 1.0), ("great", 1, 2.0), ("awful", -1, 2.0),
                        ("fine", 1, 0.5), ("meh", -1, 0.5)],
        "negations.txt": [("not",), ("no",), ("never",), ("NOR",), ("without",), ("cannot",)],
        "metadata.tsv": [("A", "PERSON", "Person A", "http://a"),
                         ("B", "LOCATION", "Place B", "http://b", 1000, "Europe/Paris", 48.8, 2.3),
                         ("C", "ORGANIZATION", "Org C", ""), ("D", "", "", ""),
                         ("E", "EVENT", "Event E", "http://e"), ("F", "other", "F", "http://f")],
    }
    files.update(overrides)
    paths = {name: write_tsv(tmp_path / name, rows) for name, rows in files.items()}
    manifest = {"mention_dicts": {"en": paths["mentions.en.tsv"]}, "cooccurrence": paths["cooc.tsv"],
                "importance": paths["importance.tsv"], "topics": paths["topics.tsv"],
                "topic_parents": paths["parents.tsv"], "entity_topics": paths["etopics.tsv"],
                "topic_hashtags": paths["hashtags.tsv"], "lexicon": paths["lexicon.tsv"],
                "negations": paths["negations.txt"], "metadata": paths["metadata.tsv"]}
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps(manifest), encoding="utf-8")
    return path


class TestLoad:
    def test_counts_match_fixture(self, tmp_path):
        res = load_resources(toy_manifest(tmp_path))
        summary = res.summary()
        assert summary["mention_surfaces"] == 3
        assert summary["importance"] == 6 and summary["topics"] == 6
        assert summary["topic_edges"] == 6 and summary["entity_topics"] == 6
        assert summary["topic_hashtags"] == 6 and summary["lexicon_words"] == 6
        assert summary["negations"] == 6 and summary["metadata"] == 6
        assert res.cooccurrence.count("C", "A") == 19
        assert res.cooccurrence.count("B", "C") == 40

    def test_surfaces_are_normalized(self, tmp_path):
        res = load_resources(toy_manifest(tmp_path))
        assert candidates_for("en", "cafe", res.mentions) == [("Cafe", 1.0)]

    def test_hashtag_and_negation_cleanup(self, tmp_path):
        res = load_resources(toy_manifest(tmp_path))
        assert res.topic_hashtags["t1"] == (("One", 1.0),)
        assert "nor" in res.lexicon.negations

    def test_metadata(self, tmp_path):
        res = load_resources(toy_manifest(tmp_path))
        assert res.metadata["B"].location.time_zone == "Europe/Paris"
        assert res.metadata["D"].entity_type.value == "OTHER"
        assert res.display_name("D") == "D"
        assert res.display_name("not_in_metadata") == "not in metadata"

    def test_missing_ontology_file(self, tmp_path):
        path = toy_manifest(tmp_path)
        (tmp_path / "topics.tsv").unlink()
        with pytest.raises(MissingFile):
            load_resources(path)

    def test_missing_manifest_key(self, tmp_path):
        path = toy_manifest(tmp_path)
        data = json.loads(path.read_text())
        del data["topic_parents"]
        path.write_text(json.dumps(data))
        with pytest.raises(MissingFile):
            load_resources(path)

    def test_prior_above_one(self, tmp_path):
        path = toy_manifest(tmp_path, **{"mentions.en.tsv": [("x", "X", 1, 0.5), ("y", "Y", 1, 1.5)]})
        with pytest.raises(InvariantViolation) as info:
            load_resources(path)
        assert info.value.line == 2

    def test_prior_sum_above_one(self, tmp_path):
        path = toy_manifest(tmp_path, **{"mentions.en.tsv": [("x", "X", 1, 0.6), ("x", "Y", 1, 0.6)]})
        with pytest.raises(InvariantViolation):
            load_resources(path)

    def test_bad_number(self, tmp_path):
        path = toy_manifest(tmp_path, **{"importance.tsv": [("A", "high")]})
        with pytest.raises(FormatError) as info:
            load_resources(path)
        assert info.value.line == 1

    def test_wrong_column_count(self, tmp_path):
        path = toy_manifest(tmp_path, **{"cooc.tsv": [("A", "B")]})
        with pytest.raises(FormatError):
            load_resources(path)

    def test_self_loop(self, tmp_path):
        path = toy_manifest(tmp_path, **{"parents.tsv": [("t1", "t1")]})
        with pytest.raises(InvariantViolation):
            load_resources(path)

    def test_edge_to_unknown_topic(self, tmp_path):
        path = toy_manifest(tmp_path, **{"parents.tsv": [("t1", "t9")]})
        with pytest.raises(InvariantViolation):
            load_resources(path)

    def test_bad_polarity(self, tmp_path):
        path = toy_manifest(tmp_path, **{"lexicon.tsv": [("good", 2, 1.0)]})
        with pytest.raises(InvariantViolation):
            load_resources(path)

    def test_bad_coordinates(self, tmp_path):
        path = toy_manifest(tmp_path, **{"metadata.tsv": [("B", "LOCATION", "B", "", 1, "tz", 91, 0)]})
        with pytest.raises(InvariantViolation):
            load_resources(path)

    def test_tsv_manifest(self, tmp_path):
        json_path = toy_manifest(tmp_path)
        data = read_manifest(json_path)
        rows = []
        for key, value in data.items():
            if isinstance(value, dict):
                rows.extend((f"{key}.{lang}", p) for lang, p in value.items())
            else:
                rows.append((key, value))
        tsv = write_tsv(tmp_path / "manifest.tsv", rows)
        assert load_resources(tsv).summary() == load_resources(json_path).summary()

    def test_demo_resources(self, demo_resources):
        assert demo_resources.languages == {"ar", "de", "en", "es", "fr", "it"}
        assert len(demo_resources.language_profiles) == 6
        assert demo_resources.importance["Apple_Inc"] == 0.66
        assert demo_resources.importance["Apple_fruit"] == 0.64


class TestLookups:
    def test_android_candidates(self, demo_resources):
        cands = dict(candidates_for("en", "android", demo_resources.mentions))
        assert {"Android_OS", "Android_robot"} <= set(cands)
        assert cands["Android_OS"] > cands["Android_robot"]

    def test_absent_surface(self, demo_resources):
        assert candidates_for("en", "zzzz-unknown", demo_resources.mentions) == []

    def test_unknown_language(self, demo_resources):
        with pytest.raises(UnknownLanguage):
            candidates_for("xx", "android", demo_resources.mentions)

    def test_cooccurrence_both_directions(self):
        d = EntityCooccurDict({"A": [("B", 12)]})
        assert cooccurrence_count("A", "B", d) == cooccurrence_count("B", "A", d) == 12
        assert cooccurrence_count("A", "A", d) == 0
        assert cooccurrence_count("unknown", "B", d) == 0

    def test_cooccurrence_sorted_on_load(self, tmp_path):
        rows = [("H", f"N{i:02d}", 10 + i) for i in range(30)]
        d = load_cooccurrence(write_tsv(tmp_path / "c.tsv", rows))
        assert d.neighbors["H"][0] == ("N29", 39)
        assert [c for _, c in d.neighbors["H"]] == sorted(range(10, 40), reverse=True)
        assert d.max_count["H"] == 39

    def test_cooccurrence_rejects_unpruned(self, tmp_path):
        with pytest.raises(InvariantViolation):
            load_cooccurrence(write_tsv(tmp_path / "low.tsv", [("H", "N", 9)]))
        rows = [("H", f"N{i:02d}", 50) for i in range(31)]
        with pytest.raises(InvariantViolation) as info:
            load_cooccurrence(write_tsv(tmp_path / "many.tsv", rows))
        assert info.value.line == 31

    def test_importance_default(self, demo_resources):
        assert entity_importance("Apple_Inc", demo_resources.importance) == 0.66
        assert entity_importance("nobody", demo_resources.importance) == 0.0


class TestDistance:
    def test_demo_fragment(self, demo_resources):
        onto = demo_resources.ontology
        assert topic_distance("apple", "google", onto) == 4
        assert topic_distance("food", "google", onto) == 5
        assert topic_distance("google", "google", onto) == 0

    def test_unknown_topic(self, demo_resources):
        with pytest.raises(UnknownTopic):
            topic_distance("apple", "nope", demo_resources.ontology)

    def test_disconnected(self):
        onto = TopicOntology({"a": ("a", "A"), "b": ("b", "B")}, {})
        assert topic_distance("a", "b", onto) == math.inf

    def test_demo_ontology_against_networkx(self, demo_resources):
        onto = demo_resources.ontology
        graph = nx.Graph()
        graph.add_nodes_from(onto.nodes)
        graph.add_edges_from((c, p) for c, ps in onto.parents.items() for p in ps)
        lengths = dict(nx.all_pairs_shortest_path_length(graph))
        for a in onto.nodes:
            for b in onto.nodes:
                assert onto.distance(a, b) == lengths[a].get(b, math.inf)

    @settings(max_examples=150, deadline=None)
    @given(st.integers(2, 14), st.lists(st.tuples(st.integers(0, 13), st.integers(0, 13)),
                                         max_size=30))
    def test_random_graphs_against_networkx(self, n, edges):
        nodes = {f"t{i}": (f"t{i}", f"T{i}") for i in range(n)}
        parents = {}
        for a, b in edges:
            if a < n and b < n and a != b:
                parents.setdefault(f"t{a}", []).append(f"t{b}")
        onto = TopicOntology(nodes, parents)
        graph = nx.Graph()
        graph.add_nodes_from(nodes)
        graph.add_edges_from((c, p) for c, ps in parents.items() for p in ps)
        lengths = dict(nx.all_pairs_shortest_path_length(graph))
        rng = random.Random(n)
        for _ in range(20):
            a, b = rng.choice(list(nodes)), rng.choice(list(nodes))
            assert onto.distance(a, b) == lengths[a].get(b, math.inf)
            assert onto.distance(a, b) == onto.distance(b, a)


def test_mention_table_line_numbers(tmp_path):
    path = write_tsv(tmp_path / "m.tsv", [("x", "X", "1", "0.5"), ("y", "Y", "-1", "0.5")])
    with pytest.raises(InvariantViolation) as info:
        load_mention_table(path)
    assert info.value.line == 2 and str(path) in str(info.value)


def test_metadata_field_count(tmp_path):
    path = write_tsv(tmp_path / "meta.tsv", [("A", "PERSON", "A", "u", 1, "tz")])
    with pytest.raises(FormatError):
        load_metadata(path)
