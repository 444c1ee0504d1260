import os

import pytest

from annotext import DEMO_MANIFEST, DEMO_MODEL, GOLD_CORPUS
from annotext.config import PipelineConfig
from annotext.edl.model import ClassifierModel
from annotext.pipeline import Annotator
from annotext.resources import load_resources

DEMO_SENTENCE = ("Google CEO Eric Schmidt said that the competition between Apple and Google "
                 "and iOS vs. Android is 'the defining fight of the tech industry'.")
VLADE_SENTENCE = "Vlade Divac Serbian NBA player used to play for LA Lakers."


@pytest.fixture(scope="session")
def demo_resources():
    return load_resources(DEMO_MANIFEST)


@pytest.fixture(scope="session")
def demo_model():
    return ClassifierModel.load(DEMO_MODEL)


@pytest.fixture(scope="session")
def annotator(demo_resources, demo_model):
    return Annotator(demo_resources, demo_model, PipelineConfig())


@pytest.fixture(scope="session")
def gold_path():
    assert os.path.isfile(GOLD_CORPUS)
    return GOLD_CORPUS


def write_tsv(path, rows):
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write("\t".join(str(c) for c in row) + "\n")
    return str(path)


def make_resources(mentions=None, cooccurrence=None, importance=None, topics=None,
                   parents=None, entity_topics=None, metadata=None, hashtags=None,
                   lexicon=None):
    """In-memory ResourceSet for unit tests; every argument is optional."""
    from annotext.resources import (EntityCooccurDict, MentionEntityDict, MentionEntry,
                                    ResourceSet, SentimentLexicon, TopicOntology)
    table = {}
    for surface, cands in (mentions or {}).items():
        table[surface] = [MentionEntry(e, 1, p) for e, p in cands]
    neighbors = {}
    for (a, b), c in (cooccurrence or {}).items():
        neighbors.setdefault(a, []).append((b, c))
    topic_ids = set(topics or ())
    for child, ps in (parents or {}).items():
        topic_ids.add(child)
        topic_ids.update(ps)
    for lst in (entity_topics or {}).values():
        topic_ids.update(t for t, _ in lst)
    ontology = TopicOntology({t: (t, t.title()) for t in topic_ids}, parents or {})
    return ResourceSet(
        mentions=MentionEntityDict({"en": table}),
        cooccurrence=EntityCooccurDict(neighbors),
        importance=dict(importance or {}),
        ontology=ontology,
        entity_topics={e: tuple(v) for e, v in (entity_topics or {}).items()},
        topic_hashtags={t: tuple(v) for t, v in (hashtags or {}).items()},
        lexicon=lexicon or SentimentLexicon(),
        metadata=dict(metadata or {}),
    )


_acceptance_results = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance_results.append((report.nodeid.split("::")[-1], report.outcome))
    elif report.when == "setup" and report.failed and "test_acceptance.py" in report.nodeid:
        _acceptance_results.append((report.nodeid.split("::")[-1], "error"))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance_results:
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}")
