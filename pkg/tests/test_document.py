import json

import pytest
from hypothesis import given, settings, strategies as st

from annotext.document import (AnnotationKind, Document, EntityAnnotation, EntityType,
                               HashtagAnnotation, Mention, CandidateEntity, SentenceSpan,
                               SentimentLabel, SentimentResult, Token, TopicAnnotation,
                               new_document, parse_response, response_dict, serialize_response,
                               validate)
from annotext.errors import OversizeInput


def _doc_with(entities=(), topics=(), hashtags=(), sentiment=None):
    doc = Document(text="some text", language="en")
    doc.entity_annotations = list(entities)
    doc.topic_annotations = list(topics)
    doc.hashtag_annotations = list(hashtags)
    doc.sentiment = sentiment
    return doc


class TestNewDocument:
    def test_within_limit(self):
        assert new_document("abc", max_bytes=3).text == "abc"

    def test_oversize_counts_utf8_bytes(self):
        # 2 characters, 4 bytes
        with pytest.raises(OversizeInput):
            new_document("éé", max_bytes=3)

    def test_oversize_carries_sizes(self):
        with pytest.raises(OversizeInput) as info:
            new_document("x" * 11, max_bytes=10)
        assert info.value.size == 11 and info.value.limit == 10


class TestAnnotationKind:
    @pytest.mark.parametrize("alias,kind", [
        ("entity", AnnotationKind.ENTITY), ("ENTITY", AnnotationKind.ENTITY),
        ("klout_topic", AnnotationKind.KLOUT_TOPIC), ("hashtag", AnnotationKind.HASHTAG),
        ("sentiment", AnnotationKind.SENTIMENT),
    ])
    def test_parse(self, alias, kind):
        assert AnnotationKind.parse(alias) is kind

    def test_unknown(self):
        with pytest.raises(ValueError):
            AnnotationKind.parse("syntax")


class TestResponse:
    def test_entities_sorted_by_score(self):
        doc = _doc_with(entities=[EntityAnnotation("a", "A", 0.2), EntityAnnotation("b", "B", 0.9)])
        items = response_dict(doc)["annotation_summary"][0]["annotation_identifier"]
        assert [i["id_str"] for i in items] == ["b", "a"]

    def test_selection_limits_sections(self):
        doc = _doc_with(entities=[EntityAnnotation("a", "A", 0.5)],
                        topics=[TopicAnnotation("t", "tee", 1.0)])
        out = response_dict(doc, [AnnotationKind.KLOUT_TOPIC])
        assert [s["type"] for s in out["annotation_summary"]] == ["KLOUT_TOPIC"]
        assert "sentiment" not in out

    def test_sentiment_defaults_to_zero(self):
        assert response_dict(_doc_with())["sentiment"] == 0.0

    def test_optional_url_omitted(self):
        doc = _doc_with(entities=[EntityAnnotation("a", "A", 0.5)])
        item = response_dict(doc)["annotation_summary"][0]["annotation_identifier"][0]
        assert "id_url" not in item and item["type"] == "OTHER"

    def test_round_trip(self):
        doc = _doc_with(
            entities=[EntityAnnotation("01vpr3", "Vlade Divac", 0.9456, EntityType.PERSON,
                                       "https://en.wikipedia.org/wiki/Vlade_Divac")],
            topics=[TopicAnnotation("6467710261455026125", "nba", 1.0)],
            hashtags=[HashtagAnnotation("NBA", 54285.7515)],
            sentiment=SentimentResult(0.25, SentimentLabel.POSITIVE))
        back = parse_response(serialize_response(doc))
        assert back.text == doc.text and back.language == "en"
        assert [(e.entity_id, e.score, e.entity_type, e.kb_url) for e in back.entity_annotations] \
            == [(e.entity_id, e.score, e.entity_type, e.kb_url) for e in doc.entity_annotations]
        assert back.topic_annotations == doc.topic_annotations
        assert back.hashtag_annotations == doc.hashtag_annotations
        assert back.sentiment.score == 0.25

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.tuples(st.text(min_size=1, max_size=8),
                              st.floats(0, 1, allow_nan=False)), max_size=6),
           st.floats(-5, 5, allow_nan=False))
    def test_round_trip_property(self, ents, sentiment):
        doc = _doc_with(entities=[EntityAnnotation(i, "", s) for i, s in ents],
                        sentiment=SentimentResult(sentiment, SentimentLabel.NEUTRAL))
        payload = serialize_response(doc)
        assert json.loads(payload) == json.loads(serialize_response(parse_response(payload)))


def _valid_doc():
    text = "Apple is good."
    doc = Document(text=text, language="en")
    doc.tokens = [Token("Apple", 0, 5, "apple"), Token("is", 6, 8, "is"),
                  Token("good", 9, 13, "good"), Token(".", 13, 14, ".")]
    doc.sentences = [SentenceSpan(0, 4, 0, 14)]
    doc.mentions = [Mention(0, 1, "Apple", [CandidateEntity("Apple_Inc", 0.5)])]
    return doc


class TestValidate:
    def test_valid(self):
        assert validate(_valid_doc()) == []

    def test_inverted_token(self):
        doc = _valid_doc()
        doc.tokens[1] = Token("is", 8, 6, "is")
        assert any("empty or inverted" in p for p in validate(doc))

    def test_surface_mismatch(self):
        doc = _valid_doc()
        doc.tokens[0] = Token("Apples", 0, 5, "apples")
        assert any("does not match" in p for p in validate(doc))

    def test_mention_overlap(self):
        doc = _valid_doc()
        doc.mentions.append(Mention(0, 2, "Apple is", [CandidateEntity("X", 1.0)]))
        assert "mention overlap at token 0" in validate(doc)

    def test_mention_too_long(self):
        doc = _valid_doc()
        doc.mentions = [Mention(0, 0, "", [CandidateEntity("X", 1.0)])]
        assert any("length 0" in p for p in validate(doc))

    def test_sentence_gap(self):
        doc = _valid_doc()
        doc.sentences = [SentenceSpan(0, 3, 0, 13)]
        assert any("cover 3 of 4" in p for p in validate(doc))

    def test_bad_prior_and_unscored_label(self):
        doc = _valid_doc()
        doc.mentions[0].candidates = [CandidateEntity("X", 1.5, label=True)]
        problems = validate(doc)
        assert any("outside [0, 1]" in p for p in problems)
        assert any("labeled but unscored" in p for p in problems)

    def test_entity_score_range(self):
        doc = _valid_doc()
        doc.entity_annotations = [EntityAnnotation("X", "x", 1.2)]
        assert any("score 1.2" in p for p in validate(doc))


def test_debug_json_is_json():
    data = json.loads(_valid_doc().debug_json())
    assert data["mentions"][0]["resolution_pass"] == "UNRESOLVED"
