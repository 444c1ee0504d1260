"""Stage orchestration: raw text in, annotated :class:`Document` out."""

from __future__ import annotations

import time
from contextlib import contextmanager
from typing import Iterable, Optional

from .config import STAGES, PipelineConfig
from .document import (ALL_KINDS, AnnotationKind, Document, SentenceSpan, new_document,
                       serialize_response)
from .edl.disambiguate import disambiguate
from .edl.model import ClassifierModel
from .enrichment import decorate_metadata, project_topics, recommend_hashtags, score_sentiment
from .errors import UnknownLanguage
from .extraction import extract_mentions
from .langid import detect_language
from .resources import ResourceSet
from .text import abbreviations_for, break_sentences, make_tokens, normalize_text, tokenize


class UnsupportedLanguage(UnknownLanguage):
    pass


def stages_for(selection: Iterable[AnnotationKind], config: PipelineConfig) -> frozenset:
    """Stages needed to produce ``selection``; language and tokens always run."""
    kinds = frozenset(selection)
    wanted = {"language", "normalize", "sentences", "tokens"}
    if kinds & {AnnotationKind.ENTITY, AnnotationKind.KLOUT_TOPIC, AnnotationKind.HASHTAG}:
        wanted |= {"mentions", "edl"}
    if kinds & {AnnotationKind.KLOUT_TOPIC, AnnotationKind.HASHTAG}:
        wanted.add("topics")
    if AnnotationKind.HASHTAG in kinds:
        wanted.add("hashtags")
    if AnnotationKind.SENTIMENT in kinds:
        wanted.add("sentiment")
    if AnnotationKind.ENTITY in kinds:
        wanted.add("metadata")
    optional = wanted - {"language", "normalize", "sentences", "tokens"}
    return frozenset(wanted - (optional - config.enabled))


def prepare(doc: Document, resources: ResourceSet, config: PipelineConfig,
            language: Optional[str] = None, extract: bool = True) -> Document:
    """Run language detection through mention extraction, untimed."""
    _language(doc, resources, config, language)
    _normalize(doc)
    _sentences(doc, resources)
    _tokens(doc)
    if extract:
        _mentions(doc, resources, config)
    return doc


def _language(doc, resources, config, override):
    if override is not None:
        lang = override
        doc.language_probability = None
    elif not doc.text.strip():
        return
    else:
        lang, prob = detect_language(doc.text, resources.language_profiles)
        doc.language_probability = prob
    if lang not in config.languages or lang not in resources.languages:
        raise UnsupportedLanguage(f"unsupported language {lang!r}")
    doc.language = lang


def _normalize(doc):
    doc.normalized_text, doc.offset_map = normalize_text(doc.text, doc.language)


def _sentences(doc, resources):
    norm = doc.normalized_text
    abbreviations = abbreviations_for(doc.language, resources.abbreviations)
    # token ranges are filled in by the tokens stage
    doc.sentences = [SentenceSpan(0, 0, a, b)
                     for a, b in break_sentences(norm, doc.language, abbreviations)]


def _tokens(doc):
    norm, offsets = doc.normalized_text, doc.offset_map
    tokens = []
    sentences = []
    for sent in doc.sentences:
        spans = tokenize(norm, sent.char_start, sent.char_end)
        if not spans:
            continue
        start = len(tokens)
        tokens.extend(make_tokens(doc.text, norm, offsets, spans))
        sentences.append(SentenceSpan(start, len(tokens), offsets[sent.char_start],
                                      offsets[sent.char_end - 1] + 1))
    doc.tokens = tokens
    doc.sentences = sentences


def _mentions(doc, resources, config):
    if doc.language is None:
        return
    table = resources.mentions.table(doc.language)
    mentions = []
    for sent in doc.sentences:
        mentions.extend(extract_mentions(doc.tokens[sent.token_start:sent.token_end], table,
                                         config.max_ngram, sent.token_start, doc.text))
    doc.mentions = mentions


class Annotator:
    """Runs the full stage sequence against shared, read-only resources."""

    def __init__(self, resources: ResourceSet, model: ClassifierModel,
                 config: PipelineConfig = PipelineConfig()):
        self.resources = resources
        self.model = model
        self.config = config

    def annotate(self, text: str, language: Optional[str] = None,
                 select: Optional[Iterable] = None) -> Document:
        total_start = time.perf_counter_ns()
        kinds = ALL_KINDS if select is None else frozenset(
            k if isinstance(k, AnnotationKind) else AnnotationKind.parse(k) for k in select)
        run = stages_for(kinds, self.config)
        doc = new_document(text, self.config.max_input_bytes)
        timings = {stage: 0 for stage in STAGES}
        res, cfg = self.resources, self.config

        @contextmanager
        def timed(stage):
            t0 = time.perf_counter_ns()
            yield
            timings[stage] = (time.perf_counter_ns() - t0) // 1000

        with timed("language"):
            _language(doc, res, cfg, language)
        with timed("normalize"):
            _normalize(doc)
        with timed("sentences"):
            _sentences(doc, res)
        with timed("tokens"):
            _tokens(doc)
        if "mentions" in run:
            with timed("mentions"):
                _mentions(doc, res, cfg)
        if "edl" in run:
            with timed("edl"):
                disambiguate(doc, res, self.model, cfg.edl)
        if "topics" in run:
            with timed("topics"):
                doc.topic_annotations = project_topics(doc, res.entity_topics, res.ontology,
                                                       cfg.topics)
        if "hashtags" in run:
            with timed("hashtags"):
                doc.hashtag_annotations = recommend_hashtags(doc.topic_annotations,
                                                             res.topic_hashtags)
        if "sentiment" in run:
            with timed("sentiment"):
                doc.sentiment = score_sentiment(doc.tokens, res.lexicon, cfg.sentiment)
        if "metadata" in run:
            with timed("metadata"):
                decorate_metadata(doc, res.metadata)
        timings["total"] = (time.perf_counter_ns() - total_start) // 1000
        doc.stage_timings = timings
        return doc

    def respond(self, text: str, language: Optional[str] = None,
                select: Optional[Iterable] = None) -> str:
        kinds = ALL_KINDS if select is None else frozenset(
            k if isinstance(k, AnnotationKind) else AnnotationKind.parse(k) for k in select)
        doc = self.annotate(text, language, kinds)
        return serialize_response(doc, kinds)
