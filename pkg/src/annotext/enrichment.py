"""Topic projection, hashtag recommendation, sentiment and metadata decoration."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Sequence, Tuple

from .config import SentimentConfig, TopicConfig
from .document import (Document, EntityAnnotation, EntityType, HashtagAnnotation,
                       SentimentLabel, SentimentResult, Token, TopicAnnotation)
from .resources import MAX_ENTITY_TOPICS, EntityMeta, SentimentLexicon, TopicOntology


@dataclass
class TopicScore:
    topic_id: str
    score: float = 0.0
    entities: List[str] = field(default_factory=list)


def aggregate_topics(entities: Sequence[EntityAnnotation],
                     entity_topics: Mapping[str, Sequence[Tuple[str, float]]],
                     ontology: TopicOntology, config: TopicConfig = TopicConfig()
                     ) -> Dict[str, TopicScore]:
    """Raw (unnormalized) topic scores with their contributing entities.

    Each entity adds ``score * affinity`` to each of its topics, and each
    such topic passes ``parent_decay`` times its direct contribution on to
    its parents.
    """
    scores: Dict[str, TopicScore] = {}

    def add(topic, amount, entity):
        ts = scores.setdefault(topic, TopicScore(topic))
        ts.score += amount
        if entity not in ts.entities:
            ts.entities.append(entity)

    for ann in entities:
        for topic, affinity in entity_topics.get(ann.entity_id, ())[:MAX_ENTITY_TOPICS]:
            amount = ann.score * affinity
            add(topic, amount, ann.entity_id)
            if config.parent_decay > 0:
                for parent in ontology.parents.get(topic, ()):
                    add(parent, amount * config.parent_decay, ann.entity_id)
    return scores


def project_topics(doc: Document, entity_topics, ontology: TopicOntology,
                   config: TopicConfig = TopicConfig()) -> List[TopicAnnotation]:
    scores = aggregate_topics(doc.entity_annotations, entity_topics, ontology, config)
    if not scores:
        return []
    top = max(ts.score for ts in scores.values())
    scale = 1.0 / top if config.normalize and top > 0 else 1.0
    ranked = sorted(scores.values(), key=lambda ts: (-ts.score, ts.topic_id))
    if config.max_topics is not None:
        ranked = ranked[:config.max_topics]
    return [TopicAnnotation(ts.topic_id, ontology.readable(ts.topic_id), ts.score * scale)
            for ts in ranked]


def recommend_hashtags(topics: Sequence[TopicAnnotation],
                       topic_hashtags: Mapping[str, Sequence[Tuple[str, float]]]
                       ) -> List[HashtagAnnotation]:
    totals: Dict[str, float] = defaultdict(float)
    for topic in topics:
        for tag, weight in topic_hashtags.get(topic.topic_id, ()):
            totals[tag] += topic.score * weight
    ranked = sorted(totals.items(), key=lambda p: (-p[1], p[0]))
    return [HashtagAnnotation(tag, score) for tag, score in ranked]


def score_sentiment(tokens: Sequence[Token], lexicon: SentimentLexicon,
                    config: SentimentConfig = SentimentConfig()) -> SentimentResult:
    """(positive weight - negative weight) / (ln(token count) + smoothing).

    A lexicon hit preceded within ``lookback`` tokens by a negation word
    has its polarity flipped. Emoticons match on the raw token surface.
    Plain strings are accepted in place of tokens.
    """
    n = len(tokens)
    if n == 0:
        return SentimentResult(0.0, SentimentLabel.NEUTRAL)
    surfaces = [t.surface if isinstance(t, Token) else str(t) for t in tokens]
    keys = [t.normalized if isinstance(t, Token) else str(t).lower() for t in tokens]
    positive = negative = 0.0
    for i in range(n):
        entry = lexicon.emoticons.get(surfaces[i]) or lexicon.words.get(keys[i])
        if entry is None:
            continue
        polarity = entry.polarity
        window = keys[max(0, i - config.lookback):i] if config.lookback else ()
        if any(w in lexicon.negations for w in window):
            polarity = -polarity
        if polarity > 0:
            positive += entry.weight
        else:
            negative += entry.weight
    score = (positive - negative) / (math.log(n) + config.smoothing)
    if score > config.positive_threshold:
        label = SentimentLabel.POSITIVE
    elif score < config.negative_threshold:
        label = SentimentLabel.NEGATIVE
    else:
        label = SentimentLabel.NEUTRAL
    return SentimentResult(score, label)


def decorate_metadata(doc: Document, metadata: Mapping[str, EntityMeta]) -> Document:
    for ann in doc.entity_annotations:
        meta = metadata.get(ann.entity_id)
        if meta is None:
            ann.entity_type = EntityType.OTHER
            ann.kb_url = None
            ann.location_meta = None
            continue
        ann.entity_type = meta.entity_type
        ann.kb_url = meta.kb_url or None
        ann.location_meta = meta.location
    return doc
