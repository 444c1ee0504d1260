"""The five candidate features, each in [0, 1]."""

from __future__ import annotations

import math
from bisect import bisect_left
from typing import Mapping, Sequence, Tuple

from ..config import EdlConfig
from ..document import CandidateEntity, FeatureVector, Mention, is_placeholder
from ..resources import EntityCooccurDict, ResourceSet, TopicOntology
from ..text import normalize_key


def _word_set(text: str) -> set:
    return {t for t in normalize_key(text).split() if any(c.isalnum() for c in t)}


def jaccard(mention_surface: str, entity_name: str) -> float:
    """Jaccard similarity of the normalized word-token sets; 0 when both are empty.

    Punctuation-only tokens are ignored, so "Apple" vs "Apple Inc." is 1/2.
    """
    a = _word_set(mention_surface)
    b = _word_set(entity_name)
    union = a | b
    if not union:
        return 0.0
    return len(a & b) / len(union)


def context_window(mention: Mention, easy: Sequence[Tuple[int, str]], size: int) -> list:
    """The ``size`` easy entities nearest to ``mention`` by token distance.

    ``easy`` holds ``(token_start, entity_id)`` pairs sorted by position.
    Ties go to the earlier entity. Result is ordered nearest first.
    """
    pos = mention.token_start
    right = bisect_left(easy, (pos, ""))
    left = right - 1
    picked = []
    while len(picked) < size and (left >= 0 or right < len(easy)):
        if right >= len(easy) or (left >= 0 and pos - easy[left][0] <= easy[right][0] - pos):
            picked.append(easy[left][1])
            left -= 1
        else:
            picked.append(easy[right][1])
            right += 1
    return picked


def feature_entity_cooccurr(candidate: str, context: Sequence[str],
                            cooccurrence: EntityCooccurDict, cap: int) -> float:
    """Mean of capped, cap-normalized co-occurrence counts over the context."""
    if not context:
        return 0.0
    total = sum(min(cooccurrence.count(candidate, other), cap) for other in context)
    return total / (cap * len(context))


def feature_topic_sim(candidate: str, context: Sequence[str],
                      entity_topics: Mapping[str, Sequence[Tuple[str, float]]],
                      ontology: TopicOntology) -> float:
    """Inverse of the smallest topic distance between candidate and context."""
    own = [t for t, _ in entity_topics.get(candidate, ())]
    if not own or not context:
        return 0.0
    theirs = {t for other in context for t, _ in entity_topics.get(other, ())}
    best = math.inf
    for t1 in own:
        for t2 in theirs:
            d = ontology.distance(t1, t2)
            if d < best:
                best = d
                if best == 0:
                    return 1.0
    if best == math.inf:
        return 0.0
    return 1.0 / best


def feature_vector(candidate: CandidateEntity, mention: Mention, context: Sequence[str],
                   resources: ResourceSet, config: EdlConfig) -> FeatureVector:
    if is_placeholder(candidate.entity_id):
        return FeatureVector(mention_entity_cooccurr=candidate.prior)
    entity = candidate.entity_id
    return FeatureVector(
        mention_entity_cooccurr=candidate.prior,
        mention_entity_jaccard=jaccard(mention.surface, resources.display_name(entity)),
        entity_importance=resources.importance.get(entity, 0.0),
        entity_entity_cooccurr=feature_entity_cooccurr(
            entity, context, resources.cooccurrence, config.cooccur_norm_cap),
        entity_topic_sim=feature_topic_sim(entity, context, resources.entity_topics,
                                           resources.ontology),
    )
