"""Second pass and the end-to-end two-pass disambiguation."""

from __future__ import annotations

from typing import Dict, List, Sequence

from ..config import EdlConfig
from ..document import (CandidateEntity, Document, EntityAnnotation, ResolutionPass,
                        is_placeholder)
from ..errors import NoCandidates
from ..resources import ResourceSet
from .features import context_window, feature_vector
from .firstpass import first_pass
from .model import ClassifierModel, classify_and_score


def _rank_key(c: CandidateEntity):
    return (-c.score, -c.prior, c.entity_id)


def _pick_with_margin(ranked: Sequence[CandidateEntity], margin: float) -> CandidateEntity:
    top = ranked[0]
    if is_placeholder(top.entity_id) and len(ranked) > 1:
        if top.score - ranked[1].score < margin:
            return ranked[1]
    return top


def final_disambiguation(candidates: Sequence[CandidateEntity], nil_margin: float) -> str:
    """Choose among labeled and scored candidates.

    One candidate labeled True wins outright. Otherwise the best scoring
    candidate among the True ones (or among all, when none is True) wins,
    unless it is NIL/MISC and leads the runner-up by less than
    ``nil_margin``, in which case the runner-up wins.
    """
    if not candidates:
        raise NoCandidates("mention has no candidates")
    for c in candidates:
        if c.label is None or c.score is None:
            raise ValueError(f"candidate {c.entity_id} is not labeled and scored")
    accepted = [c for c in candidates if c.label]
    if len(accepted) == 1:
        return accepted[0].entity_id
    pool = accepted if accepted else list(candidates)
    return _pick_with_margin(sorted(pool, key=_rank_key), nil_margin).entity_id


def easy_positions(doc: Document, easy: Sequence[int]) -> List[tuple]:
    return sorted((doc.mentions[i].token_start, doc.mentions[i].resolved) for i in easy
                  if not is_placeholder(doc.mentions[i].resolved))


def second_pass(doc: Document, hard: Sequence[int], easy: Sequence[tuple],
                resources: ResourceSet, model: ClassifierModel, config: EdlConfig) -> None:
    for idx in hard:
        mention = doc.mentions[idx]
        context = context_window(mention, easy, config.context_window)
        for cand in mention.candidates:
            cand.features = feature_vector(cand, mention, context, resources, config)
            cand.label, cand.score = classify_and_score(cand.features, model)
        try:
            mention.resolved = final_disambiguation(mention.candidates, config.nil_margin)
            mention.resolution_pass = ResolutionPass.HARD
        except NoCandidates:
            mention.resolved = None
            mention.resolution_pass = ResolutionPass.UNRESOLVED


def entity_annotations(doc: Document) -> List[EntityAnnotation]:
    """One annotation per distinct linked entity, keeping its best score.

    Easy resolutions score their prior, hard ones their ensemble score.
    """
    best: Dict[str, EntityAnnotation] = {}
    for mention in doc.mentions:
        entity = mention.resolved
        if entity is None or is_placeholder(entity):
            continue
        chosen = next(c for c in mention.candidates if c.entity_id == entity)
        if mention.resolution_pass is ResolutionPass.HARD:
            score = chosen.score
        else:
            score = chosen.prior
        current = best.get(entity)
        if current is None:
            best[entity] = EntityAnnotation(entity_id=entity, surface=mention.surface, score=score)
        elif score > current.score:
            current.score = score
    return list(best.values())


def disambiguate(doc: Document, resources: ResourceSet, model: ClassifierModel,
                 config: EdlConfig) -> Document:
    """Resolve every mention of ``doc`` and emit its entity annotations."""
    if not doc.mentions:
        return doc
    easy, hard = first_pass(doc, config)
    second_pass(doc, hard, easy_positions(doc, easy), resources, model, config)
    doc.entity_annotations = entity_annotations(doc)
    return doc
