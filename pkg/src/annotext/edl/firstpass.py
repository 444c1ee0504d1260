"""First pass: resolve mentions whose candidate priors leave no doubt."""

from __future__ import annotations

from typing import List, Optional, Tuple

from ..config import EdlConfig
from ..document import CandidateEntity, Document, Mention, ResolutionPass, is_placeholder


def top_by_prior(candidates: List[CandidateEntity]) -> CandidateEntity:
    return min(candidates, key=lambda c: (-c.prior, c.entity_id))


def easy_rule(mention: Mention, config: EdlConfig) -> Optional[str]:
    """Name of the first-pass rule that resolves ``mention``, or None.

    ``single``: one candidate. ``with_nil``: two candidates, one of them
    NIL/MISC, top prior above the NIL threshold. ``dominant``: three or
    more candidates, top prior above the easy threshold.
    """
    cands = mention.candidates
    if len(cands) == 1:
        return "single"
    top = top_by_prior(cands) if cands else None
    if len(cands) == 2 and any(is_placeholder(c.entity_id) for c in cands):
        return "with_nil" if top.prior > config.easy_nil_threshold else None
    if len(cands) >= 3 and top.prior > config.easy_threshold:
        return "dominant"
    return None


def first_pass(doc: Document, config: EdlConfig) -> Tuple[List[int], List[int]]:
    """Resolve easy mentions in place; return (easy, hard) mention indices."""
    easy, hard = [], []
    for idx, mention in enumerate(doc.mentions):
        if easy_rule(mention, config) is None:
            hard.append(idx)
            continue
        mention.resolved = top_by_prior(mention.candidates).entity_id
        mention.resolution_pass = ResolutionPass.EASY
        easy.append(idx)
    return easy, hard
