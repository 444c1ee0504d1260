"""Greedy longest-match mention extraction against the mention dictionary."""

from __future__ import annotations

from typing import List, Mapping, Optional, Sequence

from .document import MAX_MENTION_TOKENS, CandidateEntity, Mention, Token


def extract_mentions(tokens: Sequence[Token], table: Mapping[str, Sequence],
                     max_n: int = MAX_MENTION_TOKENS, offset: int = 0,
                     text: Optional[str] = None) -> List[Mention]:
    """Scan one sentence left to right, taking the longest dictionary hit.

    At each position the n-grams of length ``max_n`` down to 1 are looked up
    on their space-joined normalized form; a hit is emitted and the scan
    resumes after it, a miss advances one token. ``table`` maps a surface
    to its dictionary entries and ``offset`` is the index of ``tokens[0]``
    in the document. With ``text`` given, mention surfaces are sliced from
    it; otherwise they are rebuilt from token surfaces.
    """
    mentions = []
    keys = [t.normalized for t in tokens]
    i = 0
    n_tok = len(tokens)
    while i < n_tok:
        hit = None
        for n in range(min(max_n, n_tok - i), 0, -1):
            surface = " ".join(keys[i:i + n])
            entries = table.get(surface)
            if entries:
                hit = (n, entries)
                break
        if hit is None:
            i += 1
            continue
        n, entries = hit
        first, last = tokens[i], tokens[i + n - 1]
        candidates = [CandidateEntity(e.entity_id, e.prior) for e in entries]
        mentions.append(Mention(token_start=offset + i, token_end=offset + i + n,
                                surface=(text[first.char_start:last.char_end] if text is not None
                                         else _join_surfaces(tokens[i:i + n])),
                                candidates=candidates))
        i += n
    return mentions


def _join_surfaces(span: Sequence[Token]) -> str:
    parts = [span[0].surface]
    for prev, tok in zip(span, span[1:]):
        parts.append((" " if tok.char_start > prev.char_end else "") + tok.surface)
    return "".join(parts)
