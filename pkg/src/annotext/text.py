"""Text normalization, sentence breaking and tokenization.

All offsets are codepoint indices. Normalization keeps a map from every
normalized character back to the original character it came from, so
tokens found in normalized text are reported against the original text.
"""

from __future__ import annotations

import re
import unicodedata
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Tuple

from .document import SentenceSpan, Token

_APOSTROPHES = {"‘": "'", "’": "'", "ʼ": "'"}

DEFAULT_ABBREVIATIONS = frozenset({
    "vs", "dr", "mr", "mrs", "ms", "prof", "inc", "ltd", "co", "corp", "jr", "sr",
    "st", "mt", "no", "etc", "e.g", "i.e", "approx", "dept", "est", "fig", "gen",
    "gov", "sen", "rep", "u.s", "jan", "feb", "mar", "apr", "jun", "jul", "aug",
    "sep", "sept", "oct", "nov", "dec",
})


@lru_cache(maxsize=4096)
def _fold(ch: str) -> str:
    """Normalized replacement for a single source character ('' drops it)."""
    if ch in _APOSTROPHES:
        return _APOSTROPHES[ch]
    if ch.isspace():
        return " "
    cat = unicodedata.category(ch)
    if cat in ("Zs", "Zl", "Zp", "Cc"):
        return " "
    if ord(ch) > 127 and (cat.startswith("P") or ch == "\u2212"):
        return " "
    kept = [p for p in unicodedata.normalize("NFD", ch) if unicodedata.category(p) != "Mn"]
    return unicodedata.normalize("NFC", "".join(kept))


def normalize_text(text: str, lang: Optional[str] = None) -> Tuple[str, List[int]]:
    """Fold accents, blank out non-ASCII punctuation and collapse whitespace.

    Returns the normalized string and, for each of its characters, the
    index of the original character it was derived from. Case is kept;
    lowercasing happens per token.
    """
    chars: List[str] = []
    offsets: List[int] = []
    for i, ch in enumerate(text):
        for part in _fold(ch):
            if part == " ":
                if not chars or chars[-1] == " ":
                    continue
            chars.append(part)
            offsets.append(i)
    if chars and chars[-1] == " ":
        chars.pop()
        offsets.pop()
    return "".join(chars), offsets


def normalize_key(text: str) -> str:
    """Canonical dictionary key: normalized, tokenized, lowercased, space-joined."""
    norm, _ = normalize_text(text)
    return " ".join(m.group(0).lower() for m in TOKEN_RE.finditer(norm))


_EMOTICON = r"(?:[:;=8xX][\-o\^']?[\)\(\]\[dDpP/\\\|\*oO3@]+|<3+|\^_*\^|[\)\(][\-']?[:;=])"
_NUMBER = r"\d+(?:[.,:]\d+)+"
_WORD = r"\w+(?:['\-]\w+)*"
TOKEN_RE = re.compile(f"{_EMOTICON}(?![\\w])|{_NUMBER}|{_WORD}|[^\\w\\s]")

_TERMINATORS = ".!?"
_CLOSERS = "\"')]}"


def break_sentences(normalized: str, lang: Optional[str] = None,
                    abbreviations: FrozenSet[str] = DEFAULT_ABBREVIATIONS
                    ) -> List[Tuple[int, int]]:
    """Split normalized text into sentence character spans.

    A sentence ends at ``.``, ``!`` or ``?`` (plus any closing quotes or
    brackets) followed by whitespace and an uppercase letter, or by the end
    of the text. A period after a listed abbreviation or a single letter
    does not end a sentence, and neither does a period between digits.
    """
    spans = []
    n = len(normalized)
    start = 0
    i = 0
    while i < n:
        ch = normalized[i]
        if ch not in _TERMINATORS:
            i += 1
            continue
        j = i + 1
        while j < n and (normalized[j] in _TERMINATORS or normalized[j] in _CLOSERS):
            j += 1
        if j < n:
            if not normalized[j].isspace():
                i = j
                continue
            k = j
            while k < n and normalized[k].isspace():
                k += 1
            nxt = normalized[k] if k < n else ""
            if k < n and not (nxt.isupper() or nxt.isdigit() or nxt in "\"'(["
                              or (nxt.isalpha() and not nxt.islower())):
                i = j
                continue
        if ch == "." and _is_abbreviation(normalized, i, abbreviations):
            i = j
            continue
        spans.append((start, j))
        while j < n and normalized[j].isspace():
            j += 1
        start = j
        i = j
    if start < n:
        spans.append((start, n))
    return [(a, b) for a, b in spans if normalized[a:b].strip()]


def _is_abbreviation(text: str, dot: int, abbreviations: FrozenSet[str]) -> bool:
    k = dot
    while k > 0 and not text[k - 1].isspace():
        k -= 1
    word = text[k:dot].strip("\"'([").lower()
    if not word:
        return False
    if word in abbreviations:
        return True
    return len(word) == 1 and word.isalpha()


def tokenize(normalized: str, start: int = 0, end: Optional[int] = None) -> List[Tuple[int, int]]:
    """Token spans (in normalized coordinates) within ``normalized[start:end]``."""
    end = len(normalized) if end is None else end
    return [(m.start(), m.end()) for m in TOKEN_RE.finditer(normalized, start, end)]


def make_tokens(original: str, normalized: str, offsets: List[int],
                spans: List[Tuple[int, int]]) -> List[Token]:
    tokens = []
    for a, b in spans:
        o_start = offsets[a]
        o_end = offsets[b - 1] + 1
        tokens.append(Token(surface=original[o_start:o_end], char_start=o_start,
                            char_end=o_end, normalized=normalized[a:b].lower()))
    return tokens


def load_abbreviations(path) -> FrozenSet[str]:
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                words.add(line.rstrip(".").lower())
    return frozenset(words)


def abbreviations_for(lang: Optional[str], table: Dict[str, FrozenSet[str]]) -> FrozenSet[str]:
    if lang and lang in table:
        return table[lang]
    return DEFAULT_ABBREVIATIONS
