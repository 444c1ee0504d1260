"""Character n-gram naive Bayes language identification."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .errors import EmptyCorpus, EmptyText, FormatError, NoProfiles

NGRAM_ORDERS = (1, 2, 3)
SMOOTHING = 0.5
UNSEEN = "<unk>"
# only the head of long documents is scored; language rarely changes mid-text
MAX_DETECT_CHARS = 4096


def _prepare(text: str) -> str:
    return " " + " ".join(text.lower().split()) + " "


def char_ngrams(text: str, orders: Sequence[int] = NGRAM_ORDERS) -> Iterable[Tuple[int, str]]:
    padded = _prepare(text)
    for n in orders:
        for i in range(len(padded) - n + 1):
            gram = padded[i:i + n]
            if n > 1 and gram.strip() == "":
                continue
            yield n, gram


@dataclass
class LanguageProfile:
    language: str
    log_prior: float
    # per order n: n-gram -> log probability, including the UNSEEN slot
    log_probs: Dict[int, Dict[str, float]] = field(default_factory=dict)

    def log_likelihood(self, text: str) -> float:
        return self.log_likelihood_counts(Counter(char_ngrams(text)))

    def log_likelihood_counts(self, counts: Mapping[Tuple[int, str], int]) -> float:
        """Likelihood from precomputed ``(order, gram) -> count`` totals."""
        total = 0.0
        for (n, gram), c in counts.items():
            table = self.log_probs.get(n)
            if table is None:
                continue
            lp = table.get(gram)
            total += c * (table[UNSEEN] if lp is None else lp)
        return total

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"#lang\t{self.language}\t{self.log_prior!r}\n")
            for n in sorted(self.log_probs):
                for gram, lp in sorted(self.log_probs[n].items()):
                    fh.write(f"{n}\t{_escape(gram)}\t{lp!r}\n")

    @classmethod
    def read(cls, path) -> "LanguageProfile":
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().rstrip("\n").split("\t")
            if len(header) != 3 or header[0] != "#lang":
                raise FormatError("expected '#lang<TAB>code<TAB>log_prior' header", path, 1)
            profile = cls(language=header[1], log_prior=float(header[2]))
            for lineno, line in enumerate(fh, start=2):
                line = line.rstrip("\n")
                if not line:
                    continue
                parts = line.split("\t")
                if len(parts) != 3:
                    raise FormatError("expected 'n<TAB>ngram<TAB>log_prob'", path, lineno)
                try:
                    n, lp = int(parts[0]), float(parts[2])
                except ValueError as exc:
                    raise FormatError(str(exc), path, lineno) from None
                profile.log_probs.setdefault(n, {})[_unescape(parts[1])] = lp
        for n, table in profile.log_probs.items():
            if UNSEEN not in table:
                raise FormatError(f"order {n} lacks the {UNSEEN} entry", path)
        return profile


def _escape(gram: str) -> str:
    return gram.replace("\\", "\\\\").replace("\t", "\\t")


def _unescape(gram: str) -> str:
    return gram.replace("\\t", "\t").replace("\\\\", "\\")


def train_language_profiles(samples: Mapping[str, Iterable[str]],
                            alpha: float = SMOOTHING) -> List[LanguageProfile]:
    """Fit one profile per language from its sample documents.

    Counts are add-``alpha`` smoothed with one extra slot per order for
    unseen n-grams, so each order's probabilities sum to one.
    """
    if not samples:
        raise NoProfiles("no languages given")
    log_prior = -math.log(len(samples))
    profiles = []
    for lang in sorted(samples):
        counts: Dict[int, Counter] = {n: Counter() for n in NGRAM_ORDERS}
        seen_text = False
        for doc in samples[lang]:
            if not doc.strip():
                continue
            seen_text = True
            for n, gram in char_ngrams(doc):
                counts[n][gram] += 1
        if not seen_text:
            raise EmptyCorpus(lang)
        log_probs = {}
        for n, counter in counts.items():
            denom = sum(counter.values()) + alpha * (len(counter) + 1)
            table = {gram: math.log((c + alpha) / denom) for gram, c in counter.items()}
            table[UNSEEN] = math.log(alpha / denom)
            log_probs[n] = table
        profiles.append(LanguageProfile(lang, log_prior, log_probs))
    return profiles


def language_posteriors(text: str, profiles: Sequence[LanguageProfile]) -> Dict[str, float]:
    if not profiles:
        raise NoProfiles("no language profiles loaded")
    if not text.strip():
        raise EmptyText("cannot detect the language of empty text")
    counts = Counter(char_ngrams(text[:MAX_DETECT_CHARS]))
    scores = {p.language: p.log_prior + p.log_likelihood_counts(counts) for p in profiles}
    top = max(scores.values())
    z = top + math.log(sum(math.exp(s - top) for s in scores.values()))
    return {lang: math.exp(s - z) for lang, s in scores.items()}


def detect_language(text: str, profiles: Sequence[LanguageProfile]) -> Tuple[str, float]:
    """Most probable language and its posterior probability."""
    post = language_posteriors(text, profiles)
    lang = max(sorted(post), key=post.__getitem__)
    return lang, post[lang]
