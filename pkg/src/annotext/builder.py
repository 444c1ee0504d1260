"""Offline construction of the mention prior and co-occurrence dictionaries.

Corpus files hold one JSON object per line::

    {"lang": "en", "text": "...", "annotations": [{"s": 0, "e": 2, "surface": "...", "id": "..."}]}

``s``/``e`` are token indices (end exclusive). Counting is split into
partial maps that merge by addition, so shards can be counted in any
order or in parallel and produce identical output.
"""

from __future__ import annotations

import glob
import json
import logging
import os
import time
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from .document import is_placeholder
from .errors import FormatError
from .resources import MAX_NEIGHBORS, MIN_COOCCURRENCE, MentionEntry
from .text import normalize_key

log = logging.getLogger(__name__)

WINDOW = 50


@dataclass
class GoldAnnotation:
    token_start: int
    token_end: int
    surface: str
    entity_id: str


@dataclass
class AnnotatedCorpusDoc:
    language: str
    text: str
    annotations: List[GoldAnnotation] = field(default_factory=list)
    doc_id: Optional[str] = None

    @classmethod
    def from_json(cls, obj: dict) -> "AnnotatedCorpusDoc":
        if not isinstance(obj, dict):
            raise FormatError("record is not a JSON object")
        try:
            lang, text = obj["lang"], obj["text"]
            anns = [GoldAnnotation(int(a["s"]), int(a["e"]), str(a["surface"]), str(a["id"]))
                    for a in obj.get("annotations", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"bad record: {exc!r}") from None
        if not isinstance(lang, str) or not isinstance(text, str):
            raise FormatError("lang and text must be strings")
        last_end = None
        for a in sorted(anns, key=lambda a: a.token_start):
            if a.token_start < 0 or a.token_end <= a.token_start:
                raise FormatError(f"invalid span [{a.token_start}, {a.token_end})")
            if last_end is not None and a.token_start < last_end:
                raise FormatError(f"overlapping span at token {a.token_start}")
            last_end = a.token_end
        doc_id = obj.get("id")
        return cls(lang, text, anns, None if doc_id is None else str(doc_id))

    def to_json(self) -> dict:
        out = {"lang": self.language, "text": self.text,
               "annotations": [{"s": a.token_start, "e": a.token_end, "surface": a.surface,
                                "id": a.entity_id} for a in self.annotations]}
        if self.doc_id is not None:
            out = {"id": self.doc_id, **out}
        return out


@dataclass
class BuildReport:
    documents: int = 0
    mentions: int = 0
    entities: int = 0
    pruned: int = 0
    malformed: int = 0
    wall_time: float = 0.0

    def merge(self, other: "BuildReport") -> "BuildReport":
        return BuildReport(self.documents + other.documents, self.mentions + other.mentions,
                           self.entities + other.entities, self.pruned + other.pruned,
                           self.malformed + other.malformed, self.wall_time + other.wall_time)


def read_corpus(paths: Iterable[str], report: Optional[BuildReport] = None
                ) -> Iterator[AnnotatedCorpusDoc]:
    """Stream documents from JSONL files, skipping malformed lines."""
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    yield AnnotatedCorpusDoc.from_json(json.loads(line))
                except (json.JSONDecodeError, FormatError) as exc:
                    log.warning("%s:%d: skipping malformed record: %s", path, lineno, exc)
                    if report is not None:
                        report.malformed += 1


def expand_corpus_glob(pattern: str) -> List[str]:
    paths = sorted(glob.glob(pattern))
    if not paths and os.path.isfile(pattern):
        paths = [pattern]
    return paths


# ---------------------------------------------------------------- mention priors

def count_mentions(docs: Iterable[AnnotatedCorpusDoc], lang: Optional[str] = None,
                   report: Optional[BuildReport] = None) -> Dict[str, Counter]:
    """Partial ``surface -> Counter(entity -> count)`` map for one shard."""
    counts: Dict[str, Counter] = defaultdict(Counter)
    for doc in docs:
        if lang is not None and doc.language != lang:
            continue
        if report is not None:
            report.documents += 1
        for ann in doc.annotations:
            key = normalize_key(ann.surface)
            if not key:
                continue
            counts[key][ann.entity_id] += 1
            if report is not None:
                report.mentions += 1
    return counts


def merge_mention_counts(parts: Iterable[Dict[str, Counter]]) -> Dict[str, Counter]:
    merged: Dict[str, Counter] = defaultdict(Counter)
    for part in parts:
        for surface, counter in part.items():
            merged[surface].update(counter)
    return merged


def priors_from_counts(counts: Dict[str, Counter]) -> Dict[str, List[MentionEntry]]:
    table = {}
    for surface in sorted(counts):
        counter = counts[surface]
        total = sum(counter.values())
        table[surface] = [MentionEntry(e, c, c / total)
                          for e, c in sorted(counter.items(), key=lambda p: (-p[1], p[0]))]
    return table


def build_mention_dict(docs: Iterable[AnnotatedCorpusDoc], lang: str
                       ) -> Tuple[Dict[str, List[MentionEntry]], BuildReport]:
    """prior(entity | surface) = count(surface -> entity) / count(surface).

    NIL and MISC links are counted like any other target, so the priors of
    each surface sum to one.
    """
    start = time.perf_counter()
    report = BuildReport()
    table = priors_from_counts(count_mentions(docs, lang, report))
    report.entities = len({e.entity_id for entries in table.values() for e in entries})
    report.wall_time = time.perf_counter() - start
    return table, report


# ---------------------------------------------------------------- co-occurrence

def count_cooccurrence(docs: Iterable[AnnotatedCorpusDoc], window: int = WINDOW,
                       report: Optional[BuildReport] = None) -> Counter:
    """Raw unordered pair counts, keyed ``(a, b)`` with ``a < b``.

    Every pair of annotations whose start tokens are less than ``window``
    apart counts once. NIL/MISC links and same-entity pairs are ignored.
    """
    counts: Counter = Counter()
    for doc in docs:
        if report is not None:
            report.documents += 1
        linked = sorted((a.token_start, a.entity_id) for a in doc.annotations
                        if not is_placeholder(a.entity_id))
        if report is not None:
            report.mentions += len(linked)
        lo = 0
        for hi in range(len(linked)):
            pos, entity = linked[hi]
            while pos - linked[lo][0] >= window:
                lo += 1
            for k in range(lo, hi):
                other = linked[k][1]
                if other != entity:
                    counts[(other, entity) if other < entity else (entity, other)] += 1
    return counts


def prune_cooccurrence(raw: Dict[Tuple[str, str], int], min_count: int = MIN_COOCCURRENCE,
                       top_k: int = MAX_NEIGHBORS, report: Optional[BuildReport] = None
                       ) -> Dict[str, List[Tuple[str, int]]]:
    """Keep, per entity, the ``top_k`` neighbors with count >= ``min_count``.

    Ties on count are broken by neighbor id so the result is deterministic.
    """
    per_entity: Dict[str, List[Tuple[str, int]]] = defaultdict(list)
    for (a, b), c in raw.items():
        per_entity[a].append((b, c))
        per_entity[b].append((a, c))
    pruned = {}
    dropped = 0
    for entity in sorted(per_entity):
        ranked = sorted(per_entity[entity], key=lambda p: (-p[1], p[0]))
        kept = [p for p in ranked if p[1] >= min_count][:top_k]
        dropped += len(ranked) - len(kept)
        if kept:
            pruned[entity] = kept
    if report is not None:
        report.pruned += dropped
    return pruned


def build_cooccurrence(docs: Iterable[AnnotatedCorpusDoc], window: int = WINDOW,
                       min_count: int = MIN_COOCCURRENCE, top_k: int = MAX_NEIGHBORS
                       ) -> Tuple[Dict[str, List[Tuple[str, int]]], BuildReport, Counter]:
    """Count over every language, then prune. Also returns the raw counts."""
    start = time.perf_counter()
    report = BuildReport()
    raw = count_cooccurrence(docs, window, report)
    pruned = prune_cooccurrence(raw, min_count, top_k, report)
    report.entities = len({e for pair in raw for e in pair})
    report.wall_time = time.perf_counter() - start
    return pruned, report, raw


# ---------------------------------------------------------------- file IO

def write_mention_dict(table: Dict[str, List[MentionEntry]], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for surface in sorted(table):
            for e in table[surface]:
                fh.write(f"{surface}\t{e.entity_id}\t{e.count}\t{e.prior!r}\n")


def read_mention_dict(path) -> Dict[str, List[MentionEntry]]:
    from .resources import load_mention_table
    return load_mention_table(path)


def write_cooccurrence(pruned: Dict[str, List[Tuple[str, int]]], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for entity in sorted(pruned):
            for neighbor, count in pruned[entity]:
                fh.write(f"{entity}\t{neighbor}\t{count}\n")


def read_cooccurrence(path, min_count: int = MIN_COOCCURRENCE, top_k: int = MAX_NEIGHBORS
                      ) -> Dict[str, List[Tuple[str, int]]]:
    from .resources import load_cooccurrence
    return {e: list(lst) for e, lst in load_cooccurrence(path, min_count, top_k).neighbors.items()}


def write_report(report: BuildReport, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(asdict(report), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _shard_counts(args):
    path, lang, window = args
    report = BuildReport()
    docs = list(read_corpus([path], report))
    mention_report = BuildReport()
    mentions = {}
    langs = sorted({d.language for d in docs}) if lang == "all" else [lang]
    for code in langs:
        mentions[code] = count_mentions(docs, code, mention_report)
    cooc_report = BuildReport(malformed=report.malformed)
    cooc = count_cooccurrence(docs, window, cooc_report)
    return mentions, mention_report, cooc, cooc_report


def build_all(paths: List[str], lang: str, out_dir, window: int = WINDOW,
              min_count: int = MIN_COOCCURRENCE, top_k: int = MAX_NEIGHBORS,
              workers: int = 1) -> BuildReport:
    """Build every dictionary from the corpus files and write them to ``out_dir``.

    Mention dictionaries are written per language (``mentions.<lang>.tsv``);
    co-occurrence always spans every language in the corpus.
    """
    start = time.perf_counter()
    os.makedirs(out_dir, exist_ok=True)
    jobs = [(p, lang, window) for p in paths]
    if workers > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_shard_counts, jobs))
    else:
        results = [_shard_counts(j) for j in jobs]

    mention_parts: Dict[str, List[Dict[str, Counter]]] = defaultdict(list)
    raw: Counter = Counter()
    report = BuildReport()
    cooc_docs = 0
    for mentions, m_report, cooc, c_report in results:
        for code, part in mentions.items():
            mention_parts[code].append(part)
        raw.update(cooc)
        report.mentions += m_report.mentions
        report.malformed += c_report.malformed
        cooc_docs += c_report.documents
    report.documents = cooc_docs

    entities = set()
    for code in sorted(mention_parts):
        table = priors_from_counts(merge_mention_counts(mention_parts[code]))
        entities.update(e.entity_id for entries in table.values() for e in entries)
        write_mention_dict(table, os.path.join(out_dir, f"mentions.{code}.tsv"))
    pruned = prune_cooccurrence(raw, min_count, top_k, report)
    write_cooccurrence(pruned, os.path.join(out_dir, "cooccurrence.tsv"))
    report.entities = len(entities)
    report.wall_time = time.perf_counter() - start
    write_report(report, os.path.join(out_dir, "report.json"))
    return report
