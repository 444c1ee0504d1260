"""Read-only dictionaries, the topic ontology, and their loaders.

Every dictionary is a line-oriented UTF-8 TSV file; blank lines and lines
starting with ``#`` are ignored. A manifest (JSON object or two-column
TSV) names the file behind each dictionary. Loading validates everything
and either returns a complete :class:`ResourceSet` or raises.
"""

from __future__ import annotations

import json
import math
import os
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple

from .document import EntityType, LocationMeta
from .errors import FormatError, InvariantViolation, MissingFile, UnknownLanguage, UnknownTopic
from .langid import LanguageProfile
from .text import load_abbreviations, normalize_key

INF = math.inf

MIN_COOCCURRENCE = 10
MAX_NEIGHBORS = 30
MAX_ENTITY_TOPICS = 10
PRIOR_SUM_SLACK = 1e-9


@dataclass(frozen=True)
class MentionEntry:
    entity_id: str
    count: int
    prior: float


class MentionEntityDict:
    """Per-language map from normalized surface to candidate entities."""

    def __init__(self, by_language: Mapping[str, Mapping[str, Sequence[MentionEntry]]]):
        self._by_language = {lang: {s: tuple(v) for s, v in table.items()}
                             for lang, table in by_language.items()}

    @property
    def languages(self) -> FrozenSet[str]:
        return frozenset(self._by_language)

    def table(self, lang: str) -> Mapping[str, Tuple[MentionEntry, ...]]:
        try:
            return MappingProxyType(self._by_language[lang])
        except KeyError:
            raise UnknownLanguage(f"no mention dictionary for language {lang!r}") from None

    def entries(self, lang: str, surface: str) -> Tuple[MentionEntry, ...]:
        return self.table(lang).get(surface, ())

    def __len__(self):
        return sum(len(t) for t in self._by_language.values())


class EntityCooccurDict:
    """Pruned entity-entity co-occurrence counts.

    Lists are stored per head entity; lookups check both directions since
    pruning is applied per head and may keep a pair on one side only.
    """

    def __init__(self, neighbors: Mapping[str, Sequence[Tuple[str, int]]]):
        self.neighbors: Dict[str, Tuple[Tuple[str, int], ...]] = {
            e: tuple(sorted(lst, key=lambda p: (-p[1], p[0]))) for e, lst in neighbors.items()}
        self._index = {e: dict(lst) for e, lst in self.neighbors.items()}
        self.max_count = {e: (lst[0][1] if lst else 0) for e, lst in self.neighbors.items()}

    def count(self, e1: str, e2: str) -> int:
        if e1 == e2:
            return 0
        forward = self._index.get(e1, {}).get(e2, 0)
        backward = self._index.get(e2, {}).get(e1, 0)
        return max(forward, backward)

    def __len__(self):
        return len(self.neighbors)


class TopicOntology:
    """Topic nodes with child->parent edges; distances ignore edge direction."""

    def __init__(self, nodes: Mapping[str, Tuple[str, str]],
                 parents: Mapping[str, Sequence[str]]):
        self.nodes = dict(nodes)
        self.parents = {c: tuple(ps) for c, ps in parents.items()}
        adjacency: Dict[str, set] = {t: set() for t in self.nodes}
        for child, ps in self.parents.items():
            for p in ps:
                adjacency[child].add(p)
                adjacency[p].add(child)
        self.adjacency = {t: tuple(sorted(n)) for t, n in adjacency.items()}
        self._distances = lru_cache(maxsize=65536)(self._bfs_distance)

    def readable(self, topic_id: str) -> str:
        return self.nodes[topic_id][0]

    def distance(self, t1: str, t2: str) -> float:
        for t in (t1, t2):
            if t not in self.nodes:
                raise UnknownTopic(f"unknown topic {t!r}")
        if t1 == t2:
            return 0
        a, b = (t1, t2) if t1 < t2 else (t2, t1)
        return self._distances(a, b)

    def _bfs_distance(self, source: str, target: str) -> float:
        seen = {source}
        frontier = deque([(source, 0)])
        while frontier:
            node, d = frontier.popleft()
            for nxt in self.adjacency[node]:
                if nxt == target:
                    return d + 1
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append((nxt, d + 1))
        return INF


@dataclass(frozen=True)
class LexiconEntry:
    polarity: int
    weight: float


@dataclass
class SentimentLexicon:
    words: Dict[str, LexiconEntry] = field(default_factory=dict)
    emoticons: Dict[str, LexiconEntry] = field(default_factory=dict)
    negations: FrozenSet[str] = frozenset()


@dataclass(frozen=True)
class EntityMeta:
    entity_type: EntityType
    display: str
    kb_url: str
    location: Optional[LocationMeta] = None


@dataclass
class ResourceSet:
    mentions: MentionEntityDict
    cooccurrence: EntityCooccurDict
    importance: Dict[str, float]
    ontology: TopicOntology
    entity_topics: Dict[str, Tuple[Tuple[str, float], ...]]
    topic_hashtags: Dict[str, Tuple[Tuple[str, float], ...]]
    lexicon: SentimentLexicon
    metadata: Dict[str, EntityMeta]
    language_profiles: List[LanguageProfile] = field(default_factory=list)
    abbreviations: Dict[str, FrozenSet[str]] = field(default_factory=dict)

    @property
    def languages(self) -> FrozenSet[str]:
        return self.mentions.languages

    def display_name(self, entity_id: str) -> str:
        meta = self.metadata.get(entity_id)
        if meta is not None and meta.display:
            return meta.display
        return entity_id.replace("_", " ")

    def summary(self) -> Dict[str, int]:
        return {
            "mention_surfaces": len(self.mentions),
            "cooccurrence_heads": len(self.cooccurrence),
            "importance": len(self.importance),
            "topics": len(self.ontology.nodes),
            "topic_edges": sum(len(p) for p in self.ontology.parents.values()),
            "entity_topics": len(self.entity_topics),
            "topic_hashtags": len(self.topic_hashtags),
            "lexicon_words": len(self.lexicon.words),
            "emoticons": len(self.lexicon.emoticons),
            "negations": len(self.lexicon.negations),
            "metadata": len(self.metadata),
            "language_profiles": len(self.language_profiles),
        }


# ---------------------------------------------------------------- lookups

def candidates_for(lang: str, surface: str, mentions: MentionEntityDict) -> List[Tuple[str, float]]:
    return [(e.entity_id, e.prior) for e in mentions.entries(lang, surface)]


def cooccurrence_count(e1: str, e2: str, cooccurrence: EntityCooccurDict) -> int:
    return cooccurrence.count(e1, e2)


def topic_distance(t1: str, t2: str, ontology: TopicOntology) -> float:
    """Shortest undirected path length in hops; ``math.inf`` when disconnected."""
    return ontology.distance(t1, t2)


def entity_importance(entity_id: str, importance: Mapping[str, float]) -> float:
    return importance.get(entity_id, 0.0)


def topics_of(entity_id: str, resources: ResourceSet) -> List[Tuple[str, float]]:
    return list(resources.entity_topics.get(entity_id, ()))


def hashtags_of(topic_id: str, resources: ResourceSet) -> List[Tuple[str, float]]:
    return list(resources.topic_hashtags.get(topic_id, ()))


def parents_of(topic_id: str, resources: ResourceSet) -> List[str]:
    return list(resources.ontology.parents.get(topic_id, ()))


# ---------------------------------------------------------------- loading

def read_tsv(path, min_cols: int, max_cols: Optional[int] = None) -> Iterator[Tuple[int, List[str]]]:
    """Yield ``(line_number, fields)`` for each record line of a TSV file."""
    max_cols = min_cols if max_cols is None else max_cols
    if not os.path.isfile(path):
        raise MissingFile(f"no such file: {path}")
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if not min_cols <= len(fields) <= max_cols:
                raise FormatError(f"expected {min_cols}-{max_cols} fields, got {len(fields)}"
                                  if min_cols != max_cols else
                                  f"expected {min_cols} fields, got {len(fields)}", path, lineno)
            yield lineno, fields


def _num(value: str, kind, path, lineno):
    try:
        result = kind(value)
    except ValueError:
        raise FormatError(f"not a valid {kind.__name__}: {value!r}", path, lineno) from None
    if isinstance(result, float) and math.isnan(result):
        raise FormatError("NaN is not allowed", path, lineno)
    return result


def load_mention_table(path) -> Dict[str, List[MentionEntry]]:
    table: Dict[str, List[MentionEntry]] = {}
    last_line: Dict[str, int] = {}
    for lineno, (surface, entity_id, count, prior) in read_tsv(path, 4):
        count = _num(count, int, path, lineno)
        prior = _num(prior, float, path, lineno)
        if count < 0:
            raise InvariantViolation(f"negative count {count}", path, lineno)
        if not 0.0 <= prior <= 1.0:
            raise InvariantViolation(f"prior {prior} outside [0, 1]", path, lineno)
        key = normalize_key(surface)
        if not key:
            raise FormatError(f"surface {surface!r} has no tokens", path, lineno)
        table.setdefault(key, []).append(MentionEntry(entity_id, count, prior))
        last_line[key] = lineno
    for surface, entries in table.items():
        total = sum(e.prior for e in entries)
        if total > 1.0 + PRIOR_SUM_SLACK:
            raise InvariantViolation(f"priors for {surface!r} sum to {total}", path, last_line[surface])
    return table


def load_cooccurrence(path, min_count: int = MIN_COOCCURRENCE,
                      max_neighbors: int = MAX_NEIGHBORS) -> EntityCooccurDict:
    lists: Dict[str, List[Tuple[str, int]]] = {}
    for lineno, (head, neighbor, count) in read_tsv(path, 3):
        count = _num(count, int, path, lineno)
        if count < min_count:
            raise InvariantViolation(f"count {count} below minimum {min_count}", path, lineno)
        if head == neighbor:
            raise InvariantViolation("self co-occurrence", path, lineno)
        lst = lists.setdefault(head, [])
        lst.append((neighbor, count))
        if len(lst) > max_neighbors:
            raise InvariantViolation(f"{head!r} has more than {max_neighbors} neighbors", path, lineno)
    return EntityCooccurDict(lists)


def load_importance(path) -> Dict[str, float]:
    scores = {}
    for lineno, (entity_id, score) in read_tsv(path, 2):
        score = _num(score, float, path, lineno)
        if not 0.0 <= score <= 1.0:
            raise InvariantViolation(f"importance {score} outside [0, 1]", path, lineno)
        scores[entity_id] = score
    return scores


def load_ontology(nodes_path, edges_path) -> TopicOntology:
    nodes = {}
    for lineno, (topic_id, readable, display) in read_tsv(nodes_path, 3):
        if topic_id in nodes:
            raise FormatError(f"duplicate topic {topic_id!r}", nodes_path, lineno)
        nodes[topic_id] = (readable, display)
    parents: Dict[str, List[str]] = {}
    for lineno, (child, parent) in read_tsv(edges_path, 2):
        if child == parent:
            raise InvariantViolation(f"self-loop on {child!r}", edges_path, lineno)
        for t in (child, parent):
            if t not in nodes:
                raise InvariantViolation(f"unknown topic {t!r}", edges_path, lineno)
        if parent not in parents.setdefault(child, []):
            parents[child].append(parent)
    return TopicOntology(nodes, parents)


def load_entity_topics(path, ontology: TopicOntology) -> Dict[str, Tuple[Tuple[str, float], ...]]:
    lists: Dict[str, List[Tuple[str, float]]] = {}
    for lineno, (entity_id, topic_id, affinity) in read_tsv(path, 3):
        affinity = _num(affinity, float, path, lineno)
        if not 0.0 <= affinity <= 1.0:
            raise InvariantViolation(f"affinity {affinity} outside [0, 1]", path, lineno)
        if topic_id not in ontology.nodes:
            raise InvariantViolation(f"unknown topic {topic_id!r}", path, lineno)
        lst = lists.setdefault(entity_id, [])
        lst.append((topic_id, affinity))
        if len(lst) > MAX_ENTITY_TOPICS:
            raise InvariantViolation(f"{entity_id!r} has more than {MAX_ENTITY_TOPICS} topics",
                                     path, lineno)
    return {e: tuple(sorted(lst, key=lambda p: (-p[1], p[0]))) for e, lst in lists.items()}


def load_topic_hashtags(path) -> Dict[str, Tuple[Tuple[str, float], ...]]:
    lists: Dict[str, List[Tuple[str, float]]] = {}
    for lineno, (topic_id, tag, weight) in read_tsv(path, 3):
        weight = _num(weight, float, path, lineno)
        if weight < 0:
            raise InvariantViolation(f"negative hashtag weight {weight}", path, lineno)
        lists.setdefault(topic_id, []).append((tag.lstrip("#"), weight))
    return {t: tuple(sorted(lst, key=lambda p: (-p[1], p[0]))) for t, lst in lists.items()}


def load_lexicon(path) -> Dict[str, LexiconEntry]:
    entries = {}
    for lineno, (word, polarity, weight) in read_tsv(path, 3):
        polarity = _num(polarity, int, path, lineno)
        weight = _num(weight, float, path, lineno)
        if polarity not in (1, -1):
            raise InvariantViolation(f"polarity must be +1 or -1, got {polarity}", path, lineno)
        if not weight > 0:
            raise InvariantViolation(f"weight must be positive, got {weight}", path, lineno)
        entries[word] = LexiconEntry(polarity, weight)
    return entries


def load_negations(path) -> FrozenSet[str]:
    return frozenset(fields[0].strip().lower() for _, fields in read_tsv(path, 1))


def load_metadata(path) -> Dict[str, EntityMeta]:
    meta = {}
    for lineno, fields in read_tsv(path, 4, 8):
        if len(fields) not in (4, 8):
            raise FormatError(f"expected 4 or 8 fields, got {len(fields)}", path, lineno)
        entity_id, type_name, display, url = fields[:4]
        try:
            entity_type = EntityType(type_name.strip().upper() or "OTHER")
        except ValueError:
            raise FormatError(f"unknown entity type {type_name!r}", path, lineno) from None
        location = None
        if len(fields) == 8:
            population = _num(fields[4], int, path, lineno)
            lat = _num(fields[6], float, path, lineno)
            lon = _num(fields[7], float, path, lineno)
            if not (-90 <= lat <= 90 and -180 <= lon <= 180):
                raise InvariantViolation(f"coordinates ({lat}, {lon}) out of range", path, lineno)
            location = LocationMeta(population, fields[5], lat, lon)
        meta[entity_id] = EntityMeta(entity_type, display, url, location)
    return meta


REQUIRED_KEYS = ("mention_dicts", "cooccurrence", "importance", "topics", "topic_parents",
                 "entity_topics", "topic_hashtags", "lexicon", "negations", "metadata")
PER_LANGUAGE_KEYS = ("mention_dicts", "language_profiles", "abbreviations")


def read_manifest(path) -> Dict[str, object]:
    """Parse a manifest into ``key -> path`` (or ``key -> {lang: path}``).

    Relative paths resolve against the manifest's directory. A TSV manifest
    names per-language entries as ``mention_dicts.en``.
    """
    if not os.path.isfile(path):
        raise MissingFile(f"no such manifest: {path}")
    base = os.path.dirname(os.path.abspath(path))
    with open(path, encoding="utf-8") as fh:
        head = fh.read(1).lstrip()
    if head == "{" or str(path).endswith(".json"):
        with open(path, encoding="utf-8") as fh:
            try:
                raw = json.load(fh)
            except json.JSONDecodeError as exc:
                raise FormatError(str(exc), path, exc.lineno) from None
    else:
        raw = {}
        for lineno, (key, value) in read_tsv(path, 2):
            if "." in key:
                group, lang = key.split(".", 1)
                raw.setdefault(group, {})[lang] = value
            else:
                raw[key] = value

    def resolve(p):
        return p if os.path.isabs(p) else os.path.join(base, p)

    manifest: Dict[str, object] = {}
    for key, value in raw.items():
        if isinstance(value, dict):
            manifest[key] = {lang: resolve(p) for lang, p in value.items()}
        elif isinstance(value, str):
            manifest[key] = resolve(value)
        else:
            raise FormatError(f"manifest entry {key!r} must be a path or a language map", path)
    return manifest


def load_resources(manifest_path, min_cooccurrence: int = MIN_COOCCURRENCE,
                   max_neighbors: int = MAX_NEIGHBORS) -> ResourceSet:
    manifest = read_manifest(manifest_path)
    for key in REQUIRED_KEYS:
        if key not in manifest:
            raise MissingFile(f"manifest {manifest_path} does not name {key!r}")
    for key in PER_LANGUAGE_KEYS:
        if key in manifest and not isinstance(manifest[key], dict):
            raise FormatError(f"{key!r} must map language codes to paths", manifest_path)
    # check presence up front so a missing file fails before any parsing work
    for key, value in manifest.items():
        for p in (value.values() if isinstance(value, dict) else [value]):
            if not os.path.isfile(p):
                raise MissingFile(f"{key}: no such file: {p}")

    mentions = MentionEntityDict({lang: load_mention_table(p)
                                  for lang, p in manifest["mention_dicts"].items()})
    ontology = load_ontology(manifest["topics"], manifest["topic_parents"])
    lexicon = SentimentLexicon(
        words={w.lower(): e for w, e in load_lexicon(manifest["lexicon"]).items()},
        emoticons=load_lexicon(manifest["emoticons"]) if "emoticons" in manifest else {},
        negations=load_negations(manifest["negations"]),
    )
    profiles = [LanguageProfile.read(p) for _, p in sorted(manifest.get("language_profiles", {}).items())]
    abbreviations = {lang: load_abbreviations(p)
                     for lang, p in manifest.get("abbreviations", {}).items()}
    return ResourceSet(
        mentions=mentions,
        cooccurrence=load_cooccurrence(manifest["cooccurrence"], min_cooccurrence, max_neighbors),
        importance=load_importance(manifest["importance"]),
        ontology=ontology,
        entity_topics=load_entity_topics(manifest["entity_topics"], ontology),
        topic_hashtags=load_topic_hashtags(manifest["topic_hashtags"]),
        lexicon=lexicon,
        metadata=load_metadata(manifest["metadata"]),
        language_profiles=profiles,
        abbreviations=abbreviations,
    )
