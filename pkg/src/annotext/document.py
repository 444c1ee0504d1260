"""Document container, annotation types and the JSON wire format."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional

from .errors import OversizeInput

NIL = "NIL"
MISC = "MISC"
PLACEHOLDER_IDS = frozenset({NIL, MISC})

DEFAULT_MAX_BYTES = 1 << 20

MAX_MENTION_TOKENS = 6


def is_placeholder(entity_id: Optional[str]) -> bool:
    return entity_id in PLACEHOLDER_IDS


class ResolutionPass(str, Enum):
    EASY = "EASY"
    HARD = "HARD"
    UNRESOLVED = "UNRESOLVED"


class EntityType(str, Enum):
    PERSON = "PERSON"
    ORGANIZATION = "ORGANIZATION"
    LOCATION = "LOCATION"
    FILM = "FILM"
    EVENT = "EVENT"
    BOOK = "BOOK"
    OTHER = "OTHER"


class SentimentLabel(str, Enum):
    POSITIVE = "POSITIVE"
    NEGATIVE = "NEGATIVE"
    NEUTRAL = "NEUTRAL"


class AnnotationKind(str, Enum):
    ENTITY = "ENTITY"
    KLOUT_TOPIC = "KLOUT_TOPIC"
    HASHTAG = "HASHTAG"
    SENTIMENT = "SENTIMENT"

    @classmethod
    def parse(cls, name: str) -> "AnnotationKind":
        key = name.strip().upper()
        aliases = {"TOPIC": "KLOUT_TOPIC", "TOPICS": "KLOUT_TOPIC",
                   "ENTITIES": "ENTITY", "HASHTAGS": "HASHTAG"}
        return cls(aliases.get(key, key))


ALL_KINDS = frozenset(AnnotationKind)
SUMMARY_KINDS = (AnnotationKind.ENTITY, AnnotationKind.KLOUT_TOPIC, AnnotationKind.HASHTAG)


@dataclass
class Token:
    surface: str
    char_start: int
    char_end: int
    normalized: str


@dataclass
class SentenceSpan:
    token_start: int
    token_end: int
    char_start: int
    char_end: int


@dataclass
class FeatureVector:
    mention_entity_cooccurr: float = 0.0
    mention_entity_jaccard: float = 0.0
    entity_importance: float = 0.0
    entity_entity_cooccurr: float = 0.0
    entity_topic_sim: float = 0.0

    def as_list(self) -> List[float]:
        return [self.mention_entity_cooccurr, self.mention_entity_jaccard,
                self.entity_importance, self.entity_entity_cooccurr,
                self.entity_topic_sim]


@dataclass
class CandidateEntity:
    entity_id: str
    prior: float
    label: Optional[bool] = None
    score: Optional[float] = None
    features: Optional[FeatureVector] = None


@dataclass
class Mention:
    token_start: int
    token_end: int
    surface: str
    candidates: List[CandidateEntity] = field(default_factory=list)
    resolved: Optional[str] = None
    resolution_pass: ResolutionPass = ResolutionPass.UNRESOLVED

    def __len__(self):
        return self.token_end - self.token_start


@dataclass
class LocationMeta:
    population: int
    time_zone: str
    lat: float
    lon: float


@dataclass
class EntityAnnotation:
    entity_id: str
    surface: str
    score: float
    entity_type: EntityType = EntityType.OTHER
    kb_url: Optional[str] = None
    location_meta: Optional[LocationMeta] = None


@dataclass
class TopicAnnotation:
    topic_id: str
    readable: str
    score: float


@dataclass
class HashtagAnnotation:
    tag: str
    score: float


@dataclass
class SentimentResult:
    score: float
    label: SentimentLabel


@dataclass
class Document:
    text: str
    language: Optional[str] = None
    tokens: List[Token] = field(default_factory=list)
    sentences: List[SentenceSpan] = field(default_factory=list)
    mentions: List[Mention] = field(default_factory=list)
    entity_annotations: List[EntityAnnotation] = field(default_factory=list)
    topic_annotations: List[TopicAnnotation] = field(default_factory=list)
    hashtag_annotations: List[HashtagAnnotation] = field(default_factory=list)
    sentiment: Optional[SentimentResult] = None
    stage_timings: Dict[str, int] = field(default_factory=dict)
    language_probability: Optional[float] = None
    # normalized text and, per normalized char, the index of its source char
    normalized_text: Optional[str] = None
    offset_map: List[int] = field(default_factory=list)

    def debug_dict(self) -> dict:
        return asdict(self)

    def debug_json(self) -> str:
        return json.dumps(self.debug_dict(), indent=2, ensure_ascii=False, default=_enum_value)


def _enum_value(obj):
    if isinstance(obj, Enum):
        return obj.value
    raise TypeError(f"not serializable: {type(obj).__name__}")


def new_document(text: str, max_bytes: int = DEFAULT_MAX_BYTES) -> Document:
    size = len(text.encode("utf-8", errors="surrogatepass"))
    if size > max_bytes:
        raise OversizeInput(size, max_bytes)
    return Document(text=text)


def _kinds(selection: Optional[Iterable]) -> frozenset:
    if selection is None:
        return ALL_KINDS
    return frozenset(k if isinstance(k, AnnotationKind) else AnnotationKind.parse(k)
                     for k in selection)


def response_dict(doc: Document, selection: Optional[Iterable] = None) -> dict:
    """Build the response object; ``selection`` defaults to every kind."""
    kinds = _kinds(selection)
    summary = []
    if AnnotationKind.ENTITY in kinds:
        ordered = sorted(enumerate(doc.entity_annotations),
                         key=lambda pair: (-pair[1].score, pair[0]))
        items = []
        for _, ann in ordered:
            item = {"id_str": ann.entity_id}
            if ann.kb_url:
                item["id_url"] = ann.kb_url
            item["score"] = ann.score
            item["type"] = EntityType(ann.entity_type).value
            items.append(item)
        summary.append({"type": AnnotationKind.ENTITY.value, "annotation_identifier": items})
    if AnnotationKind.KLOUT_TOPIC in kinds:
        items = [{"id_str": t.topic_id, "id_readable": t.readable, "score": t.score}
                 for t in doc.topic_annotations]
        summary.append({"type": AnnotationKind.KLOUT_TOPIC.value, "annotation_identifier": items})
    if AnnotationKind.HASHTAG in kinds:
        items = [{"id_str": h.tag, "score": h.score} for h in doc.hashtag_annotations]
        summary.append({"type": AnnotationKind.HASHTAG.value, "annotation_identifier": items})
    out = {"text": doc.text, "language": doc.language, "annotation_summary": summary}
    if AnnotationKind.SENTIMENT in kinds:
        out["sentiment"] = doc.sentiment.score if doc.sentiment is not None else 0.0
    return out


def serialize_response(doc: Document, selection: Optional[Iterable] = None, indent=None) -> str:
    return json.dumps(response_dict(doc, selection), ensure_ascii=False, indent=indent)


def parse_response(payload) -> Document:
    """Inverse of :func:`serialize_response` for the fields the wire carries.

    Surfaces, offsets and location metadata are not part of the response
    and come back empty.
    """
    data = json.loads(payload) if isinstance(payload, (str, bytes)) else payload
    doc = Document(text=data["text"], language=data.get("language"))
    for section in data.get("annotation_summary", []):
        kind = AnnotationKind(section["type"])
        for item in section.get("annotation_identifier", []):
            if kind is AnnotationKind.ENTITY:
                doc.entity_annotations.append(EntityAnnotation(
                    entity_id=item["id_str"], surface="", score=item["score"],
                    entity_type=EntityType(item.get("type", "OTHER")),
                    kb_url=item.get("id_url")))
            elif kind is AnnotationKind.KLOUT_TOPIC:
                doc.topic_annotations.append(TopicAnnotation(
                    item["id_str"], item.get("id_readable", ""), item["score"]))
            else:
                doc.hashtag_annotations.append(HashtagAnnotation(item["id_str"], item["score"]))
    if "sentiment" in data:
        score = data["sentiment"]
        doc.sentiment = SentimentResult(score, SentimentLabel.NEUTRAL)
    return doc


def validate(doc: Document) -> List[str]:
    """Return one description per violated document invariant."""
    problems = []
    n_text = len(doc.text)
    prev_end = 0
    for i, tok in enumerate(doc.tokens):
        if tok.char_end <= tok.char_start:
            problems.append(f"token {i} has empty or inverted span "
                            f"[{tok.char_start}, {tok.char_end})")
            continue
        if tok.char_start < 0 or tok.char_end > n_text:
            problems.append(f"token {i} span [{tok.char_start}, {tok.char_end}) "
                            f"outside text of length {n_text}")
            continue
        if tok.char_start < prev_end:
            problems.append(f"token {i} overlaps or precedes token {i - 1}")
        if doc.text[tok.char_start:tok.char_end] != tok.surface:
            problems.append(f"token {i} surface {tok.surface!r} does not match text slice")
        prev_end = tok.char_end

    n_tok = len(doc.tokens)
    sentence_of = [None] * n_tok
    expected = 0
    for j, sent in enumerate(doc.sentences):
        if sent.token_start != expected:
            problems.append(f"sentence {j} starts at token {sent.token_start}, expected {expected}")
        if sent.token_end <= sent.token_start:
            problems.append(f"sentence {j} is empty")
        for t in range(max(sent.token_start, 0), min(sent.token_end, n_tok)):
            sentence_of[t] = j
        expected = sent.token_end
    if doc.sentences and expected != n_tok:
        problems.append(f"sentences cover {expected} of {n_tok} tokens")
    if n_tok and not doc.sentences:
        problems.append("tokens present but no sentences")

    owner = {}
    for m_idx, m in enumerate(doc.mentions):
        length = m.token_end - m.token_start
        if not 1 <= length <= MAX_MENTION_TOKENS:
            problems.append(f"mention {m_idx} has length {length}")
        if m.token_start < 0 or m.token_end > n_tok:
            problems.append(f"mention {m_idx} token range [{m.token_start}, {m.token_end}) "
                            f"outside {n_tok} tokens")
        elif doc.sentences and length > 0:
            first, last = sentence_of[m.token_start], sentence_of[m.token_end - 1]
            if first != last:
                problems.append(f"mention {m_idx} crosses sentences {first} and {last}")
        for t in range(m.token_start, m.token_end):
            if t in owner:
                problems.append(f"mention overlap at token {t}")
            else:
                owner[t] = m_idx
        if not m.candidates:
            problems.append(f"mention {m_idx} has no candidates")
        for c in m.candidates:
            if not 0.0 <= c.prior <= 1.0:
                problems.append(f"mention {m_idx} candidate {c.entity_id} prior {c.prior} "
                                f"outside [0, 1]")
            if c.label is not None and c.score is None:
                problems.append(f"mention {m_idx} candidate {c.entity_id} labeled but unscored")

    for ann in doc.entity_annotations:
        if not 0.0 <= ann.score <= 1.0:
            problems.append(f"entity {ann.entity_id} score {ann.score} outside [0, 1]")
    for t in doc.topic_annotations:
        if t.score < 0:
            problems.append(f"topic {t.topic_id} has negative score")
    for h in doc.hashtag_annotations:
        if h.score < 0:
            problems.append(f"hashtag {h.tag} has negative score")
    return problems
