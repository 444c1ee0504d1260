"""Pipeline, EDL, sentiment and topic settings, loadable from TOML or JSON."""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field, fields
from typing import FrozenSet, Optional, Tuple

from .document import DEFAULT_MAX_BYTES, MAX_MENTION_TOKENS
from .errors import FormatError

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

log = logging.getLogger(__name__)

STAGES = ("language", "normalize", "sentences", "tokens", "mentions", "edl",
          "topics", "hashtags", "sentiment", "metadata")

SUPPORTED_LANGUAGES = ("ar", "de", "en", "es", "fr", "it")


@dataclass(frozen=True)
class EdlConfig:
    easy_nil_threshold: float = 0.75     # lambda 1: two candidates, one NIL/MISC
    easy_threshold: float = 0.9          # lambda 2: three or more candidates
    nil_margin: float = 0.1              # lambda 3
    context_window: int = 20
    cooccur_norm_cap: int = 100

    def __post_init__(self):
        for name in ("easy_nil_threshold", "easy_threshold", "nil_margin"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if self.context_window < 1:
            raise ValueError("context_window must be at least 1")
        if self.cooccur_norm_cap < 1:
            raise ValueError("cooccur_norm_cap must be a positive integer")
        if self.easy_threshold < self.easy_nil_threshold:
            log.warning("easy_threshold (%s) is below easy_nil_threshold (%s)",
                        self.easy_threshold, self.easy_nil_threshold)


@dataclass(frozen=True)
class SentimentConfig:
    smoothing: float = 1.0
    positive_threshold: float = 0.1
    negative_threshold: float = -0.1
    lookback: int = 3

    def __post_init__(self):
        if not self.smoothing > 0:
            raise ValueError("smoothing must be positive")
        if not self.negative_threshold <= 0 <= self.positive_threshold:
            raise ValueError("thresholds must satisfy negative <= 0 <= positive")
        if self.lookback < 0:
            raise ValueError("lookback must be non-negative")


@dataclass(frozen=True)
class TopicConfig:
    parent_decay: float = 0.5
    normalize: bool = True
    max_topics: Optional[int] = None

    def __post_init__(self):
        if not 0.0 <= self.parent_decay <= 1.0:
            raise ValueError("parent_decay must lie in [0, 1]")


@dataclass(frozen=True)
class PipelineConfig:
    stages: Tuple[str, ...] = STAGES
    max_ngram: int = MAX_MENTION_TOKENS
    languages: Tuple[str, ...] = SUPPORTED_LANGUAGES
    max_input_bytes: int = DEFAULT_MAX_BYTES
    edl: EdlConfig = field(default_factory=EdlConfig)
    sentiment: SentimentConfig = field(default_factory=SentimentConfig)
    topics: TopicConfig = field(default_factory=TopicConfig)

    def __post_init__(self):
        unknown = set(self.stages) - set(STAGES)
        if unknown:
            raise ValueError(f"unknown stages: {sorted(unknown)}")
        if not 1 <= self.max_ngram <= MAX_MENTION_TOKENS:
            raise ValueError(f"max_ngram must lie in [1, {MAX_MENTION_TOKENS}]")

    @property
    def enabled(self) -> FrozenSet[str]:
        return frozenset(self.stages)

    def to_dict(self) -> dict:
        return asdict(self)


_SECTIONS = {"edl": EdlConfig, "sentiment": SentimentConfig, "topics": TopicConfig}


def config_from_dict(data: dict) -> PipelineConfig:
    data = dict(data)
    pipeline = dict(data.pop("pipeline", {}))
    kwargs = {}
    for name, cls in _SECTIONS.items():
        section = data.pop(name, None)
        if section is not None:
            kwargs[name] = _build(cls, section, name)
    pipeline.update(data)
    for key in ("stages", "languages"):
        if key in pipeline:
            pipeline[key] = tuple(pipeline[key])
    kwargs.update(pipeline)
    return _build(PipelineConfig, kwargs, "pipeline")


def _build(cls, values: dict, section: str):
    known = {f.name for f in fields(cls)}
    extra = set(values) - known
    if extra:
        raise FormatError(f"unknown keys in [{section}]: {sorted(extra)}")
    try:
        return cls(**values)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"[{section}]: {exc}") from None


def load_config(path=None) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        if str(path).endswith(".json"):
            data = json.loads(raw)
        else:
            data = tomllib.loads(raw.decode("utf-8"))
    except (ValueError, tomllib.TOMLDecodeError) as exc:
        raise FormatError(str(exc), path) from None
    return config_from_dict(data)
