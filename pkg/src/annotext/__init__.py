"""Multilingual text annotation: entities, topics, hashtags and sentiment."""

import os

from .config import EdlConfig, PipelineConfig, SentimentConfig, TopicConfig, load_config
from .document import Document, new_document, serialize_response, validate
from .edl.model import ClassifierModel
from .pipeline import Annotator
from .resources import ResourceSet, load_resources

__version__ = "0.1.0"

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
DEMO_MANIFEST = os.path.join(DATA_DIR, "demo", "manifest.json")
DEMO_MODEL = os.path.join(DATA_DIR, "demo", "model.json")
GOLD_CORPUS = os.path.join(DATA_DIR, "gold", "gold.jsonl")


def load_demo(config: PipelineConfig = None) -> Annotator:
    """Annotator over the bundled demo resources and model."""
    return Annotator(load_resources(DEMO_MANIFEST), ClassifierModel.load(DEMO_MODEL),
                     config or PipelineConfig())


__all__ = [
    "Annotator", "ClassifierModel", "DEMO_MANIFEST", "DEMO_MODEL", "Document", "EdlConfig",
    "GOLD_CORPUS", "PipelineConfig", "ResourceSet", "SentimentConfig", "TopicConfig",
    "load_config", "load_demo", "load_resources", "new_document", "serialize_response",
    "validate",
]
