"""Training data generation and fitting of the second-pass classifiers."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Tuple

import numpy as np

from ..config import PipelineConfig
from ..document import FeatureVector, new_document
from ..errors import AnnotextError
from ..resources import ResourceSet
from .disambiguate import easy_positions
from .features import context_window, feature_vector
from .firstpass import first_pass
from .model import ClassifierModel, LogisticHyper, TreeHyper, train_logistic, train_tree

log = logging.getLogger(__name__)


@dataclass
class TrainingExample:
    features: FeatureVector
    label: bool
    doc_id: str
    mention_index: int
    candidate_id: str


@dataclass
class TrainingReport:
    documents: int = 0
    hard_mentions: int = 0
    examples: int = 0
    skipped_missing_gold: int = 0
    skipped_unaligned: int = 0
    skipped_documents: int = 0
    failures: List[str] = field(default_factory=list)


def generate_training_examples(gold_docs: Iterable, resources: ResourceSet,
                               config: PipelineConfig = PipelineConfig()
                               ) -> Tuple[List[TrainingExample], TrainingReport]:
    """Label every candidate of every gold-annotated hard mention.

    Gold spans are token ranges over this package's tokenization. A hard
    mention whose span carries a gold link yields one example per
    candidate, labeled True for the gold entity. Mentions whose gold entity
    is not among the candidates are skipped and counted.
    """
    from ..pipeline import prepare

    examples: List[TrainingExample] = []
    report = TrainingReport()
    for n, gold in enumerate(gold_docs):
        doc_id = gold.doc_id or str(n)
        try:
            doc = prepare(new_document(gold.text, config.max_input_bytes), resources, config,
                          language=gold.language)
        except AnnotextError as exc:
            report.skipped_documents += 1
            report.failures.append(f"{doc_id}: {exc}")
            continue
        report.documents += 1
        gold_by_span = {(a.token_start, a.token_end): a.entity_id for a in gold.annotations}
        easy, hard = first_pass(doc, config.edl)
        easy_ctx = easy_positions(doc, easy)
        for idx in hard:
            mention = doc.mentions[idx]
            gold_id = gold_by_span.get((mention.token_start, mention.token_end))
            if gold_id is None:
                report.skipped_unaligned += 1
                continue
            report.hard_mentions += 1
            if all(c.entity_id != gold_id for c in mention.candidates):
                report.skipped_missing_gold += 1
                continue
            context = context_window(mention, easy_ctx, config.edl.context_window)
            for cand in mention.candidates:
                examples.append(TrainingExample(
                    features=feature_vector(cand, mention, context, resources, config.edl),
                    label=cand.entity_id == gold_id, doc_id=doc_id, mention_index=idx,
                    candidate_id=cand.entity_id))
    report.examples = len(examples)
    return examples, report


def as_arrays(examples: List[TrainingExample]) -> Tuple[np.ndarray, np.ndarray]:
    X = np.array([e.features.as_list() for e in examples], dtype=np.float64).reshape(-1, 5)
    y = np.array([e.label for e in examples], dtype=bool)
    return X, y


def train_model(examples: List[TrainingExample], logistic: LogisticHyper = LogisticHyper(),
                tree: TreeHyper = TreeHyper(), metadata: Optional[dict] = None) -> ClassifierModel:
    X, y = as_arrays(examples)
    weights, bias = train_logistic(X, y.astype(np.float64), logistic)
    root = train_tree(X, y, tree)
    hyper = {"learning_rate": logistic.learning_rate, "epochs": logistic.epochs,
             "l2": logistic.l2, "max_depth": tree.max_depth, "min_leaf": tree.min_leaf}
    meta = {"examples": len(examples), "positives": int(y.sum())}
    meta.update(metadata or {})
    log.info("trained on %d examples (%d positive)", len(examples), int(y.sum()))
    return ClassifierModel(weights, bias, root, hyper, meta)
