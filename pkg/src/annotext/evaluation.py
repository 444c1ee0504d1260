"""Strict span-and-id evaluation of entity links."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .document import is_placeholder
from .errors import AlignmentError, FormatError

Span = Tuple[int, int]


@dataclass(frozen=True)
class EvalResult:
    tp: int
    fp: int
    fn: int
    tn: int
    precision: float
    recall: float
    f1: float
    accuracy: float

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int, tn: int) -> "EvalResult":
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        total = tp + fp + fn + tn
        accuracy = (tp + tn) / total if total else 0.0
        return cls(tp, fp, fn, tn, precision, recall, f1, accuracy)

    def to_dict(self) -> dict:
        return asdict(self)


def _linked(entity) -> bool:
    return entity is not None and not is_placeholder(entity)


def confusion(gold: Mapping[Span, str], predicted: Mapping[Span, str]) -> Tuple[int, int, int, int]:
    tp = fp = fn = tn = 0
    for span, gold_id in gold.items():
        pred_id = predicted.get(span)
        if _linked(gold_id):
            if pred_id == gold_id:
                tp += 1
            elif _linked(pred_id):
                fp += 1
            else:
                fn += 1
        elif _linked(pred_id):
            fp += 1
        else:
            tn += 1
    return tp, fp, fn, tn


def evaluate(gold_docs: Sequence[Mapping[Span, str]],
             predicted_docs: Sequence[Mapping[Span, str]]) -> EvalResult:
    """Score predictions aligned to gold by document and token span.

    A missing prediction counts as NIL. Predicted spans absent from gold,
    or a document count mismatch, raise :class:`AlignmentError`.
    """
    if len(gold_docs) != len(predicted_docs):
        raise AlignmentError([f"document count {len(gold_docs)} != {len(predicted_docs)}"])
    offending = []
    for d, (gold, pred) in enumerate(zip(gold_docs, predicted_docs)):
        offending.extend((d, span) for span in sorted(set(pred) - set(gold)))
    if offending:
        raise AlignmentError(offending)
    tp = fp = fn = tn = 0
    for gold, pred in zip(gold_docs, predicted_docs):
        a, b, c, e = confusion(gold, pred)
        tp, fp, fn, tn = tp + a, fp + b, fn + c, tn + e
    return EvalResult.from_counts(tp, fp, fn, tn)


def spans_from_record(record: dict) -> Dict[Span, str]:
    try:
        return {(int(a["s"]), int(a["e"])): str(a["id"]) for a in record.get("annotations", [])}
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad annotation record: {exc!r}") from None


def read_span_file(path) -> List[Dict[Span, str]]:
    """One ``{"annotations": [{"s", "e", "id"}]}`` object per line."""
    docs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                docs.append(spans_from_record(json.loads(line)))
            except json.JSONDecodeError as exc:
                raise FormatError(str(exc), path, lineno) from None
            except FormatError as exc:
                raise FormatError(str(exc), path, lineno) from None
    return docs


def predict_spans(annotator, gold_docs: Iterable) -> List[Dict[Span, str]]:
    """Run the annotator over gold documents and collect mention resolutions.

    NIL/MISC resolutions at spans the gold leaves unannotated are dropped;
    they assert nothing. Linked predictions are always kept, so an
    unannotated linked span still surfaces as an alignment error.
    """
    out = []
    for gold in gold_docs:
        gold_spans = {(a.token_start, a.token_end) for a in gold.annotations}
        doc = annotator.annotate(gold.text, language=gold.language, select=["ENTITY"])
        out.append({(m.token_start, m.token_end): m.resolved for m in doc.mentions
                    if m.resolved is not None and (_linked(m.resolved)
                                                   or (m.token_start, m.token_end) in gold_spans)})
    return out
