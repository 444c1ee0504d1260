"""Command line entry point: ``annotext <command> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import List, Optional, TextIO

from . import DEMO_MANIFEST, DEMO_MODEL
from .config import load_config
from .document import AnnotationKind, response_dict
from .errors import AnnotextError

log = logging.getLogger("annotext")


def _kinds(value: Optional[str]):
    if not value:
        return None
    return frozenset(AnnotationKind.parse(k) for k in value.split(",") if k.strip())


def _annotator(args):
    from .edl.model import ClassifierModel
    from .pipeline import Annotator
    from .resources import load_resources
    return Annotator(load_resources(args.resources), ClassifierModel.load(args.model),
                     load_config(args.config))


def _add_runtime_args(p):
    p.add_argument("--resources", default=DEMO_MANIFEST, help="resource manifest (default: demo)")
    p.add_argument("--model", default=DEMO_MODEL, help="EDL model JSON (default: demo)")
    p.add_argument("--config", default=None, help="pipeline config, TOML or JSON")


def annotate_stream(annotator, lines, out: TextIO, kinds=None, language=None,
                    debug: bool = False) -> int:
    """Annotate one document per input line; returns the number of failed lines."""
    failures = 0
    for lineno, line in enumerate(lines, start=1):
        text = line.rstrip("\r\n")
        try:
            if not text.strip():
                raise AnnotextError("empty line")
            doc = annotator.annotate(text, language=language, select=kinds)
            record = doc.debug_dict() if debug else response_dict(doc, kinds)
        except AnnotextError as exc:
            failures += 1
            record = {"error": {"code": type(exc).__name__, "message": str(exc)}, "line": lineno}
        out.write(json.dumps(record, ensure_ascii=False, default=_plain) + "\n")
    return failures


def _plain(obj):
    return getattr(obj, "value", str(obj))


def cmd_annotate(args) -> int:
    annotator = _annotator(args)
    kinds = _kinds(args.select)
    if args.debug_dump:
        stream = sys.stdin if args.input == "-" else open(args.input, encoding="utf-8")
        with stream:
            for line in stream:
                if line.strip():
                    doc = annotator.annotate(line.rstrip("\n"), language=args.language,
                                             select=kinds)
                    print(doc.debug_json())
        return 0
    stream = sys.stdin if args.input == "-" else open(args.input, encoding="utf-8")
    with stream:
        annotate_stream(annotator, stream, sys.stdout, kinds, args.language)
    return 0


def cmd_build(args) -> int:
    from .builder import build_all, expand_corpus_glob
    paths = expand_corpus_glob(args.corpus)
    if not paths:
        log.error("no corpus files match %s", args.corpus)
        return 2
    report = build_all(paths, args.lang, args.out, window=args.window, min_count=args.min_count,
                       top_k=args.top_k, workers=args.workers)
    print(json.dumps(report.__dict__, indent=2))
    return 0


def cmd_train_edl(args) -> int:
    from .builder import read_corpus
    from .edl.model import LogisticHyper, TreeHyper
    from .edl.training import generate_training_examples, train_model
    from .resources import load_resources
    resources = load_resources(args.resources)
    config = load_config(args.config)
    gold = list(read_corpus([args.gold]))
    examples, report = generate_training_examples(gold, resources, config)
    log.info("training report: %s", report)
    model = train_model(examples, LogisticHyper(args.lr, args.epochs, args.l2),
                        TreeHyper(args.depth, args.min_leaf),
                        metadata={"gold": os.path.basename(args.gold)})
    model.save(args.out)
    print(json.dumps({"examples": report.examples, "hard_mentions": report.hard_mentions,
                      "skipped_missing_gold": report.skipped_missing_gold,
                      "skipped_unaligned": report.skipped_unaligned, "out": args.out}))
    return 0


def cmd_train_lang(args) -> int:
    from .langid import train_language_profiles
    samples = {}
    for name in sorted(os.listdir(args.samples)):
        if name.endswith(".txt"):
            with open(os.path.join(args.samples, name), encoding="utf-8") as fh:
                samples[name[:-4]] = [p for p in fh.read().split("\n\n") if p.strip()]
    os.makedirs(args.out, exist_ok=True)
    for profile in train_language_profiles(samples):
        profile.write(os.path.join(args.out, f"profile.{profile.language}.tsv"))
    print(json.dumps(sorted(samples)))
    return 0


def cmd_eval(args) -> int:
    from .builder import read_corpus
    from .evaluation import evaluate, predict_spans, read_span_file, spans_from_record
    gold_docs = list(read_corpus([args.gold]))
    gold = [spans_from_record(d.to_json()) for d in gold_docs]
    if args.pred:
        pred = read_span_file(args.pred)
    else:
        pred = predict_spans(_annotator(args), gold_docs)
    print(json.dumps(evaluate(gold, pred).to_dict(), indent=2))
    return 0


def cmd_bench(args) -> int:
    from .bench import benchmark
    sizes = [float(s) for s in args.sizes.split(",")]
    report = benchmark(_annotator(args), sizes, args.reps, select=_kinds(args.select))
    print(json.dumps(report.to_dict(), indent=2) if args.json else report.table())
    return 0


def cmd_serve(args) -> int:
    from .service import serve
    serve(_annotator(args), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="annotext", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("annotate", help="annotate one document per input line")
    p.add_argument("--in", dest="input", default="-", help="input file, '-' for stdin")
    p.add_argument("--select", help="comma-separated kinds: entity,klout_topic,hashtag,sentiment")
    p.add_argument("--language", help="skip detection and use this language")
    p.add_argument("--debug-dump", action="store_true", help="print the full document as JSON")
    _add_runtime_args(p)
    p.set_defaults(func=cmd_annotate)

    p = sub.add_parser("build", help="build mention and co-occurrence dictionaries")
    p.add_argument("--corpus", required=True, help="glob of JSONL corpus files")
    p.add_argument("--lang", default="all")
    p.add_argument("--out", required=True)
    p.add_argument("--min-count", type=int, default=10)
    p.add_argument("--top-k", type=int, default=30)
    p.add_argument("--window", type=int, default=50)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("train-edl", help="train the second-pass classifiers")
    p.add_argument("--gold", required=True)
    p.add_argument("--resources", default=DEMO_MANIFEST)
    p.add_argument("--config", default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--lr", type=float, default=0.5)
    p.add_argument("--epochs", type=int, default=2000)
    p.add_argument("--l2", type=float, default=1e-3)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--min-leaf", type=int, default=1)
    p.set_defaults(func=cmd_train_edl)

    p = sub.add_parser("train-lang", help="fit language profiles from <lang>.txt samples")
    p.add_argument("--samples", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train_lang)

    p = sub.add_parser("eval", help="precision/recall/F1/accuracy against a gold corpus")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", help="predicted spans JSONL; omit to run the annotator")
    _add_runtime_args(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="per-stage latency over document sizes")
    p.add_argument("--sizes", default="1,2,4,8,16", help="sizes in kb")
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--select")
    p.add_argument("--json", action="store_true")
    _add_runtime_args(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    _add_runtime_args(p)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (AnnotextError, OSError) as exc:
        log.error("%s", exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
