"""Per-stage latency benchmark over increasing document sizes."""

from __future__ import annotations

import gc
import random
import statistics
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .config import STAGES

DEFAULT_SIZES_KB = (1, 2, 4, 8, 16)

# entity-dense sentence templates over the bundled demo resources
_TEMPLATES = [
    "Google CEO Eric Schmidt said that the competition between Apple and Google and iOS "
    "vs. Android is the defining fight of the tech industry.",
    "Vlade Divac Serbian NBA player used to play for LA Lakers.",
    "Apple released a new iOS update while Android phones gained market share.",
    "The NBA playoffs drew record crowds as the LA Lakers beat the Boston Celtics.",
    "Eric Schmidt joined Google when the tech industry was still young.",
    "Michael Jordan won six NBA titles before the Lakers rebuilt.",
    "Fans in Paris and Berlin watched Google demo Android on new smartphones.",
    "Apple Records reissued an album, and apple pie sales rose in London.",
]


def synthetic_text(size_bytes: int, seed: int = 0) -> str:
    """Entity-dense English text of roughly ``size_bytes`` UTF-8 bytes."""
    rng = random.Random(seed)
    parts: List[str] = []
    length = 0
    while length < size_bytes:
        sentence = rng.choice(_TEMPLATES)
        parts.append(sentence)
        length += len(sentence.encode("utf-8")) + 1
    text = " ".join(parts)
    return text[:size_bytes].rsplit(" ", 1)[0] if len(text) > size_bytes else text


@dataclass
class BucketTiming:
    size_kb: float
    size_bytes: int
    reps: int
    stage_mean_us: Dict[str, float]
    total_mean_us: float
    entities: float


@dataclass
class BenchReport:
    buckets: List[BucketTiming] = field(default_factory=list)
    slope_ms_per_kb: Optional[float] = None
    intercept_ms: Optional[float] = None
    r_squared: Optional[float] = None
    edl_share: float = 0.0
    entities_per_kb: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)

    def table(self) -> str:
        stages = [s for s in STAGES]
        head = f"{'kb':>6} " + " ".join(f"{s[:9]:>9}" for s in stages) + f" {'total':>10}"
        lines = [head + "   (mean microseconds)"]
        for b in self.buckets:
            cells = " ".join(f"{b.stage_mean_us.get(s, 0.0):9.0f}" for s in stages)
            lines.append(f"{b.size_kb:6g} {cells} {b.total_mean_us:10.0f}")
        if self.r_squared is not None:
            lines.append(f"linear fit: {self.slope_ms_per_kb:.3f} ms/kb, intercept "
                         f"{self.intercept_ms:.3f} ms, R^2 = {self.r_squared:.4f}")
        lines.append(f"EDL share of time: {self.edl_share:.1%}; "
                     f"entities per kb: {self.entities_per_kb:.2f}")
        return "\n".join(lines)


def linear_fit(x: Sequence[float], y: Sequence[float]):
    """Least-squares ``y = slope * x + intercept`` and its R^2."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float((residual ** 2).sum()) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


def benchmark(annotator, sizes_kb: Sequence[float] = DEFAULT_SIZES_KB, reps: int = 20,
              generator: Callable[[int, int], str] = synthetic_text, select=None,
              warmup: int = 2) -> BenchReport:
    """Time every stage per size bucket and fit total time against size."""
    report = BenchReport()
    texts = {kb: generator(int(kb * 1024), i) for i, kb in enumerate(sizes_kb)}
    for kb in sizes_kb:
        for _ in range(warmup):
            annotator.annotate(texts[kb], select=select)
    gc_was_enabled = gc.isenabled()
    gc.disable()
    try:
        for kb in sizes_kb:
            text = texts[kb]
            runs = []
            n_entities = []
            for _ in range(reps):
                doc = annotator.annotate(text, select=select)
                runs.append(doc.stage_timings)
                n_entities.append(sum(1 for m in doc.mentions if m.resolved
                                      and m.resolved not in ("NIL", "MISC")))
            stage_mean = {s: statistics.fmean(r.get(s, 0) for r in runs) for s in STAGES}
            report.buckets.append(BucketTiming(
                size_kb=kb, size_bytes=len(text.encode("utf-8")), reps=reps,
                stage_mean_us=stage_mean,
                total_mean_us=statistics.fmean(r["total"] for r in runs),
                entities=statistics.fmean(n_entities)))
    finally:
        if gc_was_enabled:
            gc.enable()

    total = sum(b.total_mean_us for b in report.buckets)
    edl = sum(b.stage_mean_us["edl"] for b in report.buckets)
    report.edl_share = edl / total if total else 0.0
    kb_total = sum(b.size_bytes for b in report.buckets) / 1024
    report.entities_per_kb = (sum(b.entities for b in report.buckets) / kb_total
                              if kb_total else 0.0)
    if len(report.buckets) >= 2:
        x = [b.size_bytes / 1024 for b in report.buckets]
        y = [b.total_mean_us / 1000 for b in report.buckets]
        report.slope_ms_per_kb, report.intercept_ms, report.r_squared = linear_fit(x, y)
    return report
