"""Batch and stream scanning: bounded parallel fan-out with in-order output, and metrics."""

from __future__ import annotations

import csv
import json
import statistics
import threading
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from refmail.ingest.readers import Oversize, ReadFailure, iter_messages
from refmail.verdict import NO_IDENTITY, PHISHING, Verdict, oversize_verdict

__all__ = [
    "ordered_map",
    "InflightStats",
    "scan_item",
    "scan_messages",
    "MetricsReport",
    "compute_metrics",
    "evaluate",
    "load_labels",
    "label_keys",
]


@dataclass
class InflightStats:
    """Peak number of submitted-but-not-yet-emitted items (for backpressure checks)."""

    current: int = 0
    peak: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def up(self):
        with self.lock:
            self.current += 1
            self.peak = max(self.peak, self.current)

    def down(self):
        with self.lock:
            self.current -= 1


def ordered_map(fn, items, workers: int = 1, window: int | None = None, stats: InflightStats | None = None):
    """``map(fn, items)`` over a thread pool, yielding results in input order.

    At most ``window`` items (default ``2 * workers``) are pulled from
    ``items`` ahead of the consumer, so memory stays bounded for endless
    input streams.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if workers == 1:
        for item in items:
            if stats:
                stats.up()
            yield fn(item)
            if stats:
                stats.down()
        return
    window = window or 2 * workers
    pending = deque()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for item in items:
            if len(pending) >= window:
                yield pending.popleft().result()
                if stats:
                    stats.down()
            if stats:
                stats.up()
            pending.append(pool.submit(fn, item))
        while pending:
            yield pending.popleft().result()
            if stats:
                stats.down()


def scan_item(detector, item) -> Verdict:
    """Verdict for one reader item, including read failures and oversize markers."""
    if isinstance(item, Oversize):
        return oversize_verdict(item.source_id, item.size, item.limit)
    if isinstance(item, ReadFailure):
        return Verdict(NO_IDENTITY, diagnostics=(f"read failure: {item.reason}",), source_id=item.source_id)
    t0 = time.perf_counter()
    v = detector.scan(item)
    v.timings_ms["total"] = (time.perf_counter() - t0) * 1e3
    return v


def scan_messages(detector, path=None, fmt=None, stream=None, workers: int = 1, stats=None):
    """Verdicts for every message of the input, in input order."""
    items = iter_messages(path, fmt, stream=stream, max_bytes=detector.max_bytes)
    return ordered_map(lambda it: scan_item(detector, it), items, workers, stats=stats)


# -- metrics ------------------------------------------------------------------


def _ratio(num, den):
    return num / den if den else None


@dataclass
class MetricsReport:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0
    precision: float | None = None
    recall: float | None = None
    fpr: float | None = None
    median_runtime_ms: float | None = None
    stage_latency_ms: dict = field(default_factory=dict)
    scanned: int = 0
    excluded: int = 0
    diagnostics: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["counts"] = {k: d.pop(k) for k in ("tp", "fp", "tn", "fn")}
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def compute_metrics(tp=0, fp=0, tn=0, fn=0, runtimes_ms=(), stage_times=None) -> MetricsReport:
    r = MetricsReport(tp, fp, tn, fn)
    r.precision = _ratio(tp, tp + fp)
    r.recall = _ratio(tp, tp + fn)
    r.fpr = _ratio(fp, fp + tn)
    runtimes_ms = list(runtimes_ms)
    r.median_runtime_ms = statistics.median(runtimes_ms) if runtimes_ms else None
    for stage, values in (stage_times or {}).items():
        arr = np.asarray(values, dtype=float)
        r.stage_latency_ms[stage] = {
            f"p{q}": float(np.percentile(arr, q)) for q in (50, 90, 99)
        }
    return r


def label_keys(v: Verdict) -> list[str]:
    """Identifiers a labels file may use for this message."""
    keys = []
    if v.source_id:
        keys += [v.source_id, Path(v.source_id).name]
    if v.message_id:
        keys += [v.message_id, v.message_id.strip("<>")]
    return list(dict.fromkeys(keys))


_CANON = {"phishing": True, "phish": True, "1": True, "true": True,
          "benign": False, "ham": False, "legitimate": False, "0": False, "false": False}


def load_labels(path) -> dict[str, bool]:
    """Labels file: JSON object ``{id: label}`` or two-column CSV ``id,label``."""
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        raw = json.loads(text)
        items = raw.items()
    else:
        items = [row[:2] for row in csv.reader(text.splitlines()) if len(row) >= 2]
        if items and items[0][1].strip().lower() == "label":
            items = items[1:]
    out = {}
    for key, label in items:
        lab = str(label).strip().lower()
        if lab not in _CANON:
            raise ValueError(f"{path}: unknown label {label!r} for {key!r}")
        out[str(key).strip()] = _CANON[lab]
    return out


def evaluate(verdicts, labels: dict[str, bool]) -> MetricsReport:
    """Confusion counts of ``verdicts`` against ``labels``; unlabeled messages are excluded."""
    tp = fp = tn = fn = 0
    runtimes, stages, diags = [], {}, []
    excluded = scanned = 0
    for v in verdicts:
        scanned += 1
        if "total" in v.timings_ms:
            runtimes.append(v.timings_ms["total"])
        key = next((k for k in label_keys(v) if k in labels), None)
        if key is None:
            excluded += 1
            diags.append(f"unlabeled message excluded: {v.source_id or v.message_id or '?'}")
            continue
        truth = labels[key]
        alert = v.decision == PHISHING
        tp += truth and alert
        fn += truth and not alert
        fp += (not truth) and alert
        tn += (not truth) and not alert
        for stage, ms in v.timings_ms.items():
            stages.setdefault(stage, []).append(ms)
    r = compute_metrics(tp, fp, tn, fn, runtimes, stages)
    r.scanned = scanned
    r.excluded = excluded
    r.diagnostics = diags
    return r
