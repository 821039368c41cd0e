"""Choose the identity-matching threshold by maximizing F-beta over observed scores."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

__all__ = ["fbeta", "SweepRow", "Calibration", "threshold_sweep", "calibrate_scores", "calibrate_threshold"]

DEFAULT_BETA = 0.5


def fbeta(precision: float, recall: float, beta: float = DEFAULT_BETA) -> float:
    """``(1 + b^2) P R / (b^2 P + R)``; 0 when both are 0."""
    b2 = beta * beta
    denom = b2 * precision + recall
    return (1 + b2) * precision * recall / denom if denom > 0 else 0.0


@dataclass(frozen=True)
class SweepRow:
    threshold: float
    precision: float | None  # None when nothing is accepted
    recall: float
    fbeta: float
    tp: int
    fp: int
    fn: int


@dataclass(frozen=True)
class Calibration:
    threshold: float
    precision: float
    recall: float
    fbeta: float
    beta: float
    table: tuple

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "precision": self.precision,
            "recall": self.recall,
            "fbeta": self.fbeta,
            "beta": self.beta,
            "sweep": [asdict(r) for r in self.table],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _check(scores, labels):
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels, dtype=bool)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise ValueError("scores and labels must be 1-D and the same length")
    if labels.all() or not labels.any():
        raise ValueError("calibration needs both matching and non-matching pairs")
    if not np.all(np.isfinite(scores)):
        raise ValueError("scores must be finite")
    return scores, labels


def threshold_sweep(scores, labels, beta: float = DEFAULT_BETA, thresholds=None) -> list[SweepRow]:
    """Metrics of the rule ``score >= t`` for each ``t`` (default: every observed score)."""
    scores, labels = _check(scores, labels)
    if thresholds is None:
        thresholds = np.unique(scores)
    pos_scores = np.sort(scores[labels])
    neg_scores = np.sort(scores[~labels])
    n_pos = len(pos_scores)
    rows = []
    for t in np.asarray(thresholds, dtype=float):
        tp = n_pos - int(np.searchsorted(pos_scores, t, side="left"))
        fp = len(neg_scores) - int(np.searchsorted(neg_scores, t, side="left"))
        fn = n_pos - tp
        precision = tp / (tp + fp) if tp + fp else None
        recall = tp / n_pos
        f = fbeta(precision, recall, beta) if precision is not None else 0.0
        rows.append(SweepRow(float(t), precision, recall, f, tp, fp, fn))
    return rows


def calibrate_scores(scores, labels, beta: float = DEFAULT_BETA, thresholds=None) -> Calibration:
    """Argmax-F threshold; ties go to the higher threshold (the more precise one)."""
    table = threshold_sweep(scores, labels, beta, thresholds)
    best = max(table, key=lambda r: (r.fbeta, r.threshold))
    return Calibration(best.threshold, best.precision or 0.0, best.recall, best.fbeta, beta, tuple(table))


def calibrate_threshold(pairs, matcher, beta: float = DEFAULT_BETA, thresholds=None) -> Calibration:
    """Calibrate on labeled ``(query, identity_id, is_match)`` triples.

    Each pair is scored with the matcher's per-identity score for that
    identity.
    """
    scores, labels = [], []
    cache = {}
    for query, ident, is_match in pairs:
        if query not in cache:
            cache[query] = matcher.identity_scores(query)
        scores.append(cache[query][ident])
        labels.append(bool(is_match))
    return calibrate_scores(scores, labels, beta, thresholds)
