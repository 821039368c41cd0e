"""Focal loss over per-token class probabilities, with its analytic gradient."""

from __future__ import annotations

import numpy as np

__all__ = ["DEFAULT_GAMMA", "PROB_EPS", "focal_loss", "focal_loss_grad", "clamp_probs"]

DEFAULT_GAMMA = 2.0
PROB_EPS = 1e-12


def clamp_probs(probs, eps: float = PROB_EPS):
    """Caller-side clamp keeping every probability inside ``[eps, 1]``."""
    return np.clip(np.asarray(probs, dtype=float), eps, 1.0)


def _gold(probs, labels, gamma):
    probs = np.asarray(probs, dtype=float)
    labels = np.asarray(labels, dtype=int)
    if probs.ndim != 2:
        raise ValueError("probs must be a 2-D array of per-token class probabilities")
    if labels.shape != (probs.shape[0],):
        raise ValueError(f"expected {probs.shape[0]} labels, got shape {labels.shape}")
    if probs.shape[0] == 0:
        raise ValueError("focal loss needs at least one token")
    if gamma < 0:
        raise ValueError("gamma must be non-negative")
    if labels.min() < 0 or labels.max() >= probs.shape[1]:
        raise ValueError("label index out of range")
    p = probs[np.arange(len(labels)), labels]
    if np.any(p <= 0) or np.any(p > 1):
        raise ValueError("gold-class probability must lie in (0, 1]; clamp before calling")
    return probs, labels, p


def focal_loss(probs, labels, gamma: float = DEFAULT_GAMMA) -> float:
    """Mean over tokens of ``-(1 - p_y)**gamma * log(p_y)``.

    ``probs`` has one row per token; ``labels`` holds the gold class index of
    each row.  With ``gamma=0`` this is the mean cross-entropy.
    """
    _, _, p = _gold(probs, labels, gamma)
    return float(-np.mean((1.0 - p) ** gamma * np.log(p)))


def focal_loss_grad(probs, labels, gamma: float = DEFAULT_GAMMA) -> np.ndarray:
    """Gradient of :func:`focal_loss` with respect to ``probs`` (same shape).

    Only the gold entry of each row is non-zero:
    ``(gamma (1-p)^(gamma-1) log p - (1-p)^gamma / p) / N``.
    """
    probs, labels, p = _gold(probs, labels, gamma)
    n = len(p)
    q = 1.0 - p
    with np.errstate(divide="ignore", invalid="ignore"):
        # (1-p)^(gamma-1) log p -> 0 as p -> 1 for any gamma > 0
        focus = np.where(q > 0, gamma * q ** (gamma - 1.0) * np.log(p), 0.0) if gamma > 0 else 0.0
    g = (focus - q ** gamma / p) / n
    grad = np.zeros_like(probs)
    grad[np.arange(n), labels] = g
    return grad
