"""Contrastive retrieval loss with a typo-consistency KL term, and its gradient.

For a query ``q``, its typo variant ``q2``, candidates ``P`` and positives
``P+`` with scores ``z = f(q) . f(P) / tau`` and ``z2 = f(q2) . f(P) / tau``:

    retrieval = mean over p in P+ of  logsumexp(z) - z[p]
    kl        = KL(softmax(z2) || softmax(z))

The gradient is worked out for a linear embedding ``f(s) = unit(W phi(s))``
so the kernel can be checked against finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "RetrievalBatch",
    "retrieval_kl_terms",
    "retrieval_kl_loss",
    "LinearProjection",
]


@dataclass(frozen=True)
class RetrievalBatch:
    query: str
    query_typo: str
    positives: tuple
    candidates: tuple
    temperature: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "positives", tuple(self.positives))
        object.__setattr__(self, "candidates", tuple(self.candidates))
        if not self.candidates:
            raise ValueError("retrieval batch needs at least one candidate")
        if len(set(self.candidates)) != len(self.candidates):
            raise ValueError("candidates must be distinct")
        if not self.positives:
            raise ValueError("retrieval batch needs at least one positive")
        missing = set(self.positives) - set(self.candidates)
        if missing:
            raise ValueError(f"positives not among candidates: {sorted(missing)}")
        if not self.temperature > 0:
            raise ValueError("temperature must be positive")

    def positive_index(self) -> np.ndarray:
        pos = {c: i for i, c in enumerate(self.candidates)}
        return np.array([pos[p] for p in self.positives], dtype=int)


def _log_softmax(z):
    m = z.max()
    return z - (m + np.log(np.exp(z - m).sum()))


def _scores(batch, eq, eq2, ep):
    return ep @ eq / batch.temperature, ep @ eq2 / batch.temperature


def _terms_from_scores(batch, z, z2):
    logb = _log_softmax(z)
    loga = _log_softmax(z2)
    retrieval = float(-np.mean(logb[batch.positive_index()]))
    a = np.exp(loga)
    kl = float(np.sum(a * (loga - logb)))
    # KL is non-negative; only rounding can push it below zero
    return retrieval, max(kl, 0.0)


def retrieval_kl_terms(batch: RetrievalBatch, f) -> tuple[float, float]:
    """``(retrieval, kl)`` for embedding function ``f: phrase -> vector``."""
    eq = np.asarray(f(batch.query), dtype=float)
    eq2 = eq if batch.query_typo == batch.query else np.asarray(f(batch.query_typo), dtype=float)
    ep = np.vstack([np.asarray(f(p), dtype=float) for p in batch.candidates])
    z, z2 = _scores(batch, eq, eq2, ep)
    return _terms_from_scores(batch, z, z2)


def retrieval_kl_loss(batch: RetrievalBatch, f) -> float:
    """Retrieval loss plus KL consistency term."""
    retrieval, kl = retrieval_kl_terms(batch, f)
    return retrieval + kl


def _unit_backward(u, g):
    """Gradient wrt ``u`` of a loss whose gradient wrt ``u/|u|`` is ``g``."""
    n = np.linalg.norm(u)
    if n == 0:
        return np.zeros_like(u)
    e = u / n
    return (g - e * (e @ g)) / n


class LinearProjection:
    """Trainable embedding ``f(s) = unit(W @ phi(s))``.

    ``featurize`` maps a phrase to a dense feature vector ``phi(s)`` of
    length ``W.shape[1]``, e.g. ``CharNgramEmbedder(n_buckets=...).dense_features``.
    """

    def __init__(self, W, featurize):
        self.W = np.asarray(W, dtype=float)
        self.featurize = featurize

    def _pre(self, phrase):
        phi = np.asarray(self.featurize(phrase), dtype=float)
        return phi, self.W @ phi

    def __call__(self, phrase):
        _, u = self._pre(phrase)
        n = np.linalg.norm(u)
        return u / n if n > 0 else u

    def loss_and_grad(self, batch: RetrievalBatch) -> tuple[float, np.ndarray]:
        """Loss and its gradient with respect to ``W``."""
        tau = batch.temperature
        phi_q, u_q = self._pre(batch.query)
        phi_q2, u_q2 = self._pre(batch.query_typo)
        pre_p = [self._pre(p) for p in batch.candidates]
        unit = lambda u: u / np.linalg.norm(u) if np.linalg.norm(u) > 0 else u  # noqa: E731
        eq, eq2 = unit(u_q), unit(u_q2)
        ep = np.vstack([unit(u) for _, u in pre_p])
        z, z2 = _scores(batch, eq, eq2, ep)
        logb = _log_softmax(z)
        loga = _log_softmax(z2)
        b, a = np.exp(logb), np.exp(loga)
        idx = batch.positive_index()
        retrieval = float(-np.mean(logb[idx]))
        c = loga - logb
        kl = float(np.sum(a * c))

        onehot = np.zeros_like(z)
        np.add.at(onehot, idx, 1.0 / len(idx))
        gz = (b - onehot) + (b - a)
        gz2 = a * c - a * np.sum(a * c)

        g_eq = ep.T @ gz / tau
        g_eq2 = ep.T @ gz2 / tau
        g_ep = (np.outer(gz, eq) + np.outer(gz2, eq2)) / tau

        grad = np.outer(_unit_backward(u_q, g_eq), phi_q)
        grad += np.outer(_unit_backward(u_q2, g_eq2), phi_q2)
        for (phi, u), g in zip(pre_p, g_ep):
            grad += np.outer(_unit_backward(u, g), phi)
        return retrieval + kl, grad
