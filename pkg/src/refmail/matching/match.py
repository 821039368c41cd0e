"""Score claimed-identity phrases against every knowledge-base alias."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from refmail.adapter import AdapterProtocolError
from refmail.kb import KnowledgeBase

from .embed import CharNgramEmbedder

__all__ = [
    "PAPER_THRESHOLD",
    "AcceptedIdentity",
    "MatchResult",
    "IdentityMatcher",
    "AdapterEmbedder",
    "match_identity",
]

# Threshold tuned for a trained character-level encoder; the native embedder
# uses its own calibrated value (see refmail.config).
PAPER_THRESHOLD = 0.83


class AcceptedIdentity(NamedTuple):
    identity_id: str
    score: float
    display_name: str
    domains: frozenset
    internal: bool


@dataclass(frozen=True)
class MatchResult:
    query: str
    ranked: tuple  # ((identity_id, score), ...) best first
    accepted: tuple  # AcceptedIdentity for each ranked entry with score >= threshold
    expected_domains: frozenset
    threshold: float
    internal_accepted: bool = False

    @property
    def accepted_ids(self) -> tuple:
        return tuple(a.identity_id for a in self.accepted)

    @property
    def best(self):
        return self.ranked[0] if self.ranked else None


class AdapterEmbedder:
    """Phrase embeddings from an external model over the JSON-lines adapter."""

    def __init__(self, client, n_components: int | None = None, deadline: float | None = None):
        self.client = client
        self.n_components = n_components
        self.deadline = deadline

    def embed(self, phrase: str) -> np.ndarray:
        reply = self.client.request({"phrase": phrase}, deadline=self.deadline)
        vec = reply.get("vector")
        if not isinstance(vec, list) or not vec:
            raise AdapterProtocolError("reply has no 'vector' list")
        try:
            v = np.asarray(vec, dtype=float)
        except (TypeError, ValueError):
            raise AdapterProtocolError("vector entries must be numbers") from None
        if v.ndim != 1 or not np.all(np.isfinite(v)):
            raise AdapterProtocolError("vector must be a flat list of finite numbers")
        if self.n_components is not None and len(v) != self.n_components:
            raise AdapterProtocolError(f"expected {self.n_components} floats, got {len(v)}")
        norm = np.linalg.norm(v)
        return v / norm if norm > 0 else v

    def transform(self, X):
        rows = [self.embed(p) for p in X]
        return np.vstack(rows) if rows else np.zeros((0, self.n_components or 0))


class IdentityMatcher(BaseEstimator):
    """Exact scan of a knowledge base by cosine similarity.

    ``fit(kb)`` embeds every alias once; ``match(query)`` scores the query
    against all of them and keeps the best alias score per identity.
    """

    def __init__(self, embedder=None, threshold=PAPER_THRESHOLD, top_k=10):
        self.embedder = embedder
        self.threshold = threshold
        self.top_k = top_k

    def fit(self, kb: KnowledgeBase, y=None):
        if not isinstance(kb, KnowledgeBase):
            raise TypeError("IdentityMatcher.fit expects a KnowledgeBase")
        if not 0.0 <= float(self.threshold) <= 1.0:
            raise ValueError("threshold must lie in [0, 1]")
        self.embedder_ = self.embedder if self.embedder is not None else CharNgramEmbedder().fit()
        self.kb_ = kb
        pairs = kb.aliases()
        self.aliases_ = [a for a, _ in pairs]
        pos = {e.identity_id: i for i, e in enumerate(kb.entries)}
        self.alias_owner_ = np.array([pos[e.identity_id] for _, e in pairs], dtype=int)
        self.identity_ids_ = [e.identity_id for e in kb.entries]
        # aliases are grouped by entry in kb order, so each identity is a contiguous block
        starts = np.flatnonzero(np.r_[True, np.diff(self.alias_owner_) != 0]) if pairs else np.array([], int)
        self.block_starts_ = starts
        self.block_ids_ = self.alias_owner_[starts] if pairs else np.array([], int)
        self.alias_matrix_ = self.embedder_.transform(self.aliases_) if pairs else np.zeros((0, 1))
        return self

    def identity_scores(self, query: str) -> dict[str, float]:
        """Per-identity score (max over aliases) for every KB identity."""
        check_is_fitted(self, "alias_matrix_")
        if not self.aliases_:
            return {}
        q = self.embedder_.embed(query)
        alias_scores = np.clip(self.alias_matrix_ @ q, -1.0, 1.0)
        best = np.maximum.reduceat(alias_scores, self.block_starts_)
        return {self.identity_ids_[i]: float(s) for i, s in zip(self.block_ids_, best)}

    def match(self, query: str, threshold: float | None = None) -> MatchResult:
        t = float(self.threshold if threshold is None else threshold)
        scores = self.identity_scores(query)
        ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
        accepted = []
        for i, s in ranked:
            if s < t:
                break
            e = self.kb_[i]
            accepted.append(AcceptedIdentity(i, s, e.display_name, e.domains, e.internal))
        accepted = tuple(accepted)
        keep = max(int(self.top_k), len(accepted))
        domains = frozenset(d for a in accepted for d in a.domains)
        internal = any(a.internal for a in accepted)
        return MatchResult(query, tuple(ranked[:keep]), accepted, domains, t, internal)

    def predict(self, X):
        """Best identity id per query, or ``None`` below threshold."""
        out = []
        for q in X:
            r = self.match(q)
            out.append(r.accepted[0].identity_id if r.accepted else None)
        return out


_matchers: dict = {}


def match_identity(query: str, kb: KnowledgeBase, threshold: float = PAPER_THRESHOLD,
                   embedder=None) -> MatchResult:
    """Functional wrapper; the fitted index is cached per (kb, embedder)."""
    key = (id(kb), id(embedder))
    cached = _matchers.get(key)
    if cached is None or cached.kb_ is not kb:
        cached = IdentityMatcher(embedder).fit(kb)
        _matchers[key] = cached
    return cached.match(query, threshold)
