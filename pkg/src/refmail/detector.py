"""End-to-end scanner: parse, tokenize, tag, match identities, decide."""

from __future__ import annotations

import time

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from refmail.config import BASELINE_THRESHOLD, MAX_MESSAGE_BYTES
from refmail.ingest.message import ParsedEmail, RawEmail, parse_eml
from refmail.ingest.tokens import flatten_to_tokens
from refmail.kb import KnowledgeBase, load_kb
from refmail.matching.match import IdentityMatcher
from refmail.tagging.baseline import BaselineTagger
from refmail.verdict import PHISHING, Verdict, decide, identity_phrases, oversize_verdict

__all__ = ["PhishingDetector", "LABELS"]

LABELS = ("benign", "phishing")


class PhishingDetector(BaseEstimator, ClassifierMixin):
    """Reference-based phishing detector.

    Parameters
    ----------
    kb : KnowledgeBase or path
        Identity -> domain knowledge base.
    threshold : float
        Identity-matching acceptance threshold.
    require_action : bool
        Only alert when the email also carries a call-to-action.
    tagger : object with ``find_spans``, optional
        Defaults to a :class:`BaselineTagger` over the KB aliases.
    embedder : object with ``embed``/``transform``, optional
        Defaults to the native character n-gram embedder.
    """

    def __init__(self, kb=None, threshold=BASELINE_THRESHOLD, require_action=True,
                 tagger=None, embedder=None, extractors=None, max_bytes=MAX_MESSAGE_BYTES):
        self.kb = kb
        self.threshold = threshold
        self.require_action = require_action
        self.tagger = tagger
        self.embedder = embedder
        self.extractors = extractors
        self.max_bytes = max_bytes

    def fit(self, X=None, y=None):
        """Build the alias index and tagger; ``X``/``y`` are accepted and ignored."""
        if self.kb is None:
            raise ValueError("PhishingDetector needs a knowledge base")
        self.kb_ = self.kb if isinstance(self.kb, KnowledgeBase) else load_kb(self.kb)
        self.matcher_ = IdentityMatcher(self.embedder, threshold=self.threshold).fit(self.kb_)
        gazetteer = [a for a, _ in self.kb_.aliases()]
        self.tagger_ = self.tagger if self.tagger is not None else BaselineTagger(gazetteer).fit()
        self.classes_ = np.array(LABELS)
        return self

    def _spans(self, tokens):
        with_diags = getattr(self.tagger_, "find_spans_with_diagnostics", None)
        if with_diags is not None:
            return with_diags(tokens)
        return self.tagger_.find_spans(tokens), []

    def scan_parsed(self, email: ParsedEmail, timings=None) -> Verdict:
        check_is_fitted(self, "matcher_")
        timings = dict(timings or {})
        clock = time.perf_counter
        t0 = clock()
        tokens = flatten_to_tokens(email)
        t1 = clock()
        spans, diags = self._spans(tokens)
        t2 = clock()
        matches = [self.matcher_.match(p, self.threshold) for p in identity_phrases(spans)]
        t3 = clock()
        timings.update(tokenize=(t1 - t0) * 1e3, tag=(t2 - t1) * 1e3, match=(t3 - t2) * 1e3)
        v = decide(email, spans, matches, require_action=self.require_action,
                   timings_ms=timings, diagnostics=tuple(email.diagnostics) + tuple(diags))
        v.timings_ms["decide"] = (clock() - t3) * 1e3
        return v

    def scan(self, message) -> Verdict:
        """Verdict for raw bytes, a :class:`RawEmail` or an already parsed email."""
        if isinstance(message, ParsedEmail):
            return self.scan_parsed(message)
        raw = message if isinstance(message, RawEmail) else RawEmail(bytes(message), "")
        if len(raw.data) > self.max_bytes:
            return oversize_verdict(raw.source_id, len(raw.data), self.max_bytes)
        t0 = time.perf_counter()
        email = parse_eml(raw, self.extractors)
        return self.scan_parsed(email, {"parse": (time.perf_counter() - t0) * 1e3})

    def predict(self, X):
        return np.array([LABELS[self.scan(x).decision == PHISHING] for x in X])
