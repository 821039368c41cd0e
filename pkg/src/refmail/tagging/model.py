"""Tagging through an external model over the JSON-lines adapter, with baseline fallback."""

from __future__ import annotations

import logging

from refmail.adapter import AdapterError, AdapterProtocolError

from .baseline import BaselineTagger, _as_sequence
from .tags import TAGS, decode_spans

__all__ = ["model_tag", "ModelTagger"]

logger = logging.getLogger(__name__)


def _validate(reply: dict, n: int) -> list[str]:
    tags = reply.get("tags")
    if not isinstance(tags, list):
        raise AdapterProtocolError("reply has no 'tags' list")
    if len(tags) != n:
        raise AdapterProtocolError(f"expected {n} tags, got {len(tags)}")
    bad = [t for t in tags if t not in TAGS]
    if bad:
        raise AdapterProtocolError(f"unknown tag(s) {sorted(set(map(str, bad)))[:3]}")
    return tags


def model_tag(tokens, adapter, fallback: BaselineTagger, deadline: float | None = None):
    """Tag via ``adapter``; on any adapter failure use ``fallback``.

    Returns ``(tags, diagnostics)``.
    """
    seq = _as_sequence(tokens)
    try:
        reply = adapter.request({"tokens": seq.texts}, deadline=deadline)
        return _validate(reply, len(seq)), []
    except AdapterError as exc:
        kind = "protocol error" if isinstance(exc, AdapterProtocolError) else "adapter failure"
        logger.warning("tagger %s, using baseline: %s", kind, exc)
        return fallback.tag(seq), [f"tagger fallback ({kind}): {exc}"]


class ModelTagger:
    """Span source backed by an external tagger; mirrors ``BaselineTagger.find_spans``."""

    def __init__(self, adapter, fallback: BaselineTagger, deadline: float | None = None):
        self.adapter = adapter
        self.fallback = fallback
        self.deadline = deadline

    def tag(self, tokens):
        return model_tag(tokens, self.adapter, self.fallback, self.deadline)[0]

    def find_spans_with_diagnostics(self, tokens):
        seq = _as_sequence(tokens)
        tags, diags = model_tag(seq, self.adapter, self.fallback, self.deadline)
        if diags:
            return self.fallback.find_spans(seq), diags
        return decode_spans(tags, seq), []

    def find_spans(self, tokens):
        return self.find_spans_with_diagnostics(tokens)[0]
