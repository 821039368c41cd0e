"""Pluggable text extraction for non-text MIME parts (images, PDFs, ...)."""

from __future__ import annotations

import base64
from fnmatch import fnmatchcase
from types import MappingProxyType
from typing import Callable, Mapping

from refmail.adapter import AdapterError

__all__ = ["Extraction", "TextExtractorRegistry", "AdapterExtractor", "decode_text_part"]

# extractor(payload, mime_type) -> text
Extractor = Callable[[bytes, str], str]


class Extraction:
    __slots__ = ("text", "diagnostic")

    def __init__(self, text: str = "", diagnostic: str | None = None):
        self.text = text
        self.diagnostic = diagnostic


def decode_text_part(payload: bytes, mime_type: str = "text/plain") -> str:
    return payload.decode("utf-8", errors="replace")


class TextExtractorRegistry:
    """Read-only mapping of MIME patterns (``image/*``) to extractor callables.

    The first matching pattern wins, in insertion order.  Types with no match
    go to a no-op extractor that reports a diagnostic.
    """

    def __init__(self, extractors: Mapping[str, Extractor] | None = None):
        self._extractors = MappingProxyType(dict(extractors or {}))

    @classmethod
    def default(cls) -> "TextExtractorRegistry":
        return cls({"text/*": decode_text_part})

    def with_extractor(self, pattern: str, extractor: Extractor) -> "TextExtractorRegistry":
        return type(self)({**self._extractors, pattern: extractor})

    @property
    def patterns(self):
        return tuple(self._extractors)

    def lookup(self, mime_type: str) -> Extractor | None:
        mime_type = mime_type.lower()
        for pattern, extractor in self._extractors.items():
            if fnmatchcase(mime_type, pattern.lower()):
                return extractor
        return None

    def extract(self, payload: bytes, mime_type: str) -> Extraction:
        extractor = self.lookup(mime_type)
        if extractor is None:
            return Extraction("", f"no extractor for {mime_type}; part skipped")
        try:
            text = extractor(payload, mime_type)
        except Exception as exc:  # plugin code is untrusted
            return Extraction("", f"extractor for {mime_type} failed: {exc}")
        if not isinstance(text, str):
            return Extraction("", f"extractor for {mime_type} returned {type(text).__name__}")
        return Extraction(text)


class AdapterExtractor:
    """Extractor backed by an external process speaking the JSON-lines protocol.

    Request ``{"id", "mime_type", "data_b64"}``; reply ``{"id", "text"}``.
    """

    def __init__(self, client, deadline: float | None = None):
        self.client = client
        self.deadline = deadline

    def __call__(self, payload: bytes, mime_type: str) -> str:
        reply = self.client.request(
            {"mime_type": mime_type, "data_b64": base64.b64encode(payload).decode("ascii")},
            deadline=self.deadline,
        )
        text = reply.get("text")
        if not isinstance(text, str):
            raise AdapterError("extractor reply has no 'text' string")
        return text
