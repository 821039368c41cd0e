"""Tokenization of a parsed message into one tagged sequence."""

from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = [
    "Token",
    "TokenSequence",
    "SUBJECT",
    "FROM",
    "BODY",
    "SENTINELS",
    "tokenize",
    "flatten_to_tokens",
    "is_url",
]

SUBJECT = "[SUBJECT]"
FROM = "[FROM]"
BODY = "[BODY]"
SENTINELS = frozenset({SUBJECT, FROM, BODY})

_URL = r"(?:https?://|www\.)[^\s<>\"'\]\)]+"
_EMAIL = r"[\w.+\-]+@[\w\-]+(?:\.[\w\-]+)+"
_WORD = r"\w+(?:[&'’\-.]\w+)*"
_TOKEN_RE = re.compile(rf"{_URL}|{_EMAIL}|{_WORD}|[^\w\s]")
_URL_RE = re.compile(rf"^{_URL}$", re.I)
_TRAILING_PUNCT = ".,;:!?"


def is_url(text: str) -> bool:
    return bool(_URL_RE.match(text))


@dataclass(frozen=True)
class Token:
    text: str
    field: str  # "subject" | "from" | "body"
    start: int  # character offsets into the field text
    end: int

    @property
    def is_sentinel(self) -> bool:
        return self.text in SENTINELS and self.start == self.end


def tokenize(text: str, field: str = "body") -> list[Token]:
    """Split on whitespace and punctuation; URLs, addresses and ``S&P``-style words stay whole."""
    out = []
    for m in _TOKEN_RE.finditer(text):
        start, end = m.span()
        tok = m.group()
        if tok[0] in "hHwW" and is_url(tok):
            # a sentence-final period is not part of the link
            while tok and tok[-1] in _TRAILING_PUNCT:
                tok = tok[:-1]
                end -= 1
            out.append(Token(tok, field, start, end))
            for j in range(end, m.end()):
                out.append(Token(text[j], field, j, j + 1))
            continue
        out.append(Token(tok, field, start, end))
    return out


@dataclass(frozen=True)
class TokenSequence:
    tokens: tuple
    sources: tuple = ()  # ((field, text), ...)

    def __len__(self):
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __getitem__(self, i):
        return self.tokens[i]

    @property
    def texts(self) -> list[str]:
        return [t.text for t in self.tokens]

    def source(self, field: str) -> str:
        for name, text in self.sources:
            if name == field:
                return text
        return ""

    def surface(self, start: int, end: int) -> str:
        """Original text covered by tokens ``start..end`` (inclusive)."""
        toks = [t for t in self.tokens[start:end + 1] if not t.is_sentinel]
        if not toks:
            return " ".join(t.text for t in self.tokens[start:end + 1])
        parts = []
        run = [toks[0]]
        for tok in toks[1:]:
            if tok.field == run[-1].field:
                run.append(tok)
            else:
                parts.append(run)
                run = [tok]
        parts.append(run)
        return " ".join(self.source(r[0].field)[r[0].start:r[-1].end] for r in parts)

    @classmethod
    def from_texts(cls, texts, field: str = "body") -> "TokenSequence":
        """Sequence over pre-split tokens joined by single spaces.

        Sentinel strings switch the field for the tokens after them, so a
        labeled sample that was flattened from an email keeps its layout.
        """
        by_sentinel = {SUBJECT: "subject", FROM: "from", BODY: "body"}
        tokens, sources, parts, pos = [], [], [], 0

        def close():
            if parts:
                sources.append((field, " ".join(parts)))

        for t in texts:
            if t in by_sentinel:
                close()
                field, parts, pos = by_sentinel[t], [], 0
                tokens.append(Token(t, field, 0, 0))
                continue
            tokens.append(Token(t, field, pos, pos + len(t)))
            parts.append(t)
            pos += len(t) + 1
        close()
        return cls(tuple(tokens), tuple(sources))


def flatten_to_tokens(parsed) -> TokenSequence:
    """Subject, sender name and body, each introduced by a sentinel; empty fields add nothing."""
    tokens: list[Token] = []
    sources = []
    for field, sentinel, text in (
        ("subject", SUBJECT, parsed.subject),
        ("from", FROM, parsed.sender_name),
        ("body", BODY, parsed.body),
    ):
        field_tokens = tokenize(text or "", field)
        if not field_tokens:
            continue
        tokens.append(Token(sentinel, field, 0, 0))
        tokens.extend(field_tokens)
        sources.append((field, text))
    return TokenSequence(tuple(tokens), tuple(sources))
