"""Seeded text mutators: single-character typos, sentence merging, verb synonym swaps.

Every mutator is a pure function of its inputs and seed.  When no eligible
edit exists the input comes back unchanged with ``applied=False`` and a
reason, so callers can drop infeasible cases from rate computations.
"""

from __future__ import annotations

import random
import re
import string
from dataclasses import dataclass

__all__ = [
    "CHAR_KINDS",
    "Mutation",
    "mutate_chars",
    "eligible_positions",
    "concat_sentence",
    "synonym_swap",
    "head_verb",
]

CHAR_KINDS = ("delete", "replace", "switch", "repeat")
_TERMINATORS = ".!?"


@dataclass(frozen=True)
class Mutation:
    kind: str
    original: str
    result: str
    applied: bool
    position: int | None = None
    seed: int | None = None
    reason: str = ""


def eligible_positions(kind: str, text: str) -> list[int]:
    """Interior indices an edit of ``kind`` may touch.

    The first and last characters are never edited, and only alphanumeric
    characters are touched so token boundaries stay where they were.
    """
    n = len(text)
    if n < 4:
        return []
    if kind == "switch":
        return [
            i for i in range(1, n - 2)
            if text[i].isalnum() and text[i + 1].isalnum() and text[i] != text[i + 1]
        ]
    if kind in ("delete", "replace", "repeat"):
        return [i for i in range(1, n - 1) if text[i].isalnum()]
    raise ValueError(f"unknown character mutation {kind!r}; expected one of {CHAR_KINDS}")


def _replacement(ch: str, rng: random.Random) -> str:
    if ch.isdigit():
        pool = string.digits
    elif ch.isupper():
        pool = string.ascii_uppercase
    else:
        pool = string.ascii_lowercase
    return rng.choice([c for c in pool if c != ch])


def mutate_chars(kind: str, text: str, seed: int = 0, position: int | None = None) -> Mutation:
    """Apply one ``delete``/``replace``/``switch``/``repeat`` typo at an interior position.

    >>> mutate_chars("delete", "paypal", position=2).result
    'papal'
    """
    eligible = eligible_positions(kind, text)
    if not eligible:
        reason = "text shorter than 4 characters" if len(text) < 4 else "no eligible interior position"
        return Mutation(kind, text, text, False, None, seed, reason)
    rng = random.Random(seed)
    if position is None:
        position = rng.choice(eligible)
    elif position not in eligible:
        raise ValueError(f"position {position} is not eligible for {kind} on {text!r}")
    i = position
    if kind == "delete":
        out = text[:i] + text[i + 1:]
    elif kind == "replace":
        out = text[:i] + _replacement(text[i], rng) + text[i + 1:]
    elif kind == "switch":
        out = text[:i] + text[i + 1] + text[i] + text[i + 2:]
    else:
        out = text[:i] + text[i] + text[i:]
    return Mutation(kind, text, out, True, i, seed)


def _locate(text: str, span) -> tuple[int, int] | None:
    if isinstance(span, tuple):
        return span
    idx = text.casefold().find(span.casefold())
    if idx < 0:
        return None
    return idx, idx + len(span)


def concat_sentence(body_text: str, action_span, seed: int | None = None) -> Mutation:
    """Merge the sentence holding ``action_span`` into the one before it.

    The terminator in front of the span is removed and the span's first
    letter lowered.  ``action_span`` is either the phrase (first occurrence,
    case-insensitive) or a ``(start, end)`` character range.
    """
    loc = _locate(body_text, action_span)
    if loc is None:
        return Mutation("concat_sent", body_text, body_text, False, None, seed, "span not found")
    start, _ = loc
    j = start - 1
    while j >= 0 and body_text[j].isspace():
        j -= 1
    if j < 0:
        return Mutation("concat_sent", body_text, body_text, False, None, seed,
                        "no preceding sentence")
    if body_text[j] not in _TERMINATORS:
        return Mutation("concat_sent", body_text, body_text, False, None, seed,
                        "span is not preceded by a sentence terminator")
    if j == 0 or not body_text[:j].strip():
        return Mutation("concat_sent", body_text, body_text, False, None, seed,
                        "no preceding sentence")
    head = body_text[:j] + body_text[j + 1:start]
    first = body_text[start:start + 1]
    out = head + first.lower() + body_text[start + 1:]
    return Mutation("concat_sent", body_text, out, True, j, seed)


_WORD = re.compile(r"[A-Za-z]+(?:[-'][A-Za-z]+)*")


def head_verb(phrase: str, table) -> tuple[str, int, int] | None:
    """Leading verb of ``phrase`` found in ``table`` (longest key wins)."""
    words = list(_WORD.finditer(phrase))
    if not words or words[0].start() != len(phrase) - len(phrase.lstrip()):
        return None
    for k in (3, 2, 1):
        if len(words) < k:
            continue
        key = " ".join(w.group().casefold() for w in words[:k])
        if key in table and table[key]:
            return key, words[0].start(), words[k - 1].end()
    return None


def _match_case(replacement: str, original: str) -> str:
    if original.isupper() and len(original) > 1:
        return replacement.upper()
    if original[:1].isupper():
        return replacement[:1].upper() + replacement[1:]
    return replacement


def synonym_swap(action_span: str, synonym_table, seed: int = 0) -> Mutation:
    """Replace the head verb of ``action_span`` with a seeded choice of synonym.

    >>> synonym_swap("visit the link", {"visit": ["view"]}).result
    'view the link'
    """
    found = head_verb(action_span, synonym_table)
    if found is None:
        return Mutation("synonym_swap", action_span, action_span, False, None, seed,
                        "head verb not in synonym table")
    key, start, end = found
    rng = random.Random(seed)
    choices = [s for s in synonym_table[key] if s.casefold() != key]
    if not choices:
        return Mutation("synonym_swap", action_span, action_span, False, None, seed,
                        "no synonym differs from the verb")
    new = _match_case(rng.choice(choices), action_span[start:end])
    out = action_span[:start] + new + action_span[end:]
    return Mutation("synonym_swap", action_span, out, True, start, seed)
