"""Robustness metrics: entity recognition rate and identity matching rate under attack.

A *case* is one gold span of a labeled sample.  A sample-level mutator
rewrites the sample around that span and returns the moved span, or ``None``
when the attack has nothing to work with.  Infeasible cases are left out of
both the clean and the attacked rate, so the two rates share a denominator.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

from refmail.ingest.tokens import SENTINELS, TokenSequence, tokenize
from refmail.tagging.corpus import LabeledSample
from refmail.tagging.tags import ACTION, IDENTITY, EntitySpan, begin, decode_spans, inside

from .mutators import CHAR_KINDS, Mutation, mutate_chars, synonym_swap

__all__ = [
    "RecognitionRates",
    "char_attack",
    "concat_attack",
    "synonym_attack",
    "no_attack",
    "recognition_rate",
    "matching_rate",
    "alias_char_mutator",
    "robustness_report",
    "FEASIBILITY",
]

FEASIBILITY = {
    "no_attack": "always feasible",
    "delete": "span text has an alphanumeric interior character (length >= 4)",
    "replace": "span text has an alphanumeric interior character (length >= 4)",
    "switch": "span text has two differing adjacent alphanumeric interior characters",
    "repeat": "span text has an alphanumeric interior character (length >= 4)",
    "concat_sent": "span is directly preceded by a sentence terminator that follows other body text",
    "synonym_swap": "span starts with a verb listed in the synonym table",
}


@dataclass(frozen=True)
class RecognitionRates:
    clean_rate: float | None
    attacked_rate: float | None
    feasible: int
    excluded: int

    def to_dict(self):
        return asdict(self)


def _rebuild(sample, span, new_tokens, cls):
    tokens = list(sample.tokens[:span.start]) + new_tokens + list(sample.tokens[span.end + 1:])
    tags = (list(sample.tags[:span.start]) + [begin(cls)] + [inside(cls)] * (len(new_tokens) - 1)
            + list(sample.tags[span.end + 1:]))
    new_span = EntitySpan(span.start, span.start + len(new_tokens) - 1, cls, " ".join(new_tokens))
    return LabeledSample(tokens, tags), new_span


def _retokenize(text):
    return [t.text for t in tokenize(text)]


def no_attack(sample, span, seed):
    return sample, span


def char_attack(kind: str):
    """Whole-span DeepWordBug typo; the mutated phrase is re-tokenized."""
    if kind not in CHAR_KINDS:
        raise ValueError(f"unknown character mutation {kind!r}")

    def attack(sample, span, seed):
        phrase = " ".join(sample.tokens[span.start:span.end + 1])
        m = mutate_chars(kind, phrase, seed)
        if not m.applied:
            return None
        new = _retokenize(m.result)
        return _rebuild(sample, span, new, span.cls) if new else None

    attack.__name__ = kind
    return attack


def concat_attack(sample, span, seed):
    """Drop the terminator in front of the span and lower its first letter."""
    i = span.start
    if i < 2 or sample.tokens[i - 1] not in (".", "!", "?") or sample.tokens[i - 2] in SENTINELS:
        return None
    tokens = list(sample.tokens)
    tags = list(sample.tags)
    del tokens[i - 1]
    del tags[i - 1]
    first = tokens[i - 1]
    tokens[i - 1] = first[:1].lower() + first[1:]
    moved = EntitySpan(span.start - 1, span.end - 1, span.cls, " ".join(tokens[i - 1:span.end]))
    return LabeledSample(tokens, tags), moved


concat_attack.__name__ = "concat_sent"


def synonym_attack(table):
    def attack(sample, span, seed):
        phrase = " ".join(sample.tokens[span.start:span.end + 1])
        m = synonym_swap(phrase, table, seed)
        if not m.applied:
            return None
        return _rebuild(sample, span, _retokenize(m.result), span.cls)

    attack.__name__ = "synonym_swap"
    return attack


def _recognized(tagger, sample, span) -> bool:
    found = tagger.find_spans(TokenSequence.from_texts(sample.tokens))
    return any(s.cls == span.cls and s.start == span.start and s.end == span.end for s in found)


def recognition_rate(tagger, samples, mutator, cls: str = IDENTITY, seed: int = 0) -> RecognitionRates:
    """Clean and attacked exact-span recognition rates over feasible cases."""
    clean = attacked = feasible = excluded = 0
    case = 0
    for sample in samples:
        sample = sample if isinstance(sample, LabeledSample) else LabeledSample(*sample)
        for span in decode_spans(sample.tags):
            if span.cls != cls:
                continue
            result = mutator(sample, span, seed + case)
            case += 1
            if result is None:
                excluded += 1
                continue
            feasible += 1
            clean += _recognized(tagger, sample, span)
            attacked += _recognized(tagger, *result)
    if feasible == 0:
        return RecognitionRates(None, None, 0, excluded)
    return RecognitionRates(clean / feasible, attacked / feasible, feasible, excluded)


def alias_char_mutator(kind: str):
    """``(alias, seed) -> Mutation`` for :func:`matching_rate`; ``None`` kind means no attack."""
    if kind is None or kind == "no_attack":
        return lambda alias, seed: Mutation("none", alias, alias, True, None, seed)
    return lambda alias, seed: mutate_chars(kind, alias, seed)


def matching_rate(matcher, kb, mutator, threshold: float, seed: int = 0,
                  min_length: int = 0) -> tuple[float | None, int]:
    """Fraction of aliases whose mutated form still reaches ``threshold`` for its own identity.

    Returns ``(rate, feasible_count)``; aliases the mutator cannot touch are skipped.
    """
    hits = feasible = 0
    for i, (alias, entry) in enumerate(kb.aliases()):
        if len(alias) < min_length:
            continue
        m = mutator(alias, seed + i)
        if not m.applied:
            continue
        feasible += 1
        hits += matcher.identity_scores(m.result)[entry.identity_id] >= threshold
    return (hits / feasible if feasible else None), feasible


def robustness_report(tagger, samples, matcher, kb, threshold: float, synonym_table,
                      seed: int = 0) -> dict:
    """Per-mutator recognition and matching rates as a JSON-ready dict."""
    recognition = {}
    attacks = [("no_attack", no_attack, IDENTITY)]
    attacks += [(k, char_attack(k), IDENTITY) for k in CHAR_KINDS]
    attacks += [("concat_sent", concat_attack, ACTION), ("synonym_swap", synonym_attack(synonym_table), ACTION)]
    samples = list(samples)
    for name, attack, cls in attacks:
        r = recognition_rate(tagger, samples, attack, cls, seed)
        recognition[name] = {"class": cls, **r.to_dict(), "feasibility": FEASIBILITY[name]}
    matching = {}
    for kind in ("no_attack",) + CHAR_KINDS:
        rate, n = matching_rate(matcher, kb, alias_char_mutator(kind), threshold, seed)
        matching[kind] = {"rate": rate, "feasible": n, "feasibility": FEASIBILITY[kind]}
    return {"threshold": threshold, "seed": seed, "recognition": recognition, "matching": matching}
