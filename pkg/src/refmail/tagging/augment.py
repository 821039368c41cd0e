"""Training-time augmentation of labeled samples.

Identity spans get one seeded character typo per span; with probability
``action_prob`` per sample the head verb of one call-to-action span is swapped
for a synonym.  Tags are rebuilt so every span keeps its class and extent.
"""

from __future__ import annotations

import random

from refmail.adversarial.mutators import CHAR_KINDS, eligible_positions, mutate_chars, synonym_swap
from refmail.ingest.tokens import tokenize
from refmail.resources import load_synonyms

from .corpus import LabeledSample, as_sample
from .tags import ACTION, IDENTITY, begin, decode_spans, inside

__all__ = ["augment_identity_mutations"]


def _mutate_identity(tokens, span, rng):
    candidates = [i for i in range(span.start, span.end + 1) if len(tokens[i]) >= 4]
    rng.shuffle(candidates)
    for i in candidates:
        kinds = [k for k in CHAR_KINDS if eligible_positions(k, tokens[i])]
        if not kinds:
            continue
        m = mutate_chars(rng.choice(kinds), tokens[i], seed=rng.randrange(2 ** 32))
        if m.applied:
            tokens[i] = m.result
            return True
    return False


def _swap_action(tokens, tags, span, table, rng):
    phrase = " ".join(tokens[span.start:span.end + 1])
    m = synonym_swap(phrase, table, seed=rng.randrange(2 ** 32))
    if not m.applied:
        return tokens, tags, False
    new = [t.text for t in tokenize(m.result)]
    new_tags = [begin(ACTION)] + [inside(ACTION)] * (len(new) - 1)
    tokens = tokens[:span.start] + new + tokens[span.end + 1:]
    tags = tags[:span.start] + new_tags + tags[span.end + 1:]
    return tokens, tags, True


def augment_identity_mutations(samples, rng_seed: int = 0, action_prob: float = 0.5,
                               synonym_table=None, report=None) -> list[LabeledSample]:
    """One augmented copy per input sample.

    ``report``, if given, is a dict filled with counts: ``identity_mutated``,
    ``action_drawn`` (samples whose coin came up) and ``action_swapped``.
    """
    table = synonym_table if synonym_table is not None else load_synonyms()
    rng = random.Random(rng_seed)
    counts = {"samples": 0, "identity_mutated": 0, "action_drawn": 0, "action_swapped": 0}
    out = []
    for s in samples:
        s = as_sample(s)
        tokens, tags = list(s.tokens), list(s.tags)
        spans = decode_spans(tags)
        for span in spans:
            if span.cls == IDENTITY and _mutate_identity(tokens, span, rng):
                counts["identity_mutated"] += 1
        if rng.random() < action_prob:
            counts["action_drawn"] += 1
            actions = [sp for sp in spans if sp.cls == ACTION]
            if actions:
                target = actions[rng.randrange(len(actions))]
                tokens, tags, ok = _swap_action(tokens, tags, target, table, rng)
                counts["action_swapped"] += ok
        counts["samples"] += 1
        out.append(LabeledSample(tokens, tags))
    if report is not None:
        report.update(counts)
    return out
