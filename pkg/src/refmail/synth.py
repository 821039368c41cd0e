"""Synthetic data built from a knowledge base: labeled samples, calibration pairs, messages."""

from __future__ import annotations

import random
from email.message import EmailMessage
from email.utils import formataddr

from refmail.adversarial.mutators import CHAR_KINDS, mutate_chars
from refmail.ingest.tokens import tokenize
from refmail.tagging.corpus import LabeledSample
from refmail.tagging.tags import ACTION, IDENTITY, OUTSIDE, begin, inside

__all__ = ["kb_samples", "calibration_pairs", "make_message", "ACTIONS", "BENIGN_LINES"]

ACTIONS = (
    "visit the link", "complete the form", "verify your account", "update your password",
    "download the attachment", "confirm your details", "click here", "sign in to your account",
    "review the document", "scan the QR code",
)
SUBJECTS = ("Important notice", "Account update", "Action required", "Your recent request", "Reminder")
BENIGN_LINES = (
    "We hope this message finds you well.", "Thank you for being with us this year.",
    "Our office will be closed on Monday.", "The quarterly report is now available.",
)


def _tag(tokens, cls):
    return [begin(cls)] + [inside(cls)] * (len(tokens) - 1)


def kb_samples(kb, seed: int = 0, limit: int | None = None) -> list[LabeledSample]:
    """One labeled sample per external alias: the alias as sender name, an instruction in the body."""
    rng = random.Random(seed)
    out = []
    for alias, entry in kb.aliases():
        if entry.internal:
            continue
        name = [t.text for t in tokenize(alias)]
        action = [t.text for t in tokenize(rng.choice(ACTIONS))]
        lead = [t.text for t in tokenize(rng.choice(BENIGN_LINES))]
        subject = [t.text for t in tokenize(rng.choice(SUBJECTS))]
        tokens = ["[SUBJECT]", *subject, "[FROM]", *name, "[BODY]", *lead,
                  action[0][:1].upper() + action[0][1:], *action[1:], "."]
        tags = ([OUTSIDE] * (len(subject) + 2) + _tag(name, IDENTITY) + [OUTSIDE] * (len(lead) + 1)
                + _tag(action, ACTION) + [OUTSIDE])
        out.append(LabeledSample(tokens, tags))
        if limit is not None and len(out) >= limit:
            break
    return out


def calibration_pairs(kb, matcher, seed: int = 0, kinds=CHAR_KINDS):
    """``(query, identity_id, is_match)`` triples from typo'd aliases.

    Each feasible single-character mutation of an alias yields a positive
    pair with its own identity and a negative pair with the highest-scoring
    other identity.
    """
    pairs = []
    for i, (alias, entry) in enumerate(kb.aliases()):
        for kind in kinds:
            m = mutate_chars(kind, alias, seed=seed + i)
            if not m.applied:
                continue
            scores = matcher.identity_scores(m.result)
            rival = max((s, ident) for ident, s in scores.items() if ident != entry.identity_id)[1]
            pairs.append((m.result, entry.identity_id, True))
            pairs.append((m.result, rival, False))
    return pairs


def make_message(sender_name: str, sender_address: str, subject: str, body: str,
                 to: str = "user@university-example.edu", message_id: str | None = None) -> bytes:
    msg = EmailMessage()
    msg["From"] = formataddr((sender_name, sender_address)) if sender_name else sender_address
    msg["To"] = to
    msg["Subject"] = subject
    if message_id:
        msg["Message-ID"] = message_id
    msg.set_content(body)
    return bytes(msg)
