"""Final decision: claimed identity vs. sending domain, gated on call-to-action instructions."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from refmail.matching.match import MatchResult
from refmail.tagging.tags import ACTION, IDENTITY

__all__ = [
    "PHISHING",
    "BENIGN",
    "NO_IDENTITY",
    "NO_ACTION",
    "DECISIONS",
    "Verdict",
    "decide",
    "render_explanation",
    "identity_phrases",
    "oversize_verdict",
]

PHISHING = "Phishing"
BENIGN = "Benign"
NO_IDENTITY = "NoIdentity"
NO_ACTION = "NoAction"
DECISIONS = (PHISHING, BENIGN, NO_IDENTITY, NO_ACTION)

_EXTERNAL = (
    "This email is flagged as phishing because it claims to be from {name} "
    "but was sent from a non-official address as {address}, "
    'and it has the instruction of "{instruction}"{more}.'
)
_INTERNAL = (
    "This email is flagged as phishing because it claims to be an internal sender "
    "but was sent from outside your organization as {address}, "
    'and it has the instruction of "{instruction}"{more}.'
)


@dataclass(frozen=True)
class Verdict:
    decision: str
    claimed_identity: str | None = None
    claimed_phrase: str | None = None
    sender_domain: str = ""
    expected_domains: frozenset = frozenset()
    instructions: tuple = ()
    explanation: str = ""
    timings_ms: dict = field(default_factory=dict)
    diagnostics: tuple = ()
    # not serialized; used to render the explanation
    claimed_name: str | None = field(default=None, compare=False)
    claimed_internal: bool = field(default=False, compare=False)
    sender_address: str = field(default="", compare=False)
    source_id: str = field(default="", compare=False)
    message_id: str = field(default="", compare=False)

    @property
    def is_alert(self) -> bool:
        return self.decision == PHISHING

    def to_dict(self) -> dict:
        return {
            "decision": self.decision,
            "claimed_identity": self.claimed_identity,
            "claimed_phrase": self.claimed_phrase,
            "sender_domain": self.sender_domain,
            "expected_domains": sorted(self.expected_domains),
            "instructions": list(self.instructions),
            "explanation": self.explanation,
            "timings_ms": {k: round(v, 3) for k, v in self.timings_ms.items()},
            "diagnostics": list(self.diagnostics),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)


def render_explanation(v: Verdict) -> str:
    """Counterfactual explanation of a Phishing verdict."""
    if v.decision != PHISHING:
        raise ValueError(f"no explanation for a {v.decision} verdict")
    if not v.instructions:
        # only reachable with the instruction gate disabled
        return _no_action_explanation(v)
    address = v.sender_address or v.sender_domain or "an unidentified address"
    extra = len(v.instructions) - 1
    more = ""
    if extra:
        more = f" (and {extra} more instruction{'s' if extra > 1 else ''})"
    template = _INTERNAL if v.claimed_internal else _EXTERNAL
    name = v.claimed_name or v.claimed_phrase or v.claimed_identity
    return template.format(name=name, address=address, instruction=v.instructions[0], more=more)


def _as_results(matches) -> list[MatchResult]:
    if matches is None:
        return []
    if isinstance(matches, MatchResult):
        return [matches]
    return list(matches)


def decide(email, spans, matches, *, require_action: bool = True,
           timings_ms=None, diagnostics=()) -> Verdict:
    """Decide one email.

    ``matches`` holds one :class:`MatchResult` per claimed-identity phrase.
    The email is consistent if any accepted identity is: an external identity
    when the sender domain is one of its domains, the internal identity when
    the sender domain is one of the recipient domains.
    """
    sender = email.sender_domain
    recipients = frozenset(email.recipient_domains)
    instructions = tuple(s.text for s in sorted(spans, key=lambda s: (s.start, s.end)) if s.cls == ACTION)
    diags = tuple(diagnostics) + tuple(f"authentication-results: {a}" for a in email.auth_results)
    base = dict(sender_domain=sender, sender_address=email.sender_address, instructions=instructions,
                timings_ms=dict(timings_ms or {}), diagnostics=diags, source_id=email.source_id,
                message_id=email.message_id)

    # (score, -order) ranks claims; earlier phrase wins ties
    claims = []
    for order, result in enumerate(_as_results(matches)):
        for acc in result.accepted:
            claims.append((acc.score, -order, result.query, acc))
    if not claims:
        return Verdict(NO_IDENTITY, **base)
    claims.sort(key=lambda c: (c[0], c[1]), reverse=True)

    expected = set()
    consistent = []
    for score, _, phrase, acc in claims:
        domains = recipients if acc.internal else acc.domains
        expected |= domains
        if sender and sender in domains:
            consistent.append((phrase, acc))
    expected = frozenset(expected)

    if consistent:
        phrase, acc = consistent[0]
        return Verdict(BENIGN, acc.identity_id, phrase, expected_domains=expected,
                       claimed_name=acc.display_name, claimed_internal=acc.internal, **base)

    _, _, phrase, acc = claims[0]
    flagged = bool(instructions) or not require_action
    v = Verdict(PHISHING if flagged else NO_ACTION, acc.identity_id, phrase,
                expected_domains=expected, claimed_name=acc.display_name,
                claimed_internal=acc.internal, **base)
    if flagged:
        v = replace(v, explanation=render_explanation(v))
    return v


def _no_action_explanation(v: Verdict) -> str:
    address = v.sender_address or v.sender_domain or "an unidentified address"
    if v.claimed_internal:
        return ("This email is flagged as phishing because it claims to be an internal sender "
                f"but was sent from outside your organization as {address}.")
    name = v.claimed_name or v.claimed_phrase
    return (f"This email is flagged as phishing because it claims to be from {name} "
            f"but was sent from a non-official address as {address}.")


def identity_phrases(spans) -> list[str]:
    """Surface text of Identity spans, in token order, without repeats."""
    seen = []
    for s in sorted(spans, key=lambda s: (s.start, s.end)):
        if s.cls == IDENTITY and s.text not in seen:
            seen.append(s.text)
    return seen


def oversize_verdict(source_id: str, size: int, limit: int) -> Verdict:
    return Verdict(NO_IDENTITY, diagnostics=(f"oversize: {size} bytes exceeds limit of {limit}",),
                   source_id=source_id)
