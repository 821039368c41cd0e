"""Identity -> legitimate-domain knowledge base, stored as canonical JSON lines.

Each line is ``{"id", "name", "aliases", "domains", "internal"}``.  One entry
is distinguished as *internal*: it carries no domains, and a claim matched
to it is checked against the recipient's own domain instead.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from refmail.ingest.domains import DomainError, SuffixRules, extract_registrable_domain

__all__ = [
    "INTERNAL_ID",
    "DEFAULT_INTERNAL_ALIASES",
    "KbError",
    "KbCollisionError",
    "KbEntry",
    "KnowledgeBase",
    "DomainSet",
    "Diagnostic",
    "internal_entry",
    "load_kb",
    "loads_kb",
    "dumps_kb",
    "save_kb",
    "lookup_domains",
    "validate_kb",
]

INTERNAL_ID = "internal"
DEFAULT_INTERNAL_ALIASES = (
    "IT Helpdesk", "IT Help Desk", "IT Department",
    "IT Support", "IT Service Desk", "Helpdesk", "Service Desk", "HR Department",
    "Human Resources", "Payroll", "Payroll Department", "Finance Department",
    "Accounts Department", "System Administrator", "Mail Administrator",
    "Email Administrator", "Webmail Administrator", "Management", "The Management",
    "Your Manager", "CEO", "Office of the President", "Security Team",
    "Information Security Office", "Mailbox Administrator",
)


class KbError(ValueError):
    """Malformed knowledge-base input."""

    def __init__(self, message, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class KbCollisionError(KbError):
    """Aliases shared between entries (the KB is ambiguous and needs curation)."""

    def __init__(self, collisions):
        self.collisions = collisions
        lines = [f"  {alias!r}: {', '.join(ids)}" for alias, ids in sorted(collisions.items())]
        super().__init__("alias collision(s):\n" + "\n".join(lines))


class DomainSet(frozenset):
    """Domain set returned by :func:`lookup_domains`; ``internal`` marks the internal identity."""

    internal: bool

    def __new__(cls, domains=(), internal: bool = False):
        obj = super().__new__(cls, domains)
        obj.internal = internal
        return obj

    def __repr__(self):
        return f"DomainSet({sorted(self)!r}, internal={self.internal})"


def _fold(alias: str) -> str:
    return " ".join(alias.casefold().split())


@dataclass(frozen=True)
class KbEntry:
    identity_id: str
    display_name: str
    aliases: tuple
    domains: frozenset = field(default_factory=frozenset)
    internal: bool = False

    def __post_init__(self):
        object.__setattr__(self, "aliases", tuple(self.aliases))
        object.__setattr__(self, "domains", frozenset(d.lower() for d in self.domains))
        if not self.identity_id:
            raise KbError("entry without id")
        if not self.aliases:
            raise KbError(f"entry {self.identity_id!r} has no aliases")
        if self.internal and self.domains:
            raise KbError(f"internal entry {self.identity_id!r} must not list domains")
        folded = [_fold(a) for a in self.aliases]
        if len(set(folded)) != len(folded):
            raise KbError(f"entry {self.identity_id!r} repeats an alias (case-insensitive)")

    def to_json(self) -> str:
        return json.dumps(
            {
                "id": self.identity_id,
                "name": self.display_name,
                "aliases": list(self.aliases),
                "domains": sorted(self.domains),
                "internal": self.internal,
            },
            ensure_ascii=False,
        )

    @classmethod
    def from_mapping(cls, obj, line: int | None = None) -> "KbEntry":
        if not isinstance(obj, dict):
            raise KbError("entry must be a JSON object", line)
        unknown = set(obj) - {"id", "name", "aliases", "domains", "internal"}
        if unknown:
            raise KbError(f"unknown field(s) {sorted(unknown)}", line)
        try:
            ident = obj["id"]
            aliases = obj.get("aliases") or []
            domains = obj.get("domains") or []
        except KeyError as exc:
            raise KbError(f"missing field {exc}", line) from None
        if not isinstance(ident, str) or not ident:
            raise KbError("'id' must be a non-empty string", line)
        if not isinstance(aliases, list) or not all(isinstance(a, str) and a.strip() for a in aliases):
            raise KbError("'aliases' must be a list of non-empty strings", line)
        if not isinstance(domains, list) or not all(isinstance(d, str) for d in domains):
            raise KbError("'domains' must be a list of strings", line)
        name = obj.get("name") or (aliases[0] if aliases else ident)
        internal = obj.get("internal", False)
        if not isinstance(internal, bool):
            raise KbError("'internal' must be true or false", line)
        try:
            return cls(ident, name, tuple(a.strip() for a in aliases), frozenset(domains), internal)
        except KbError as exc:
            raise KbError(str(exc), line) from None


def internal_entry(aliases=DEFAULT_INTERNAL_ALIASES) -> KbEntry:
    return KbEntry(INTERNAL_ID, "Internal", tuple(aliases), frozenset(), True)


def _collisions(entries) -> dict:
    owners: dict[str, list[str]] = {}
    for e in entries:
        for alias in e.aliases:
            ids = owners.setdefault(_fold(alias), [])
            if e.identity_id not in ids:
                ids.append(e.identity_id)
    return {a: ids for a, ids in owners.items() if len(ids) > 1}


class KnowledgeBase:
    """Immutable collection of :class:`KbEntry` with an alias index.

    ``strict=True`` (the default) rejects alias collisions and duplicate ids;
    pass ``strict=False`` to hold a dirty KB for :func:`validate_kb`.
    """

    def __init__(self, entries=(), *, strict: bool = True, add_internal: bool = True):
        entries = list(entries)
        internals = [e for e in entries if e.internal]
        if strict and len(internals) > 1:
            raise KbError(f"{len(internals)} internal entries; exactly one is allowed")
        if add_internal and not internals:
            entries.append(internal_entry())
        ids = [e.identity_id for e in entries]
        if strict and len(set(ids)) != len(ids):
            dups = sorted({i for i in ids if ids.count(i) > 1})
            raise KbError(f"duplicate identity id(s): {dups}")
        if strict:
            collisions = _collisions(entries)
            if collisions:
                raise KbCollisionError(collisions)
        self.entries = tuple(sorted(entries, key=lambda e: e.identity_id))
        self._by_id = {}
        for e in self.entries:
            self._by_id.setdefault(e.identity_id, e)
        self.alias_index = {}
        for e in self.entries:
            for alias in e.aliases:
                self.alias_index.setdefault(_fold(alias), e.identity_id)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __contains__(self, identity_id):
        return identity_id in self._by_id

    def __eq__(self, other):
        return isinstance(other, KnowledgeBase) and self.entries == other.entries

    def __getitem__(self, identity_id) -> KbEntry:
        try:
            return self._by_id[identity_id]
        except KeyError:
            raise KeyError(f"unknown identity {identity_id!r}") from None

    @property
    def internal(self) -> KbEntry | None:
        return next((e for e in self.entries if e.internal), None)

    def resolve_alias(self, alias: str) -> KbEntry | None:
        ident = self.alias_index.get(_fold(alias))
        return self._by_id[ident] if ident is not None else None

    def aliases(self):
        """``(alias, entry)`` pairs in canonical order."""
        return [(a, e) for e in self.entries for a in e.aliases]

    def all_domains(self) -> frozenset:
        return frozenset(d for e in self.entries for d in e.domains)

    def with_entry(self, entry: KbEntry) -> "KnowledgeBase":
        """New KB with ``entry`` added (or replacing the same id); collisions raise."""
        kept = [e for e in self.entries if e.identity_id != entry.identity_id]
        if entry.internal:
            kept = [e for e in kept if not e.internal]
        return KnowledgeBase(kept + [entry])


def lookup_domains(kb: KnowledgeBase, identity_id: str) -> DomainSet:
    entry = kb[identity_id]
    return DomainSet(entry.domains, internal=entry.internal)


def loads_kb(text: str, *, strict: bool = True) -> KnowledgeBase:
    entries = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise KbError(f"invalid JSON ({exc.msg})", lineno) from None
        entries.append(KbEntry.from_mapping(obj, lineno))
    return KnowledgeBase(entries, strict=strict)


def load_kb(path, *, strict: bool = True) -> KnowledgeBase:
    """Load and validate a JSON-lines KB; an internal entry is added when absent."""
    return loads_kb(Path(path).read_text(encoding="utf-8"), strict=strict)


def dumps_kb(kb: KnowledgeBase) -> str:
    """Canonical form: one entry per line, sorted by id, domains sorted."""
    return "".join(e.to_json() + "\n" for e in kb.entries)


def save_kb(kb: KnowledgeBase, path) -> None:
    Path(path).write_text(dumps_kb(kb), encoding="utf-8")


@dataclass(frozen=True)
class Diagnostic:
    level: str  # "error" | "warning"
    identity_id: str
    message: str

    def __str__(self):
        return f"{self.level}: {self.identity_id}: {self.message}"


def validate_kb(kb: KnowledgeBase, rules: SuffixRules | None = None) -> list[Diagnostic]:
    """Checkable curation problems; never raises."""
    out = []
    seen = {}
    for e in kb.entries:
        if e.identity_id in seen:
            out.append(Diagnostic("error", e.identity_id, "duplicate entry id"))
        seen[e.identity_id] = e
        if not e.internal and not e.domains:
            out.append(Diagnostic("error", e.identity_id, "non-internal entry has no domains"))
        for d in sorted(e.domains):
            try:
                reg = extract_registrable_domain(d, rules)
            except DomainError as exc:
                out.append(Diagnostic("error", e.identity_id, f"domain {d!r}: {exc.reason}"))
                continue
            if reg != d:
                out.append(Diagnostic(
                    "warning", e.identity_id,
                    f"domain {d!r} is not in registrable form; use {reg!r}",
                ))
    for alias, ids in sorted(_collisions(kb.entries).items()):
        out.append(Diagnostic("error", ",".join(ids), f"alias {alias!r} shared by {len(ids)} entries"))
    internals = [e for e in kb.entries if e.internal]
    if len(internals) != 1:
        out.append(Diagnostic("error", INTERNAL_ID, f"{len(internals)} internal entries"))
    return out
