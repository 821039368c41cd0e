"""Registrable-domain extraction against a public-suffix rule set.

Rules are read from the standard list format: one rule per line, ``//``
comments, ``*`` wildcard labels and ``!`` exception rules.  Matching is done
on the ASCII (punycode) form of every label, and the registrable domain is
returned in the same form the caller supplied.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

import idna

__all__ = [
    "DomainError",
    "SuffixRules",
    "default_rules",
    "extract_registrable_domain",
    "host_of",
    "load_test_vectors",
]

_IP_RE = re.compile(r"^\d{1,3}(\.\d{1,3}){3}$")


class DomainError(ValueError):
    """Raised when no registrable domain can be derived from the input."""

    def __init__(self, raw, reason):
        super().__init__(f"{reason}: {raw!r}")
        self.raw = raw
        self.reason = reason


def _to_ascii(label: str) -> str:
    if label.isascii():
        return label.lower()
    try:
        return idna.encode(label, uts46=True).decode("ascii")
    except idna.IDNAError:
        # IDNA2008 rejects some labels the list still carries
        return label.encode("idna").decode("ascii")


@dataclass(frozen=True)
class SuffixRules:
    """Parsed public-suffix rules, keyed by reversed ASCII label tuples."""

    rules: frozenset = field(default_factory=frozenset)
    exceptions: frozenset = field(default_factory=frozenset)

    @classmethod
    def from_lines(cls, lines) -> "SuffixRules":
        rules, exceptions = set(), set()
        for line in lines:
            line = line.strip()
            if not line or line.startswith("//"):
                continue
            rule = line.split()[0]
            target = rules
            if rule.startswith("!"):
                target, rule = exceptions, rule[1:]
            labels = tuple(
                "*" if lab == "*" else _to_ascii(lab) for lab in reversed(rule.split("."))
            )
            target.add(labels)
        return cls(frozenset(rules), frozenset(exceptions))

    @classmethod
    def from_file(cls, path) -> "SuffixRules":
        with open(path, encoding="utf-8") as fh:
            return cls.from_lines(fh)

    def __len__(self):
        return len(self.rules) + len(self.exceptions)

    def _matches(self, rule, rev_labels) -> bool:
        if len(rule) > len(rev_labels):
            return False
        return all(r == "*" or r == lab for r, lab in zip(rule, rev_labels))

    def public_suffix_length(self, rev_labels) -> int:
        """Number of labels in the public suffix of ``rev_labels`` (reversed)."""
        n = len(rev_labels)
        # exception rules win; their suffix is the rule minus its leftmost label
        for size in range(n, 0, -1):
            if rev_labels[:size] in self.exceptions:
                return size - 1
        best = 1  # implicit "*" rule
        for size in range(1, n + 1):
            prefix = rev_labels[:size]
            if prefix in self.rules:
                best = max(best, size)
                continue
            wild = prefix[:-1] + ("*",)
            if wild in self.rules:
                best = max(best, size)
        return best

    def registrable_domain(self, host: str) -> str | None:
        """Return the registrable domain of ``host`` or None if it is a suffix."""
        host = host.rstrip(".") if host.endswith(".") and not host.endswith("..") else host
        labels = host.split(".")
        if not host or any(not lab for lab in labels):
            return None
        rev_ascii = tuple(_to_ascii(lab) for lab in reversed(labels))
        size = self.public_suffix_length(rev_ascii)
        if size >= len(labels):
            return None
        return ".".join(labels[-(size + 1):]).lower()


@lru_cache(maxsize=1)
def default_rules() -> SuffixRules:
    """Rules bundled with the package (``data/public_suffix_list.dat``)."""
    ref = resources.files("refmail.data") / "public_suffix_list.dat"
    with ref.open(encoding="utf-8") as fh:
        return SuffixRules.from_lines(fh)


def host_of(address_or_host: str) -> str:
    """Strip an address down to its host part."""
    text = address_or_host.strip().strip("<>").strip()
    if "@" in text:
        text = text.rsplit("@", 1)[1]
    text = text.strip().strip(">").strip()
    if "://" in text:
        text = text.split("://", 1)[1]
    text = text.split("/", 1)[0].split(":", 1)[0]
    return text


def extract_registrable_domain(address_or_host: str, rules: SuffixRules | None = None) -> str:
    """Lowercase registrable domain of an e-mail address or host name.

    >>> extract_registrable_domain("a@mail.ieee.org")
    'ieee.org'
    """
    if not isinstance(address_or_host, str) or not address_or_host.strip():
        raise DomainError(address_or_host, "empty address")
    host = host_of(address_or_host)
    if not host:
        raise DomainError(address_or_host, "no host part")
    if host.startswith("[") or _IP_RE.match(host):
        raise DomainError(address_or_host, "address literal has no registrable domain")
    if any(ch.isspace() for ch in host):
        raise DomainError(address_or_host, "whitespace in host")
    if host.startswith("."):
        raise DomainError(address_or_host, "leading dot")
    domain = (rules or default_rules()).registrable_domain(host)
    if domain is None:
        raise DomainError(address_or_host, "host is a public suffix")
    return domain


_VECTOR_RE = re.compile(r"checkPublicSuffix\((null|'[^']*'),\s*(null|'[^']*')\)")


def load_test_vectors(path: str | Path | None = None) -> list[tuple[str | None, str | None]]:
    """Read ``checkPublicSuffix('in', 'out');`` conformance vectors."""
    if path is None:
        ref = resources.files("refmail.data") / "psl_test_vectors.txt"
        text = ref.read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    vectors = []
    for m in _VECTOR_RE.finditer(text):
        a, b = (None if g == "null" else g[1:-1] for g in m.groups())
        vectors.append((a, b))
    return vectors
