"""RFC 5322 / MIME parsing into a flat, immutable view of one message."""

from __future__ import annotations

import email
import email.policy
from dataclasses import dataclass, field, replace
from email.header import decode_header, make_header
from email.message import Message
from email.utils import getaddresses

from .domains import DomainError, SuffixRules, extract_registrable_domain
from .extractors import TextExtractorRegistry
from .html import html_to_text

__all__ = ["RawEmail", "ParsedEmail", "SegmentKind", "parse_eml", "decode_payload"]

PLAIN = "plain"
HTML = "html_extracted"
ATTACHMENT = "attachment_extracted"
SegmentKind = str

_RECIPIENT_HEADERS = ("To", "Cc", "Delivered-To", "X-Original-To")


@dataclass(frozen=True)
class RawEmail:
    data: bytes
    source_id: str = ""

    def __post_init__(self):
        if not isinstance(self.data, (bytes, bytearray)):
            raise TypeError("RawEmail.data must be bytes")


@dataclass(frozen=True)
class ParsedEmail:
    sender_name: str = ""
    sender_address: str = ""
    sender_domain: str = ""
    recipient_domains: frozenset = frozenset()
    subject: str = ""
    body_segments: tuple = ()
    diagnostics: tuple = ()
    auth_results: tuple = ()
    message_id: str = ""
    source_id: str = ""
    headers: tuple = field(default=(), repr=False)

    @property
    def body(self) -> str:
        return "\n\n".join(text for _, text in self.body_segments if text)

    def with_diagnostic(self, message: str) -> "ParsedEmail":
        return replace(self, diagnostics=self.diagnostics + (message,))

    @classmethod
    def from_fields(cls, *, sender_name="", sender_address="", subject="", body="",
                    recipients=(), rules: SuffixRules | None = None, **kw) -> "ParsedEmail":
        """Build a message directly from field values (tests, synthetic corpora)."""
        diags = []
        domain = _domain_or_blank(sender_address, rules, diags) if sender_address else ""
        rdomains = frozenset(
            d for d in (_domain_or_blank(r, rules, diags) for r in recipients) if d
        )
        segments = ((PLAIN, body),) if body else ()
        return cls(sender_name=sender_name, sender_address=sender_address,
                   sender_domain=domain, recipient_domains=rdomains, subject=subject,
                   body_segments=segments, diagnostics=tuple(diags), **kw)


def _domain_or_blank(address, rules, diags) -> str:
    try:
        return extract_registrable_domain(address, rules)
    except DomainError as exc:
        diags.append(f"domain: {exc}")
        return ""


def _raw_header(msg: Message, name: str, diags: list) -> list[str]:
    try:
        return [str(v) for v in msg.get_all(name) or []]
    except Exception as exc:
        diags.append(f"header {name}: {exc}")
        return []


def _decode_words(raw: str, name: str, diags: list) -> str:
    try:
        return str(make_header(decode_header(raw)))
    except Exception:
        diags.append(f"header {name}: undecodable encoded-word, kept raw")
        return raw


def _header_text(msg: Message, name: str, diags: list) -> str:
    values = [_decode_words(raw, name, diags) for raw in _raw_header(msg, name, diags)]
    return " ".join(" ".join(v.split()) for v in values)


def _addresses(msg: Message, name: str, diags: list) -> list[tuple[str, str]]:
    # split addresses before decoding encoded words, so a decoded display name
    # holding "<", "[" or "," cannot change the address structure
    out = []
    for raw in _raw_header(msg, name, diags):
        for disp, addr in getaddresses([raw]):
            out.append((" ".join(_decode_words(disp, name, diags).split()), addr.strip()))
    return out


def decode_payload(payload: bytes, charset: str | None, diags: list, where: str = "part") -> str:
    """Declared charset first, then UTF-8, then a lossy decode; never raises."""
    candidates = [c for c in (charset, "utf-8") if c]
    for cs in candidates:
        try:
            return payload.decode(cs)
        except LookupError:
            diags.append(f"{where}: unknown charset {cs!r}")
        except UnicodeDecodeError:
            continue
    diags.append(f"{where}: undecodable bytes replaced")
    for cs in candidates:
        try:
            return payload.decode(cs, errors="replace")
        except LookupError:
            continue
    return payload.decode("utf-8", errors="replace")


def _walk_leaves(msg: Message):
    """Yield leaf parts, keeping only the richest branch of multipart/alternative."""
    if msg.is_multipart():
        payload = msg.get_payload()
        if not isinstance(payload, list):
            return
        if msg.get_content_subtype() == "alternative":
            # clients render the last (richest) alternative; prefer HTML over plain
            ranked = sorted(
                payload,
                key=lambda p: (p.get_content_type() == "text/html" or p.is_multipart(),),
            )
            if ranked:
                yield from _walk_leaves(ranked[-1])
            return
        for part in payload:
            yield from _walk_leaves(part)
    else:
        yield msg


def _is_attachment(part: Message) -> bool:
    disp = (part.get("Content-Disposition") or "").split(";", 1)[0].strip().lower()
    return disp == "attachment" or (disp != "inline" and bool(part.get_filename()))


def parse_eml(raw, extractors: TextExtractorRegistry | None = None,
              rules: SuffixRules | None = None) -> ParsedEmail:
    """Parse raw message bytes; malformed input degrades to partial fields plus diagnostics."""
    if isinstance(raw, RawEmail):
        data, source_id = bytes(raw.data), raw.source_id
    else:
        data, source_id = bytes(raw), ""
    extractors = extractors if extractors is not None else TextExtractorRegistry.default()
    diags: list[str] = []
    if not data:
        diags.append("empty message")
    try:
        msg = email.message_from_bytes(data, policy=email.policy.compat32)
    except Exception as exc:
        return ParsedEmail(diagnostics=(f"unparseable message: {exc}",), source_id=source_id)
    for defect in getattr(msg, "defects", []) or []:
        diags.append(f"defect: {type(defect).__name__}")

    senders = _addresses(msg, "From", diags)
    name, address = senders[0] if senders else ("", "")
    if not address and _raw_header(msg, "From", diags):
        diags.append("From header has no address")
    name = name.strip().strip('"').strip()
    sender_domain = _domain_or_blank(address, rules, diags) if address else ""
    if not address:
        diags.append("missing sender address")

    recipients = []
    for header in _RECIPIENT_HEADERS:
        recipients.extend(addr for _, addr in _addresses(msg, header, diags) if addr)
    rdomains = frozenset(
        d for d in (_domain_or_blank(r, rules, diags) for r in recipients) if d
    )

    segments = []
    try:
        leaves = list(_walk_leaves(msg))
    except Exception as exc:
        diags.append(f"mime walk failed: {exc}")
        leaves = []
    for i, part in enumerate(leaves):
        where = f"part {i}"
        try:
            ctype = part.get_content_type()
            payload = part.get_payload(decode=True)
        except Exception as exc:
            diags.append(f"{where}: unreadable ({exc})")
            continue
        if payload is None:
            payload = b""
        if _is_attachment(part) or not ctype.startswith("text/"):
            if not payload:
                continue
            result = extractors.extract(payload, ctype)
            if result.diagnostic:
                diags.append(f"{where}: {result.diagnostic}")
            if result.text:
                segments.append((ATTACHMENT, result.text))
            continue
        text = decode_payload(payload, part.get_content_charset(), diags, where)
        if ctype == "text/html":
            rendered = html_to_text(text)
            if rendered.hidden_blocks:
                diags.append(f"{where}: dropped {rendered.hidden_blocks} hidden html element(s)")
            segments.append((HTML, rendered.text))
        else:
            segments.append((PLAIN, text.strip()))

    try:
        auth = tuple(" ".join(str(v).split()) for v in msg.get_all("Authentication-Results") or [])
    except Exception:
        auth = ()
    headers = []
    try:
        headers = [(k, str(v)) for k, v in msg.items()]
    except Exception:
        pass
    return ParsedEmail(
        sender_name=name,
        sender_address=address,
        sender_domain=sender_domain,
        recipient_domains=rdomains,
        subject=_header_text(msg, "Subject", diags),
        body_segments=tuple(segments),
        diagnostics=tuple(diags),
        auth_results=auth,
        message_id=_header_text(msg, "Message-ID", diags),
        source_id=source_id,
        headers=tuple(headers),
    )
