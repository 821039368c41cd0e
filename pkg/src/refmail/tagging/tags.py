"""Class-qualified BE/IE/O tags and span decoding."""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "IDENTITY",
    "ACTION",
    "OUTSIDE",
    "TAGS",
    "EntitySpan",
    "begin",
    "inside",
    "decode_spans",
    "spans_to_tags",
    "check_tags",
]

IDENTITY = "Identity"
ACTION = "Action"
OUTSIDE = "O"

_SUFFIX = {IDENTITY: "ID", ACTION: "ACT"}
_CLASS = {v: k for k, v in _SUFFIX.items()}
TAGS = ("BE-ID", "IE-ID", "BE-ACT", "IE-ACT", OUTSIDE)


def begin(cls: str) -> str:
    return f"BE-{_SUFFIX[cls]}"


def inside(cls: str) -> str:
    return f"IE-{_SUFFIX[cls]}"


def _parse(tag: str):
    if tag == OUTSIDE:
        return None, None
    head, _, suffix = tag.partition("-")
    if head not in ("BE", "IE") or suffix not in _CLASS:
        raise ValueError(f"unknown tag {tag!r}")
    return head, _CLASS[suffix]


def check_tags(tags) -> None:
    for t in tags:
        if t not in TAGS:
            raise ValueError(f"unknown tag {t!r}; expected one of {TAGS}")


@dataclass(frozen=True, order=True)
class EntitySpan:
    start: int
    end: int  # inclusive
    cls: str
    text: str = ""

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError("span start after end")

    def overlaps(self, other: "EntitySpan") -> bool:
        return self.start <= other.end and other.start <= self.end


def decode_spans(tags, tokens=None) -> list[EntitySpan]:
    """Maximal runs opened by BE (or an orphan IE) and extended by same-class IE.

    An IE whose class differs from the open run, or that follows O, starts a
    new span of its own class.  ``tokens`` (a TokenSequence or list of str)
    supplies span text.
    """
    spans = []
    cur_cls, cur_start = None, None
    n = len(tags)
    if tokens is not None and len(tokens) != n:
        raise ValueError(f"{n} tags for {len(tokens)} tokens")

    def close(end):
        spans.append(_make(cur_start, end, cur_cls, tokens))

    for i, tag in enumerate(tags):
        head, cls = _parse(tag)
        if head == "IE" and cls == cur_cls:
            continue
        if cur_cls is not None:
            close(i - 1)
        if head is None:
            cur_cls, cur_start = None, None
        else:
            cur_cls, cur_start = cls, i
    if cur_cls is not None:
        close(n - 1)
    return spans


def _make(start, end, cls, tokens) -> EntitySpan:
    if tokens is None:
        text = ""
    elif hasattr(tokens, "surface"):
        text = tokens.surface(start, end)
    else:
        text = " ".join(tokens[start:end + 1])
    return EntitySpan(start, end, cls, text)


def spans_to_tags(spans, n: int, priority=(IDENTITY, ACTION)) -> list[str]:
    """Project spans onto one tag per token.

    Where spans of different classes overlap, the class earlier in
    ``priority`` keeps the tokens and the other span is cut at the overlap.
    """
    tags = [OUTSIDE] * n
    owner = [None] * n
    for cls in priority:
        for span in sorted(s for s in spans if s.cls == cls):
            first = True
            for i in range(span.start, span.end + 1):
                if owner[i] is not None:
                    break
                tags[i] = begin(cls) if first else inside(cls)
                owner[i] = cls
                first = False
    return tags
