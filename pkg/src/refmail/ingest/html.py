"""Visible-text extraction from HTML mail bodies."""

from __future__ import annotations

import re
from html.parser import HTMLParser

__all__ = ["HtmlText", "html_to_text"]

_SKIP_TAGS = {"script", "style", "head", "title", "noscript", "template", "svg", "object"}
_VOID_TAGS = {
    "area", "base", "br", "col", "embed", "hr", "img", "input", "link",
    "meta", "param", "source", "track", "wbr",
}
_BLOCK_TAGS = {
    "address", "article", "aside", "blockquote", "br", "center", "dd", "div", "dl",
    "dt", "fieldset", "figcaption", "figure", "footer", "form", "h1", "h2", "h3",
    "h4", "h5", "h6", "header", "hr", "li", "main", "nav", "ol", "p", "pre",
    "section", "table", "tbody", "td", "tfoot", "th", "thead", "tr", "ul",
}
_HIDDEN_STYLE = re.compile(
    r"display\s*:\s*none|visibility\s*:\s*hidden|"
    r"font-size\s*:\s*0(?:\.0+)?\s*(?:px|pt|em|rem|%)?\s*(?:;|$|!)|"
    r"max-height\s*:\s*0(?:px)?\s*(?:;|$|!)|opacity\s*:\s*0(?:\.0+)?\s*(?:;|$|!)",
    re.I,
)


class HtmlText:
    """Result of an HTML pass: visible text plus a count of dropped hidden blocks."""

    __slots__ = ("text", "hidden_blocks")

    def __init__(self, text: str, hidden_blocks: int):
        self.text = text
        self.hidden_blocks = hidden_blocks

    def __repr__(self):
        return f"HtmlText(text={self.text!r}, hidden_blocks={self.hidden_blocks})"


def _is_hidden(attrs) -> bool:
    for name, value in attrs:
        if name == "hidden":
            return True
        if name == "style" and value and _HIDDEN_STYLE.search(value):
            return True
    return False


class _VisibleTextParser(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.chunks: list[str] = []
        # (tag, suppresses_text)
        self.stack: list[tuple[str, bool]] = []
        self.suppressed = 0
        self.hidden_blocks = 0

    def handle_starttag(self, tag, attrs):
        if tag in _BLOCK_TAGS:
            self.chunks.append("\n")
        if tag in _VOID_TAGS:
            return
        hidden = tag in _SKIP_TAGS or _is_hidden(attrs)
        if hidden and tag not in _SKIP_TAGS and not self.suppressed:
            self.hidden_blocks += 1
        self.stack.append((tag, hidden))
        if hidden:
            self.suppressed += 1

    def handle_startendtag(self, tag, attrs):
        if tag in _BLOCK_TAGS:
            self.chunks.append("\n")

    def handle_endtag(self, tag):
        if tag in _BLOCK_TAGS:
            self.chunks.append("\n")
        if not any(t == tag for t, _ in self.stack):
            return
        while self.stack:
            t, hidden = self.stack.pop()
            if hidden:
                self.suppressed -= 1
            if t == tag:
                break

    def handle_data(self, data):
        if not self.suppressed:
            self.chunks.append(data)


def _normalize(raw: str) -> str:
    lines = []
    for line in raw.split("\n"):
        line = " ".join(line.split())
        if line:
            lines.append(line)
    return "\n".join(lines)


def html_to_text(html: str) -> HtmlText:
    """Render ``html`` to the text a mail client would show.

    Script/style content and elements hidden by inline CSS (``display:none``,
    ``visibility:hidden``, zero font size or opacity) are dropped.
    """
    parser = _VisibleTextParser()
    try:
        parser.feed(html)
        parser.close()
    except Exception:  # html.parser is lenient; this guards pathological input
        pass
    return HtmlText(_normalize("".join(parser.chunks)), parser.hidden_blocks)
