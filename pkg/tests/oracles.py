"""Reference implementations used only by the tests.

Each one is written from the definition, without importing the code it checks.
"""

from __future__ import annotations

from bs4 import BeautifulSoup

# tag alphabet: (kind, cls)
TAG_PARTS = {
    "BE-ID": ("B", "Identity"),
    "IE-ID": ("I", "Identity"),
    "BE-ACT": ("B", "Action"),
    "IE-ACT": ("I", "Action"),
    "O": (None, None),
}


def enumerate_spans(tags):
    """All (start, end, cls) ranges that form a span under the definition.

    A range [s, e] is a span of class c when every tag in it carries class c,
    tags s+1..e are inside tags, tag s is a begin tag or an inside tag that
    cannot continue whatever precedes it, and tag e+1 does not continue it.
    Checked by testing every contiguous range.
    """
    n = len(tags)
    parts = [TAG_PARTS[t] for t in tags]
    out = []
    for s in range(n):
        kind, cls = parts[s]
        if cls is None:
            continue
        opens = kind == "B" or s == 0 or parts[s - 1][1] != cls
        if not opens:
            continue
        for e in range(s, n):
            if e > s and parts[e] != ("I", cls):
                break
            closes = e == n - 1 or parts[e + 1] != ("I", cls)
            if closes:
                out.append((s, e, cls))
    return sorted(out)


def verdict_oracle(claims, sender_domain, recipient_domains, n_instructions, require_action=True):
    """Decision from first principles.

    ``claims`` is a list of ``(is_internal, domains)`` for identities that
    cleared the threshold.
    """
    if len(claims) == 0:
        return "NoIdentity"
    for is_internal, domains in claims:
        legit = set(recipient_domains) if is_internal else set(domains)
        if sender_domain != "" and sender_domain in legit:
            return "Benign"
    if n_instructions > 0:
        return "Phishing"
    return "NoAction" if require_action else "Phishing"


def focal_value_mp(probs_gold, gamma, dps=50):
    """Mean focal loss of gold-class probabilities at ``dps`` decimal digits."""
    import mpmath

    mpmath.mp.dps = dps
    total = mpmath.mpf(0)
    for p in probs_gold:
        p = mpmath.mpf(p)
        total += (1 - p) ** gamma * mpmath.log(p)
    return -total / len(probs_gold)


def html_visible_text(html):
    """Visible text as BeautifulSoup sees it, whitespace collapsed."""
    soup = BeautifulSoup(html, "html.parser")
    for tag in soup(["script", "style", "head", "title", "noscript", "template"]):
        tag.decompose()
    for tag in soup.find_all(style=True):
        style = tag["style"].replace(" ", "").lower()
        if "display:none" in style or "visibility:hidden" in style:
            tag.decompose()
    return " ".join(soup.get_text(" ").split())


def fbeta(p, r, beta=0.5):
    b2 = beta * beta
    return (1 + b2) * p * r / (b2 * p + r)


def central_difference(f, x, h=1e-6):
    """Central finite-difference gradient of scalar ``f`` at array ``x``."""
    import numpy as np

    x = np.array(x, dtype=float)
    g = np.zeros_like(x)
    it = np.nditer(x, flags=["multi_index"])
    for _ in it:
        i = it.multi_index
        old = x[i]
        x[i] = old + h
        fp = f(x)
        x[i] = old - h
        fm = f(x)
        x[i] = old
        g[i] = (fp - fm) / (2 * h)
    return g


def rel_err(a, b):
    import numpy as np

    a, b = np.asarray(a, float), np.asarray(b, float)
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-30))


__all__ = [
    "enumerate_spans", "verdict_oracle", "focal_value_mp", "html_visible_text",
    "fbeta", "central_difference", "rel_err",
]
