"""Deterministic gazetteer + lexicon tagger used when no trained model is attached."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from refmail.ingest.tokens import TokenSequence, is_url, tokenize
from refmail.resources import load_action_lexicon, load_synonyms

from .tags import ACTION, IDENTITY, EntitySpan, spans_to_tags

__all__ = ["ActionLexicon", "BaselineTagger", "baseline_tag", "osa_distance", "load_gazetteer"]

_TERMINATORS = frozenset(".!?;")


def _fold(text: str) -> str:
    return text.casefold()


def osa_distance(a: str, b: str) -> int:
    """Optimal-string-alignment distance (edits plus adjacent transpositions)."""
    n, m = len(a), len(b)
    prev2 = None
    prev = list(range(m + 1))
    for i in range(1, n + 1):
        cur = [i] + [0] * m
        for j in range(1, m + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost)
            if i > 1 and j > 1 and a[i - 1] == b[j - 2] and a[i - 2] == b[j - 1]:
                cur[j] = min(cur[j], prev2[j - 2] + 1)
        prev2, prev = prev, cur
    return prev[m]


def load_gazetteer(path) -> list[str]:
    """One alias per line, UTF-8; blank lines and ``#`` comments skipped."""
    with open(path, encoding="utf-8") as fh:
        return [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]


@dataclass(frozen=True)
class ActionLexicon:
    """Imperative verbs (as folded token tuples) and the objects that make them actionable."""

    verbs: frozenset
    objects: frozenset
    window: int = 4

    @classmethod
    def default(cls) -> "ActionLexicon":
        raw = load_action_lexicon()
        words = set(raw["extra_verbs"])
        for verb, syns in load_synonyms().items():
            words.add(verb)
            words.update(syns)
        verbs = frozenset(tuple(_fold(t.text) for t in tokenize(w)) for w in words)
        return cls(verbs, frozenset(_fold(o) for o in raw["objects"]), int(raw["window"]))

    @classmethod
    def from_words(cls, verbs, objects, window=4) -> "ActionLexicon":
        return cls(
            frozenset(tuple(_fold(t.text) for t in tokenize(v)) for v in verbs),
            frozenset(_fold(o) for o in objects),
            window,
        )


class BaselineTagger(BaseEstimator):
    """Longest-match gazetteer for identities, verb-object patterns for actions.

    Parameters
    ----------
    gazetteer : list of str
        Identity aliases.
    lexicon : ActionLexicon, optional
        Defaults to the bundled lexicon.
    typo_tolerant : bool
        Also accept windows one interior edit away from an alias, keeping the
        first and last characters and the alias's leading capitalization.
    min_fuzzy_len : int
        Aliases shorter than this only match exactly.
    """

    def __init__(self, gazetteer=(), lexicon=None, typo_tolerant=True, min_fuzzy_len=5):
        self.gazetteer = gazetteer
        self.lexicon = lexicon
        self.typo_tolerant = typo_tolerant
        self.min_fuzzy_len = min_fuzzy_len

    def fit(self, X=None, y=None):
        self.lexicon_ = self.lexicon if self.lexicon is not None else ActionLexicon.default()
        self.alias_index_ = {}
        fuzzy = defaultdict(set)
        self.fuzzy_shapes_ = set()
        max_tokens = 1
        for alias in self.gazetteer:
            toks = tokenize(alias)
            if not toks:
                continue
            key = tuple(_fold(t.text) for t in toks)
            self.alias_index_.setdefault(key, alias)
            max_tokens = max(max_tokens, len(key))
            joined = " ".join(key)
            if len(joined) >= self.min_fuzzy_len:
                for variant in _deletions(joined) | {joined}:
                    fuzzy[variant].add(joined)
                self.fuzzy_shapes_.add((joined[0], joined[-1]))
        self.fuzzy_index_ = dict(fuzzy)
        self.alias_capital_ = {
            " ".join(k): v[:1].isupper() for k, v in self.alias_index_.items()
        }
        self.joined_index_ = {" ".join(k): v for k, v in self.alias_index_.items()}
        self.max_alias_tokens_ = max_tokens
        self.verb_lengths_ = sorted({len(v) for v in self.lexicon_.verbs}, reverse=True)
        return self

    # identity -----------------------------------------------------------------

    def _fuzzy_lookup(self, joined: str, first_char: str) -> str | None:
        if len(joined) < self.min_fuzzy_len - 1 or (joined[0], joined[-1]) not in self.fuzzy_shapes_:
            return None
        candidates = set()
        for variant in _deletions(joined) | {joined}:
            candidates |= self.fuzzy_index_.get(variant, set())
        best = None
        for cand in sorted(candidates):
            if cand[0] != joined[0] or cand[-1] != joined[-1]:
                continue
            if self.alias_capital_.get(cand) and not first_char.isupper():
                continue
            if osa_distance(joined, cand) <= 1:
                best = cand
                break
        return best

    def _identity_spans(self, seq) -> list[EntitySpan]:
        toks = seq.tokens
        n = len(toks)
        spans = []
        i = 0
        while i < n:
            if toks[i].is_sentinel:
                i += 1
                continue
            found = None
            keys = []
            key = ()
            for j in range(i, min(n, i + self.max_alias_tokens_)):
                if toks[j].is_sentinel or toks[j].field != toks[i].field:
                    break
                key = key + (_fold(toks[j].text),)
                keys.append((j, key))
            for j, key in reversed(keys):
                if key in self.alias_index_:
                    found = j
                    break
            if found is None and self.typo_tolerant:
                for j, key in reversed(keys):
                    if self._fuzzy_lookup(" ".join(key), toks[i].text[:1]):
                        found = j
                        break
            if found is None:
                i += 1
                continue
            spans.append(EntitySpan(i, found, IDENTITY, seq.surface(i, found)))
            i = found + 1
        return spans

    # action -------------------------------------------------------------------

    def _action_spans(self, seq) -> list[EntitySpan]:
        lex = self.lexicon_
        toks = seq.tokens
        folded = [_fold(t.text) for t in toks]
        n = len(toks)
        spans = []
        i = 0
        while i < n:
            verb_len = 0
            for k in self.verb_lengths_:
                if i + k <= n and tuple(folded[i:i + k]) in lex.verbs:
                    verb_len = k
                    break
            if not verb_len or toks[i].is_sentinel:
                i += 1
                continue
            end = None
            for j in range(i + verb_len, min(n, i + verb_len + lex.window)):
                tok = toks[j]
                if tok.is_sentinel or tok.field != toks[i].field or tok.text in _TERMINATORS:
                    break
                if folded[j] in lex.objects or is_url(tok.text):
                    end = j
                    while end + 1 < n and folded[end + 1] in lex.objects \
                            and toks[end + 1].field == tok.field:
                        end += 1
                    break
            if end is None:
                i += 1
                continue
            spans.append(EntitySpan(i, end, ACTION, seq.surface(i, end)))
            i = end + 1
        return spans

    # public -------------------------------------------------------------------

    def find_spans(self, tokens) -> list[EntitySpan]:
        """Identity and Action spans; spans of different classes may overlap."""
        check_is_fitted(self, "alias_index_")
        seq = _as_sequence(tokens)
        return sorted(self._identity_spans(seq) + self._action_spans(seq))

    def tag(self, tokens) -> list[str]:
        seq = _as_sequence(tokens)
        return spans_to_tags(self.find_spans(seq), len(seq))

    def predict(self, X):
        return [self.tag(x) for x in X]


def _as_sequence(tokens) -> TokenSequence:
    if isinstance(tokens, TokenSequence):
        return tokens
    return TokenSequence.from_texts(list(tokens))


def _deletions(s: str) -> set[str]:
    return {s[:i] + s[i + 1:] for i in range(len(s))}


def baseline_tag(tokens, gazetteer, action_lexicon=None) -> list[str]:
    """One-shot form of :class:`BaselineTagger`."""
    return BaselineTagger(gazetteer, action_lexicon).fit().tag(tokens)
