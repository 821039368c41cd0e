"""Character n-gram embedding for identity phrases.

A phrase is case-folded and accent-stripped, broken into character 1-3 grams,
weighted ``1 + log(count)``, hashed into a large bucket space and projected to
``k`` dimensions with a seeded Gaussian projection.  Rows of the projection
are generated lazily per bucket from ``(seed, bucket)`` so the full
``buckets x k`` matrix never has to be materialized, and results are the
same on every machine.
"""

from __future__ import annotations

import math
import threading
import unicodedata
from collections import Counter

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils import murmurhash3_32

__all__ = [
    "DEFAULT_DIM",
    "DEFAULT_BUCKETS",
    "normalize_phrase",
    "char_ngrams",
    "CharNgramEmbedder",
    "embed",
    "cosine",
]

DEFAULT_DIM = 256
DEFAULT_BUCKETS = 2 ** 18
DEFAULT_SEED = 1729


def normalize_phrase(phrase: str) -> str:
    """Case-fold, strip combining accents and collapse whitespace."""
    decomposed = unicodedata.normalize("NFKD", phrase)
    stripped = "".join(c for c in decomposed if not unicodedata.combining(c))
    return " ".join(stripped.casefold().split())


def char_ngrams(text: str, ngram_range=(1, 3)) -> Counter:
    """Counts of character n-grams; orders above 1 see the phrase padded with spaces."""
    lo, hi = ngram_range
    out = Counter()
    if not text:
        return out
    for n in range(lo, hi + 1):
        s = text if n == 1 else f" {text} "
        for i in range(len(s) - n + 1):
            out[s[i:i + n]] += 1
    return out


class CharNgramEmbedder(BaseEstimator, TransformerMixin):
    """Hashed character n-gram embedding with a seeded random projection.

    Stateless apart from a cache of projection rows; ``fit`` only validates
    parameters.  ``transform`` maps an iterable of phrases to an
    ``(n, n_components)`` array of unit (or zero) rows.
    """

    def __init__(self, n_components=DEFAULT_DIM, n_buckets=DEFAULT_BUCKETS,
                 ngram_range=(1, 3), seed=DEFAULT_SEED):
        self.n_components = n_components
        self.n_buckets = n_buckets
        self.ngram_range = ngram_range
        self.seed = seed

    def fit(self, X=None, y=None):
        if int(self.n_components) < 1 or int(self.n_buckets) < 1:
            raise ValueError("n_components and n_buckets must be positive")
        lo, hi = self.ngram_range
        if not 1 <= lo <= hi:
            raise ValueError(f"bad ngram_range {self.ngram_range!r}")
        self._rows = {}
        self._lock = threading.Lock()
        self.n_features_out_ = int(self.n_components)
        return self

    def _ensure_fit(self):
        if not hasattr(self, "_rows"):
            self.fit()

    def features(self, phrase: str) -> dict[int, float]:
        """Sparse hashed feature vector ``{bucket: weight}`` of ``phrase``."""
        grams = char_ngrams(normalize_phrase(phrase), self.ngram_range)
        feats: dict[int, float] = {}
        for gram, count in grams.items():
            b = murmurhash3_32(f"{len(gram)}:{gram}", seed=self.seed, positive=True) % self.n_buckets
            feats[b] = feats.get(b, 0.0) + 1.0 + math.log(count)
        return feats

    def dense_features(self, phrase: str) -> np.ndarray:
        """``features`` as a dense length-``n_buckets`` vector (small bucket counts only)."""
        v = np.zeros(self.n_buckets)
        for b, w in self.features(phrase).items():
            v[b] = w
        return v

    def _row(self, bucket: int) -> np.ndarray:
        row = self._rows.get(bucket)
        if row is None:
            row = np.random.default_rng([self.seed, bucket]).standard_normal(self.n_components)
            with self._lock:
                self._rows.setdefault(bucket, row)
        return row

    def embed(self, phrase: str) -> np.ndarray:
        self._ensure_fit()
        feats = self.features(phrase)
        v = np.zeros(self.n_components)
        for b, w in feats.items():
            v += w * self._row(b)
        norm = np.linalg.norm(v)
        return v / norm if norm > 0 else v

    def transform(self, X):
        self._ensure_fit()
        if isinstance(X, str):
            raise TypeError("transform expects an iterable of phrases, not a single string")
        phrases = list(X)
        out = np.zeros((len(phrases), self.n_components))
        for i, p in enumerate(phrases):
            out[i] = self.embed(p)
        return out

    def __getstate__(self):
        state = self.__dict__.copy()
        state.pop("_lock", None)
        state.pop("_rows", None)
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        if "n_features_out_" in state:
            self._rows = {}
            self._lock = threading.Lock()


_default = None


def embed(phrase: str) -> np.ndarray:
    """Embed with the shared default :class:`CharNgramEmbedder`."""
    global _default
    if _default is None:
        _default = CharNgramEmbedder().fit()
    return _default.embed(phrase)


def cosine(a, b) -> float:
    """Cosine similarity; 0.0 when either vector is zero."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0 or nb == 0:
        return 0.0
    return float(np.clip(a @ b / (na * nb), -1.0, 1.0))
