"""Labeled token/tag samples and their JSON-lines corpus format."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .tags import TAGS

__all__ = ["LabeledSample", "load_corpus", "dump_corpus", "as_sample"]


@dataclass(frozen=True)
class LabeledSample:
    tokens: tuple
    tags: tuple

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "tags", tuple(self.tags))
        if len(self.tokens) != len(self.tags):
            raise ValueError(f"{len(self.tokens)} tokens but {len(self.tags)} tags")
        bad = set(self.tags) - set(TAGS)
        if bad:
            raise ValueError(f"unknown tag(s) {sorted(bad)}")

    def to_json(self) -> str:
        return json.dumps({"tokens": list(self.tokens), "tags": list(self.tags)}, ensure_ascii=False)


def load_corpus(path) -> list[LabeledSample]:
    out = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            out.append(LabeledSample(obj["tokens"], obj["tags"]))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"{path}:{lineno}: bad labeled sample ({exc})") from None
    return out


def dump_corpus(samples, path) -> None:
    Path(path).write_text("".join(s.to_json() + "\n" for s in samples), encoding="utf-8")


def as_sample(s) -> LabeledSample:
    if isinstance(s, LabeledSample):
        return s
    if isinstance(s, dict):
        return LabeledSample(s["tokens"], s["tags"])
    tokens, tags = s
    return LabeledSample(tokens, tags)
