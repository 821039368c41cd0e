"""Access to data files bundled with the package."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

__all__ = ["data_path", "load_synonyms", "load_action_lexicon", "load_json"]


def data_path(name: str):
    return resources.files("refmail.data") / name


def load_json(name: str):
    with data_path(name).open(encoding="utf-8") as fh:
        return json.load(fh)


@lru_cache(maxsize=None)
def _synonyms():
    return load_json("synonyms.json")


def load_synonyms(path=None) -> dict[str, list[str]]:
    """Verb -> synonyms table; the bundled one unless ``path`` is given."""
    if path is None:
        return {k: list(v) for k, v in _synonyms().items()}
    with open(path, encoding="utf-8") as fh:
        table = json.load(fh)
    if not isinstance(table, dict) or not all(isinstance(v, list) for v in table.values()):
        raise ValueError(f"{path}: synonym table must map verbs to lists")
    return {str(k).casefold(): [str(s) for s in v] for k, v in table.items()}


@lru_cache(maxsize=None)
def load_action_lexicon():
    return load_json("action_lexicon.json")
