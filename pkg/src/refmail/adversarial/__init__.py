"""Text mutators and robustness metrics."""

from .metrics import (
    FEASIBILITY,
    RecognitionRates,
    alias_char_mutator,
    char_attack,
    concat_attack,
    matching_rate,
    no_attack,
    recognition_rate,
    robustness_report,
    synonym_attack,
)
from .mutators import CHAR_KINDS, Mutation, concat_sentence, eligible_positions, head_verb, mutate_chars, synonym_swap

__all__ = [
    "CHAR_KINDS", "FEASIBILITY", "Mutation", "RecognitionRates", "alias_char_mutator", "char_attack",
    "concat_attack", "concat_sentence", "eligible_positions", "head_verb", "matching_rate",
    "mutate_chars", "no_attack", "recognition_rate", "robustness_report", "synonym_attack",
    "synonym_swap",
]
