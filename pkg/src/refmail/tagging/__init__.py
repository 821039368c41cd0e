"""Token tagging: BE/IE/O spans, baseline and model taggers, training kernels."""

from .augment import augment_identity_mutations
from .corpus import LabeledSample, dump_corpus, load_corpus
from .baseline import ActionLexicon, BaselineTagger, baseline_tag, load_gazetteer, osa_distance
from .focal import DEFAULT_GAMMA, PROB_EPS, clamp_probs, focal_loss, focal_loss_grad
from .model import ModelTagger, model_tag
from .tags import ACTION, IDENTITY, OUTSIDE, TAGS, EntitySpan, decode_spans, spans_to_tags

__all__ = [
    "ACTION", "DEFAULT_GAMMA", "IDENTITY", "OUTSIDE", "PROB_EPS", "TAGS",
    "ActionLexicon", "BaselineTagger", "EntitySpan", "LabeledSample", "ModelTagger",
    "augment_identity_mutations", "baseline_tag", "clamp_probs", "decode_spans", "dump_corpus",
    "focal_loss", "focal_loss_grad", "load_corpus", "load_gazetteer", "model_tag", "osa_distance",
    "spans_to_tags",
]
