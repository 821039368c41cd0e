"""Identity matching: character embeddings, KB retrieval, training kernel, calibration."""

from .calibrate import Calibration, calibrate_scores, calibrate_threshold, fbeta, threshold_sweep
from .embed import CharNgramEmbedder, char_ngrams, cosine, embed, normalize_phrase
from .match import PAPER_THRESHOLD, AcceptedIdentity, AdapterEmbedder, IdentityMatcher, MatchResult, match_identity
from .retrieval import LinearProjection, RetrievalBatch, retrieval_kl_loss, retrieval_kl_terms

__all__ = [
    "AcceptedIdentity", "AdapterEmbedder", "Calibration", "CharNgramEmbedder", "IdentityMatcher",
    "LinearProjection", "MatchResult", "PAPER_THRESHOLD", "RetrievalBatch",
    "calibrate_scores", "calibrate_threshold", "char_ngrams", "cosine", "embed", "fbeta",
    "match_identity", "normalize_phrase", "retrieval_kl_loss", "retrieval_kl_terms", "threshold_sweep",
]
