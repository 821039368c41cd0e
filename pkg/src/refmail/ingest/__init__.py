"""Email ingestion: parsing, domain extraction and tokenization."""

from .domains import DomainError, SuffixRules, default_rules, extract_registrable_domain
from .extractors import AdapterExtractor, TextExtractorRegistry
from .html import html_to_text
from .message import ATTACHMENT, HTML, PLAIN, ParsedEmail, RawEmail, parse_eml
from .readers import Oversize, ReadFailure, detect_format, iter_mbox_stream, iter_messages
from .tokens import BODY, FROM, SUBJECT, Token, TokenSequence, flatten_to_tokens, tokenize

__all__ = [
    "ATTACHMENT", "BODY", "FROM", "HTML", "PLAIN", "SUBJECT",
    "AdapterExtractor", "DomainError", "Oversize", "ParsedEmail", "RawEmail", "ReadFailure",
    "SuffixRules", "TextExtractorRegistry", "Token", "TokenSequence",
    "default_rules", "detect_format", "extract_registrable_domain", "flatten_to_tokens",
    "html_to_text", "iter_mbox_stream", "iter_messages", "parse_eml", "tokenize",
]
