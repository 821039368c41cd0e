"""Reference-based phishing email detection.

An email is flagged when the identity it claims does not match the domain it
was sent from and it asks the recipient to do something.
"""

from refmail.detector import PhishingDetector
from refmail.kb import KnowledgeBase, load_kb
from refmail.verdict import BENIGN, NO_ACTION, NO_IDENTITY, PHISHING, Verdict, decide

__version__ = "0.1.0"

__all__ = [
    "BENIGN", "NO_ACTION", "NO_IDENTITY", "PHISHING",
    "KnowledgeBase", "PhishingDetector", "Verdict", "decide", "load_kb",
]
