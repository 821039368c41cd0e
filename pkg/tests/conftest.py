from pathlib import Path

import pytest

from refmail.detector import PhishingDetector
from refmail.kb import load_kb
from refmail.matching.match import IdentityMatcher

FIXTURES = Path(__file__).parent / "fixtures"
KB_PATH = FIXTURES / "kb_fixture.jsonl"
INVITATION = FIXTURES / "invitation" / "ieee_sp_invitation.eml"


@pytest.fixture(scope="session")
def kb():
    return load_kb(KB_PATH)


@pytest.fixture(scope="session")
def matcher(kb):
    return IdentityMatcher().fit(kb)


@pytest.fixture(scope="session")
def detector(kb):
    return PhishingDetector(kb).fit()


@pytest.fixture(scope="session")
def kb_path():
    return KB_PATH


@pytest.fixture(scope="session")
def invitation_bytes():
    return INVITATION.read_bytes()


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
