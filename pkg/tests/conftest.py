from __future__ import annotations

import sys
from pathlib import Path

import pytest

# the engine raises this lazily on first use; doing it up front keeps
# hypothesis from warning about a mid-test limit change
if sys.getrecursionlimit() < 30000:
    sys.setrecursionlimit(30000)

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixture_text():
    def load(name: str) -> str:
        return (FIXTURES / name).read_text(encoding="utf-8")
    return load


@pytest.fixture
def fixture_path():
    def locate(name: str) -> str:
        return str(FIXTURES / name)
    return locate
