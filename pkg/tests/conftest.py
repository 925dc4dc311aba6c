import json
from pathlib import Path

import pytest

from healthgenie.bootstrap import build_context
from healthgenie.config import FIXTURE_DIR

TESTS_DIR = Path(__file__).parent
DATA_DIR = TESTS_DIR / "data"


@pytest.fixture(scope="session")
def ctx():
    """Shared read-only engine context over the fixture corpus.

    Tests that mutate the store must use ``fresh_ctx`` instead.
    """
    return build_context(clock=lambda: 0.0)


@pytest.fixture()
def fresh_ctx():
    return build_context(clock=lambda: 0.0)


@pytest.fixture()
def session(fresh_ctx):
    return fresh_ctx.new_session(deterministic_token=True)


@pytest.fixture(scope="session")
def fixture_rows():
    """Raw fixture CSVs, independently parsed (oracle side)."""
    import csv

    with open(FIXTURE_DIR / "triples.csv", newline="", encoding="utf-8") as fh:
        triples = [tuple(row[:4]) for row in list(csv.reader(fh))[1:] if row]
    with open(FIXTURE_DIR / "attrs.csv", newline="", encoding="utf-8") as fh:
        attrs = [tuple(row[:6]) for row in list(csv.reader(fh))[1:] if row]
    return {"triples": triples, "attrs": attrs}


def load_json(name: str):
    return json.loads((DATA_DIR / name).read_text(encoding="utf-8"))
