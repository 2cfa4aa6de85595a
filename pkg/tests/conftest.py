import datetime
from pathlib import Path

import pytest

from profiledb.resources import default_lexdb, default_np_grammar, default_tagger_resources
from profiledb.text import TaggedDoc, parse_tagged, read_corpus_dir

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"


@pytest.fixture(scope="session")
def lexdb():
    return default_lexdb()


@pytest.fixture(scope="session")
def np_grammar():
    return default_np_grammar()


@pytest.fixture(scope="session")
def tagger():
    return default_tagger_resources()


@pytest.fixture(scope="session")
def corpus():
    return read_corpus_dir(FIXTURES / "corpus")


@pytest.fixture(scope="session")
def labels():
    rows = []
    for line in (FIXTURES / "labels.tsv").read_text(encoding="utf-8").splitlines():
        if line.strip():
            key, kind, surface, doc_id = line.split("\t")
            rows.append((key, kind, surface, doc_id))
    return rows


def doc(tagged: str, doc_id: str = "t1", source: str = "test",
        date: datetime.date = datetime.date(1995, 6, 25)) -> TaggedDoc:
    """One-line helper to build a document from tagged text."""
    return TaggedDoc(id=doc_id, source=source, date=date, tokens=parse_tagged(tagged))
