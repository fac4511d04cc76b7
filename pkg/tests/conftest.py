import os
from pathlib import Path

os.environ.setdefault("DATABASE_URL", "sqlite:///:memory:")

import pytest  # noqa: E402
from sqlalchemy import create_engine  # noqa: E402
from sqlalchemy.orm import sessionmaker  # noqa: E402

from svdyn.constructions import corpus  # noqa: E402
from svdyn.models import Base  # noqa: E402
from svdyn.plrel import serialize  # noqa: E402


@pytest.fixture()
def engine():
    eng = create_engine("sqlite:///:memory:")
    Base.metadata.create_all(eng)
    yield eng
    Base.metadata.drop_all(eng)
    eng.dispose()


@pytest.fixture()
def session(engine):
    factory = sessionmaker(bind=engine)
    sess = factory()
    yield sess
    sess.close()


@pytest.fixture
def tent():
    return corpus("tent")


@pytest.fixture
def square():
    return corpus("square")


@pytest.fixture
def ex2_10():
    return corpus("ex2_10")


@pytest.fixture
def ex2_11():
    return corpus("ex2_11")


@pytest.fixture
def ex2_15():
    return corpus("ex2_15")


@pytest.fixture
def write_plrel(tmp_path):
    """Write a relation (or raw text) to tmp_path/<name>.plrel and return the path."""

    def _write(name: str, rel_or_text) -> Path:
        path = tmp_path / f"{name}.plrel"
        text = rel_or_text if isinstance(rel_or_text, str) else serialize(rel_or_text)
        path.write_text(text)
        return path

    return _write
