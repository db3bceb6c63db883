# tests/conftest.py
import pytest
from fastapi.testclient import TestClient

from app.main import app
from app.services.corpus import CORPUS_DIR
from app.services.parser import parse


@pytest.fixture
def client():
    with TestClient(app) as c:
        yield c


@pytest.fixture
def main_of():
    """Parse source text and return its main process with the definitions."""

    def _main_of(text):
        spt = parse(text)
        return spt.main, spt.defs

    return _main_of


@pytest.fixture
def spt_file(tmp_path):
    """Write source text to a temporary .spt file and return its path."""

    def _write(text, name="input.spt"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


@pytest.fixture
def corpus_path():
    """Path of a packaged corpus fixture by name."""

    def _path(name):
        return CORPUS_DIR / f"{name}.spt"

    return _path
