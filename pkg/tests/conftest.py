"""Shared fixtures: the tiny catalog/dump pair and the aux worker command."""

from __future__ import annotations

import shlex
import sys
from pathlib import Path

import pytest

from silverner.catalog import load_catalog

DATA = Path(__file__).parent / "data"
AUX_STUB = Path(__file__).parent / "aux_stub.py"


def aux_command(*flags: str) -> str:
    """Command line that runs the dictionary-backed protocol double."""
    parts = [sys.executable, str(AUX_STUB), *flags]
    return " ".join(shlex.quote(p) for p in parts)


@pytest.fixture(scope="session")
def fixture_catalog():
    return load_catalog(DATA / "catalog.jsonl")


@pytest.fixture()
def catalog_path() -> Path:
    return DATA / "catalog.jsonl"


@pytest.fixture()
def dump_path() -> Path:
    return DATA / "dump.xml"


@pytest.fixture()
def golden_corpus_path() -> Path:
    return DATA / "golden_corpus.tsv"


@pytest.fixture()
def golden_origin_corpus_path() -> Path:
    return DATA / "golden_corpus_origin.tsv"
