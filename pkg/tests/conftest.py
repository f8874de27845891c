from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from srlspace.catalog import load_default_catalog


@pytest.fixture(scope="session")
def default_catalog():
    return load_default_catalog()


@pytest.fixture()
def fresh_catalog():
    # tests that mutate paradata get their own copy
    return load_default_catalog()
