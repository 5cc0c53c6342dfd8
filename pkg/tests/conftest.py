"""Shared fixtures for the test suite."""

from __future__ import annotations

import pytest

from visqual import load_catalog
from visqual.fixtures import packaged_catalog_bytes


@pytest.fixture(scope="session")
def fixture_catalog():
    return load_catalog(packaged_catalog_bytes())
