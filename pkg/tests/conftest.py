"""Shared fixtures: the three bundled models and their analyzers."""

import pytest

from contextuality import get_fixture
from contextuality.mcohom import GroupObstructionAnalyzer


@pytest.fixture(scope="session")
def mermin():
    return get_fixture("mermin")


@pytest.fixture(scope="session")
def ghz():
    return get_fixture("ghz")


@pytest.fixture(scope="session")
def hardy():
    return get_fixture("hardy")


@pytest.fixture(scope="session")
def mermin_group(mermin):
    return GroupObstructionAnalyzer(mermin.structured)


@pytest.fixture(scope="session")
def ghz_group(ghz):
    return GroupObstructionAnalyzer(ghz.structured)
