from pathlib import Path

import pytest

from qci.filter import FilterConfig, filter_fixpoint
from qci.formats import read_identities
from qci.miner import mine
from qci.simplifier import Simplifier

DATA = Path(__file__).parent / "data"
PUBLISHED = DATA / "published_identities.txt"


@pytest.fixture(scope="session")
def raw3():
    return mine(3)


@pytest.fixture(scope="session")
def all_db(raw3):
    return filter_fixpoint(raw3, FilterConfig.all_filtering())


@pytest.fixture(scope="session")
def published():
    return read_identities(PUBLISHED)


@pytest.fixture(scope="session")
def simplifier(all_db):
    return Simplifier(all_db)
