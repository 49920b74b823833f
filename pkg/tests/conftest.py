import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import corpus


@pytest.fixture(scope="session")
def base_corpus():
    return corpus.base_corpus()


@pytest.fixture(scope="session")
def xor():
    return corpus.xor_uniform()


@pytest.fixture(scope="session")
def fstar():
    return corpus.completely_pure_fixture()


@pytest.fixture(scope="session")
def constant():
    return corpus.constant_uniform()
