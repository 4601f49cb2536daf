import sys
from pathlib import Path

import pytest

# make the in-tree oracle importable as a plain module
sys.path.insert(0, str(Path(__file__).parent))

from recomp import parse
from recomp.corpus import ALL


@pytest.fixture(scope="session")
def corpus():
    """Name -> parsed spec for every bundled model at its default size."""
    return {name: parse(gen()) for name, gen in ALL.items()}


@pytest.fixture(scope="session")
def tp3(corpus):
    return corpus["twophase"]
