import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import excerpt_attributed, excerpt_tree  # noqa: E402


@pytest.fixture
def excerpt():
    return excerpt_tree()


@pytest.fixture
def excerpt_at():
    return excerpt_attributed()


@pytest.fixture
def corpus_dir():
    import atquery
    return Path(str(atquery.corpus_path("excerpt.at"))).parent
