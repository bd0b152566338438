from pathlib import Path

import pytest

from oomaint.frontend import parse_tree
from oomaint.metrics import compute_metrics

FIXTURES = Path(__file__).parent / "fixtures"
MINI = FIXTURES / "mini"


@pytest.fixture(scope="session")
def mini_snapshot():
    snapshot, diagnostics = parse_tree(MINI)
    assert diagnostics == []
    return snapshot


@pytest.fixture(scope="session")
def mini_matrix(mini_snapshot):
    return compute_metrics(mini_snapshot)


def write_tree(root: Path, files: dict) -> Path:
    for rel, text in files.items():
        path = root / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    return root
