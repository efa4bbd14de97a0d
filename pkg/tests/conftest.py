from __future__ import annotations

import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))


@pytest.fixture(autouse=True)
def _default_max_dim(monkeypatch):
    """Runs must not pick up a dimension cap from the developer's shell."""
    monkeypatch.delenv("ENTROFLOW_MAX_DIM", raising=False)
