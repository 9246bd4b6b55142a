"""Shared fixtures: the OM3 worked example loaded once per session."""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hdcube import Warehouse, load_warehouse

DATA = Path(__file__).parent / "data"
OM3_CONF = DATA / "om3" / "om3.conf"


@pytest.fixture(scope="session")
def om3_conf() -> Path:
    return OM3_CONF


@pytest.fixture(scope="session")
def om3(om3_conf) -> Warehouse:
    """The three-dimension game warehouse; immutable, safe to share."""
    return load_warehouse(om3_conf)


@pytest.fixture(scope="session")
def player(om3):
    return om3.ctx.hierarchies[0]


@pytest.fixture(scope="session")
def turn(om3):
    return om3.ctx.hierarchies[1]


@pytest.fixture(scope="session")
def series(om3):
    return om3.ctx.hierarchies[2]
