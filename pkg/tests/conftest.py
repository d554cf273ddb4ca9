from __future__ import annotations

from pathlib import Path

import pytest

from cartopipe.model import load_model
from cartopipe.schema import core_schema, load_schema

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
GOLDEN = FIXTURES / "golden"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN


@pytest.fixture(scope="session")
def tools_schema():
    return load_schema((FIXTURES / "tools" / "tools.cartoschema.json").read_text())


@pytest.fixture(scope="session")
def core():
    return core_schema()


@pytest.fixture(scope="session")
def minimal_model():
    return load_model(FIXTURES / "tools" / "minimal.carto.json")


@pytest.fixture(scope="session")
def tools_central():
    return load_model(GOLDEN / "tools" / "central.carto.json")


@pytest.fixture(scope="session")
def collab_central():
    return load_model(GOLDEN / "collab" / "central.carto.json")
