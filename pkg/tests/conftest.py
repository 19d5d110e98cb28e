import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from dml_engine import parse_model, to_graph

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"

GOAL_NAME = "Ensure safe and effective operation of the system"


@pytest.fixture(scope="session")
def fixture_path():
    return FIXTURES / "aux_feedwater.json"


@pytest.fixture(scope="session")
def evidence_path():
    return FIXTURES / "evidence_cst2_failed.json"


@pytest.fixture(scope="session")
def fixture_text(fixture_path):
    return fixture_path.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def fixture_graph(fixture_text):
    return to_graph(parse_model(fixture_text))


@pytest.fixture(scope="session")
def cst2_evidence(evidence_path):
    return json.loads(evidence_path.read_text(encoding="utf-8"))
