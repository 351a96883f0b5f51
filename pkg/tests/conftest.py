import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from iidiag.diagram_io import fixture_path, load_diagram


MINIMAL_DATA = {
    "variables": [{"name": "C", "outcomes": ["c1", "c2"]}],
    "nodes": [
        {"name": "C", "kind": "chance", "parents": [], "table": [[0.5, 0.3]]},
        {"name": "D", "kind": "decision", "parents": [], "alternatives": ["d1", "d2"]},
        {
            "name": "V",
            "kind": "value",
            "parents": ["D", "C"],
            "table": [[10, 10], [0, 0], [4, 4], [4, 4]],
        },
    ],
}


@pytest.fixture
def minimal_data():
    import copy

    return copy.deepcopy(MINIMAL_DATA)


@pytest.fixture
def minimal():
    from iidiag.model import build_diagram

    return build_diagram(MINIMAL_DATA)


@pytest.fixture
def survey():
    return load_diagram(fixture_path("survey"))


@pytest.fixture
def wildcatter():
    return load_diagram(fixture_path("wildcatter"))


def all_fixture_paths():
    return sorted(fixture_path("minimal").parent.glob("*.iid.json"))
