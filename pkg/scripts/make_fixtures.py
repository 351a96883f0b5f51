"""Regenerate the shipped fixture files in canonical form.

The wildcatter tables are this repository's own choice of classic
oil-wildcatter numbers (revenue by amount of oil, drilling cost, test
prices); they are not taken from any published exercise, and every frozen
regression value in the tests is computed from these tables.
"""

from __future__ import annotations

import sys
from pathlib import Path

from iidiag.diagram_io import save_diagram, serialize_diagram
from iidiag.model import build_diagram

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "iidiag" / "fixtures"

MINIMAL = {
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

SURVEY = {
    "variables": [
        {"name": "STATE", "outcomes": ["good", "bad"]},
        {"name": "SIGNAL", "outcomes": ["up", "down"]},
    ],
    "nodes": [
        {"name": "STATE", "kind": "chance", "parents": [], "table": [[0.5, 0.3]]},
        {
            "name": "SIGNAL",
            "kind": "chance",
            "parents": ["STATE"],
            "table": [[0.6, 0.2], [0.1, 0.7]],
        },
        {
            "name": "ACT",
            "kind": "decision",
            "parents": ["SIGNAL"],
            "alternatives": ["go", "stay"],
        },
        {
            "name": "V",
            "kind": "value",
            "parents": ["ACT", "STATE"],
            "table": [[8, 10], [0, 1], [3, 3], [3, 3]],
        },
    ],
}


def wildcatter() -> dict:
    oil = ["dry", "wet", "soak"]
    seis = ["ns", "os", "cs"]
    results = ["ns", "os", "cs"]
    tests = ["none", "cheap", "perfect"]
    revenue = {"dry": 0.0, "wet": 120.0, "soak": 270.0}
    drill_cost = {"low": 45.0, "high": 80.0}
    test_cost = {"none": 0.0, "cheap": 3.0, "perfect": 6.0}

    seis_rows = [[0.6, 0.3, 0.1], [0.3, 0.4, 0.3], [0.1, 0.4, 0.5]]

    # RESULT given (TEST, SEISMIC), SEISMIC fastest
    result_rows = []
    for t in tests:
        for s_idx in range(3):
            if t == "none":
                result_rows.append([0.4, 0.3, 0.3])
            elif t == "cheap":
                row = [0.1, 0.1, 0.1]
                row[s_idx] = 0.8
                result_rows.append(row)
            else:
                row = [0.0, 0.0, 0.0]
                row[s_idx] = 1.0
                result_rows.append(row)

    # PROFIT given (TEST, DRILL, OIL, COST), COST fastest
    value_rows = []
    for t in tests:
        for drill in ["yes", "no"]:
            for o in oil:
                for c in ["low", "high"]:
                    v = -test_cost[t]
                    if drill == "yes":
                        v += revenue[o] - drill_cost[c]
                    value_rows.append([v, v])

    return {
        "variables": [
            {"name": "OIL", "outcomes": oil},
            {"name": "SEISMIC", "outcomes": seis},
            {"name": "RESULT", "outcomes": results},
            {"name": "COST", "outcomes": ["low", "high"]},
        ],
        "nodes": [
            {"name": "OIL", "kind": "chance", "parents": [], "table": [[0.5, 0.3, 0.2]]},
            {"name": "SEISMIC", "kind": "chance", "parents": ["OIL"], "table": seis_rows},
            {"name": "TEST", "kind": "decision", "parents": [], "alternatives": tests},
            {
                "name": "RESULT",
                "kind": "chance",
                "parents": ["TEST", "SEISMIC"],
                "table": result_rows,
            },
            {
                "name": "DRILL",
                "kind": "decision",
                "parents": ["TEST", "RESULT"],
                "alternatives": ["yes", "no"],
            },
            {"name": "COST", "kind": "chance", "parents": [], "table": [[0.6, 0.4]]},
            {
                "name": "PROFIT",
                "kind": "value",
                "parents": ["TEST", "DRILL", "OIL", "COST"],
                "table": value_rows,
            },
        ],
    }


def main() -> int:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    for name, data in [
        ("minimal", MINIMAL),
        ("survey", SURVEY),
        ("wildcatter", wildcatter()),
    ]:
        diagram = build_diagram(data)
        path = FIXTURES / f"{name}.iid.json"
        save_diagram(diagram, path)
        print(f"wrote {path} ({len(serialize_diagram(diagram))} bytes)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
