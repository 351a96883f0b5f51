"""Independent brute-force oracles the implementation is checked against.

Nothing here shares bound arithmetic with the package: envelopes come from
enumerating row-polytope vertices crossed with value-box corners (plus a
dense grid refinement for posteriors over binary priors), and table lookups
go through itertools.product rather than the package's mixed-radix indexing,
which independently pins down the row-order convention.
"""

from __future__ import annotations

import itertools
from typing import Mapping, Sequence

import numpy as np


def table_lookup(rows: Sequence, parent_names: Sequence[str], cards: Sequence[int]):
    """Map full assignment dicts to rows; last declared parent varies fastest."""
    keys = list(itertools.product(*[range(c) for c in cards]))
    assert len(keys) == len(rows)
    mapping = {key: row for key, row in zip(keys, rows)}

    def look(assignment: Mapping[str, int]):
        return mapping[tuple(assignment[p] for p in parent_names)]

    return look


def row_vertices(row: Sequence[float]) -> list[tuple[float, ...]]:
    """Vertices of {p >= row, sum p = 1} by brute force: every way of
    finishing the free mass on one coordinate."""
    free = 1.0 - sum(row)
    if free <= 1e-12:
        return [tuple(row)]
    return [
        tuple(b + (free if i == j else 0.0) for i, b in enumerate(row))
        for j in range(len(row))
    ]


def halfspace_vertices(row: Sequence[float]) -> set[tuple[float, ...]]:
    """Vertices of the same polytope via basic feasible solutions of the
    defining half-spaces, solved as little linear systems (dims <= 3)."""
    k = len(row)
    vertices = set()
    for active in itertools.combinations(range(k), k - 1):
        a = np.zeros((k, k))
        b = np.zeros(k)
        for r, i in enumerate(active):
            a[r, i] = 1.0
            b[r] = row[i]
        a[k - 1, :] = 1.0
        b[k - 1] = 1.0
        try:
            p = np.linalg.solve(a, b)
        except np.linalg.LinAlgError:
            continue
        if all(p[i] >= row[i] - 1e-12 for i in range(k)):
            vertices.add(tuple(round(x, 12) for x in p))
    return vertices


def interval_corners(intervals: Sequence[tuple[float, float]]):
    axes = [(lo,) if hi - lo <= 1e-15 else (lo, hi) for lo, hi in intervals]
    return itertools.product(*axes)


# ---------------------------------------------------------------------------
# Per-operation envelopes
# ---------------------------------------------------------------------------

def expectation_envelope(
    b_row: Sequence[float], intervals: Sequence[tuple[float, float]]
) -> tuple[float, float]:
    """Exact range of sum(v_i * p_i) over polytope vertices and box corners."""
    best_lo, best_hi = float("inf"), float("-inf")
    for p in row_vertices(b_row):
        for v in interval_corners(intervals):
            ev = sum(x * y for x, y in zip(v, p))
            best_lo = min(best_lo, ev)
            best_hi = max(best_hi, ev)
    return best_lo, best_hi


def marginal_lower_oracle(
    likelihoods: Sequence[Sequence[float]], prior_row: Sequence[float], x: int
) -> float:
    """Min over vertex combinations of sum_y p(x|y) p(y); ``likelihoods[y]``
    is the full conditional lower-bound row given that prior outcome."""
    best = float("inf")
    for prior in row_vertices(prior_row):
        for combo in itertools.product(*[row_vertices(r) for r in likelihoods]):
            total = sum(combo[y][x] * prior[y] for y in range(len(prior)))
            best = min(best, total)
    return best


def posterior_lower_oracle(
    likelihoods: Sequence[Sequence[float]],
    prior_row: Sequence[float],
    x: int,
    y: int,
) -> float | None:
    """Min of p(y|x) over vertex combinations with positive evidence;
    None when no combination gives the conditioning outcome positive mass."""
    best = None
    for prior in row_vertices(prior_row):
        for combo in itertools.product(*[row_vertices(r) for r in likelihoods]):
            den = sum(combo[i][x] * prior[i] for i in range(len(prior)))
            if den <= 0.0:
                continue
            val = combo[y][x] * prior[y] / den
            best = val if best is None else min(best, val)
    return best


def posterior_grid_min(
    b_x: Sequence[float],
    u_x: Sequence[float],
    prior_row: Sequence[float],
    y: int,
    points: int = 50,
) -> float | None:
    """Grid refinement for binary priors: sweep each free likelihood
    coordinate and the prior's free mass over ``points`` steps."""
    assert len(prior_row) == 2
    t = np.linspace(0.0, 1.0, points)
    like0 = b_x[0] + (u_x[0] - b_x[0]) * t
    like1 = b_x[1] + (u_x[1] - b_x[1]) * t
    free = 1.0 - sum(prior_row)
    p0 = prior_row[0] + free * t
    a, b, p = np.meshgrid(like0, like1, p0, indexing="ij")
    num = a * p if y == 0 else b * (1.0 - p)
    den = a * p + b * (1.0 - p)
    ok = den > 0
    if not ok.any():
        return None
    return float((num[ok] / den[ok]).min())


def marginal_grid_min(
    b_x: Sequence[float],
    u_x: Sequence[float],
    prior_row: Sequence[float],
    points: int = 50,
) -> float:
    assert len(prior_row) == 2
    t = np.linspace(0.0, 1.0, points)
    like0 = b_x[0] + (u_x[0] - b_x[0]) * t
    like1 = b_x[1] + (u_x[1] - b_x[1]) * t
    free = 1.0 - sum(prior_row)
    p0 = prior_row[0] + free * t
    a, b, p = np.meshgrid(like0, like1, p0, indexing="ij")
    return float((a * p + b * (1.0 - p)).min())


# ---------------------------------------------------------------------------
# Diagram-level wrappers: pull rows from the untransformed diagram with
# independent lookups and compare against the transformed tables.
# ---------------------------------------------------------------------------

def chance_removal_oracle(diagram, y_name: str, out_parents, out_cards):
    """Expected envelopes after folding ``y_name`` into the value node,
    keyed by assignment tuple over the transformed parent list."""
    y_node = diagram.node(y_name)
    value = diagram.value_node
    y_look = table_lookup(
        y_node.chance_table.rows, y_node.chance_table.parents, y_node.chance_table.cards
    )
    v_look = table_lookup(
        value.value_table.rows, value.value_table.parents, value.value_table.cards
    )
    out = {}
    for key in itertools.product(*[range(c) for c in out_cards]):
        assign = dict(zip(out_parents, key))
        b_row = y_look(assign)
        intervals = [
            v_look({**assign, y_name: i}) for i in range(y_node.cardinality)
        ]
        out[key] = expectation_envelope(b_row, intervals)
    return out


def marginal_oracle(diagram, x_name: str, y_name: str, out_parents, out_cards):
    """Lower-bound rows for x with y summed out, by vertex enumeration."""
    x_node, y_node = diagram.node(x_name), diagram.node(y_name)
    x_look = table_lookup(
        x_node.chance_table.rows, x_node.chance_table.parents, x_node.chance_table.cards
    )
    y_look = table_lookup(
        y_node.chance_table.rows, y_node.chance_table.parents, y_node.chance_table.cards
    )
    out = {}
    for key in itertools.product(*[range(c) for c in out_cards]):
        assign = dict(zip(out_parents, key))
        prior = y_look(assign)
        likelihoods = [
            x_look({**assign, y_name: i}) for i in range(y_node.cardinality)
        ]
        out[key] = tuple(
            marginal_lower_oracle(likelihoods, prior, x)
            for x in range(x_node.cardinality)
        )
    return out


def posterior_oracle(diagram, x_name: str, y_name: str, out_parents, out_cards):
    """Posterior lower-bound rows for y given x (and side parents), by
    vertex enumeration; entries are None where no vertex has evidence."""
    x_node, y_node = diagram.node(x_name), diagram.node(y_name)
    x_look = table_lookup(
        x_node.chance_table.rows, x_node.chance_table.parents, x_node.chance_table.cards
    )
    y_look = table_lookup(
        y_node.chance_table.rows, y_node.chance_table.parents, y_node.chance_table.cards
    )
    out = {}
    for key in itertools.product(*[range(c) for c in out_cards]):
        assign = dict(zip(out_parents, key))
        prior = y_look(assign)
        likelihoods = [
            x_look({**assign, y_name: i}) for i in range(y_node.cardinality)
        ]
        x_val = assign[x_name]
        out[key] = tuple(
            posterior_lower_oracle(likelihoods, prior, x_val, y)
            for y in range(y_node.cardinality)
        )
    return out
