"""Reference machinery: a classical point-valued solver, endpoint
enumeration over row-polytope vertices, and a random member sampler.

These are the independent yardsticks the bound propagation is checked
against: any point realization admitted by the bounds can be solved exactly
here, and enumerating every vertex combination of the varied rows gives an
exact envelope to compare the computed interval with.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from random import Random
from typing import Iterable, Sequence

from .errors import (
    CombinatorialLimitExceeded,
    NonPointResidual,
    ShapeMismatch,
)
from .model import (
    InfluenceDiagram,
    NodeKind,
    TOL,
    config_assignment,
    config_index,
    is_point_row,
)
from .solver import SolveReport, solve

_EV_TOL = 1e-9


@dataclass(frozen=True)
class PointRealization:
    """One admitted point model: a probability row per chance configuration
    and a single value per value-node configuration."""

    chance: dict[str, tuple[tuple[float, ...], ...]]
    values: tuple[float, ...]


@dataclass(frozen=True)
class PolicyEntry:
    """Optimal alternatives at one information state of one decision.

    ``chosen`` is the lowest-index optimum; ``tied`` lists every alternative
    achieving the optimum. States the prefix of observations and earlier
    choices cannot reach (zero probability) are marked unreached and their
    arbitrary argmax should be ignored.
    """

    chosen: int
    tied: tuple[int, ...]
    reached: bool


@dataclass(frozen=True)
class PointSolution:
    expected_value: float
    policy: dict[str, dict[int, PolicyEntry]]


@dataclass(frozen=True)
class EnvelopeReport:
    """Envelope of exact solutions over every enumerated vertex combination.

    The enumeration covers only the vertices of each varied row's polytope
    (plus value-box corners when requested); an extremum of the optimal
    expected value may in principle sit strictly inside a row polytope, so
    the envelope is a sampling of the exact range, not a certified hull.
    """

    ev_min: float
    ev_max: float
    admissible_union: dict[str, dict[int, tuple[int, ...]]]
    configurations_evaluated: int
    note: str = (
        "vertex enumeration; extrema interior to a row polytope are not visited"
    )


@dataclass(frozen=True)
class SoundnessReport:
    """Outcome of sampling-based containment checks against one solve."""

    samples: int
    interval: tuple[float, float]
    ev_violations: int
    policy_violations: int
    worst_ev_margin: float
    sampled_min: float | None
    sampled_max: float | None

    @property
    def passed(self) -> bool:
        return self.ev_violations == 0 and self.policy_violations == 0

    @property
    def gap_below(self) -> float | None:
        """Distance from the interval's floor to the worst sampled value."""
        if self.sampled_min is None:
            return None
        return self.sampled_min - self.interval[0]

    @property
    def gap_above(self) -> float | None:
        if self.sampled_max is None:
            return None
        return self.interval[1] - self.sampled_max


# ---------------------------------------------------------------------------
# Classical evaluation
# ---------------------------------------------------------------------------

def _check_shape(diagram: InfluenceDiagram, realization: PointRealization) -> None:
    chance_names = set(diagram.names(NodeKind.CHANCE))
    if set(realization.chance) != chance_names:
        raise ShapeMismatch(
            f"realization covers {sorted(realization.chance)}, "
            f"diagram has {sorted(chance_names)}"
        )
    for name in diagram.names(NodeKind.CHANCE):
        node = diagram.node(name)
        rows = realization.chance[name]
        if len(rows) != len(node.chance_table.rows):
            raise ShapeMismatch(f"{name}: wrong row count")
        for r, row in enumerate(rows):
            if len(row) != node.cardinality:
                raise ShapeMismatch(f"{name}: row {r} has wrong length")
            if abs(sum(row) - 1.0) > 1e-9 or any(p < -1e-9 for p in row):
                raise ShapeMismatch(f"{name}: row {r} is not a distribution")
    v_table = diagram.value_node.value_table
    if len(realization.values) != len(v_table.rows):
        raise ShapeMismatch("value row count mismatch")


def _sum_max_order(diagram: InfluenceDiagram) -> tuple[str, ...]:
    """Observation blocks interleaved with decisions, unobserved chance last."""
    chance = diagram.names(NodeKind.CHANCE)
    order: list[str] = []
    seen: set[str] = set()
    for d in diagram.decision_order:
        observed = set(diagram.node(d).parents)
        order += [c for c in chance if c in observed and c not in seen]
        order.append(d)
        seen.update(order)
    order += [c for c in chance if c not in seen]
    return tuple(order)


def point_solve(
    diagram: InfluenceDiagram, realization: PointRealization
) -> PointSolution:
    """Classical optimal expected value and argmax policy for one admitted
    point model. Ties break to the lowest alternative index and every tied
    optimum is recorded."""
    _check_shape(diagram, realization)
    order = _sum_max_order(diagram)
    value = diagram.value_node
    v_parents, v_cards = value.parents, value.value_table.cards
    chance_info = [
        (
            name,
            diagram.node(name).chance_table.parents,
            diagram.node(name).chance_table.cards,
            realization.chance[name],
        )
        for name in diagram.names(NodeKind.CHANCE)
    ]
    decision_info = {
        d: (diagram.node(d).parents, diagram.cards_of(diagram.node(d).parents))
        for d in diagram.decision_order
    }
    policy: dict[str, dict[int, PolicyEntry]] = {d: {} for d in diagram.decision_order}
    assign: dict[str, int] = {}

    def leaf() -> tuple[float, float]:
        weight = 1.0
        for name, parents, cards, rows in chance_info:
            idx = config_index([assign[p] for p in parents], cards)
            weight *= rows[idx][assign[name]]
        v_idx = config_index([assign[p] for p in v_parents], v_cards)
        return weight, weight * realization.values[v_idx]

    def walk(pos: int) -> tuple[float, float]:
        if pos == len(order):
            return leaf()
        name = order[pos]
        node = diagram.node(name)
        if node.kind is NodeKind.CHANCE:
            reach = total = 0.0
            for i in range(node.cardinality):
                assign[name] = i
                r, t = walk(pos + 1)
                reach += r
                total += t
            del assign[name]
            return reach, total
        # decision: maximize. Ties are detected with a tiny relative slack so
        # alternatives that are mathematically interchangeable (identical
        # rows, value-irrelevant decisions) stay tied despite float
        # summation noise.
        parents, cards = decision_info[name]
        info_idx = config_index([assign[p] for p in parents], cards)
        results = []
        for d in range(node.cardinality):
            assign[name] = d
            results.append(walk(pos + 1))
        del assign[name]
        best = max(t for _, t in results)
        slack = 1e-12 * max(1.0, abs(best))
        tied = tuple(d for d, (_, t) in enumerate(results) if best - t <= slack)
        reach = results[tied[0]][0]
        policy[name][info_idx] = PolicyEntry(tied[0], tied, reached=reach > 0.0)
        return reach, best

    _, total = walk(0)
    return PointSolution(expected_value=total, policy=policy)


# ---------------------------------------------------------------------------
# Vertex enumeration
# ---------------------------------------------------------------------------

def vertex_realizations(row: Sequence[float]) -> tuple[tuple[float, ...], ...]:
    """Vertices of {p >= row, sum(p) = 1}: the free mass 1 - sum(row) placed
    on each outcome in turn (a single point when the row already sums to 1)."""
    free = 1.0 - sum(row)
    if free <= TOL:
        return (tuple(row),)
    return tuple(
        tuple(b + free if i == j else b for i, b in enumerate(row))
        for j in range(len(row))
    )


def exact_envelope(
    diagram: InfluenceDiagram,
    varied_nodes: Iterable[str],
    include_value_box: bool = False,
    cap: int = 10_000_000,
) -> EnvelopeReport:
    """Solve every combination of row vertices of the varied chance nodes
    (and value-box corners when requested); every other row must be a point
    row. Returns the expected-value envelope and, per decision and reachable
    information state, the union of optimal alternatives."""
    varied = list(varied_nodes)
    chance_names = diagram.names(NodeKind.CHANCE)
    for name in varied:
        if name not in chance_names:
            raise NonPointResidual(f"{name!r} is not a chance node")

    axes: list[tuple[tuple[float, ...], ...]] = []
    layout: list[tuple[str, int]] = []  # (node, row index) per axis
    for name in chance_names:
        rows = diagram.node(name).chance_table.rows
        if name in varied:
            for r, row in enumerate(rows):
                axes.append(vertex_realizations(row))
                layout.append((name, r))
        else:
            for r, row in enumerate(rows):
                if not is_point_row(row):
                    raise NonPointResidual(f"{name}: row {r} is not point-valued")

    v_rows = diagram.value_node.value_table.rows
    value_axes: list[tuple[float, ...]] = []
    for r, (lo, hi) in enumerate(v_rows):
        if include_value_box:
            value_axes.append((lo,) if hi - lo <= TOL else (lo, hi))
        elif hi - lo > TOL:
            raise NonPointResidual(f"value row {r} is an interval; pass include_value_box")
        else:
            value_axes.append((lo,))

    total = 1
    for axis in axes:
        total *= len(axis)
    for axis in value_axes:
        total *= len(axis)
    if total > cap:
        raise CombinatorialLimitExceeded(f"{total} configurations exceed cap {cap}")

    base_rows = {
        name: list(diagram.node(name).chance_table.rows) for name in chance_names
    }
    ev_min = ev_max = None
    union: dict[str, dict[int, set[int]]] = {
        d: {} for d in diagram.decision_order
    }
    for combo in itertools.product(*axes, *value_axes):
        rows = {name: list(base_rows[name]) for name in chance_names}
        for (name, r), row in zip(layout, combo):
            rows[name][r] = row
        values = tuple(combo[len(axes):])
        realization = PointRealization(
            chance={n: tuple(rs) for n, rs in rows.items()}, values=values
        )
        solution = point_solve(diagram, realization)
        ev = solution.expected_value
        ev_min = ev if ev_min is None else min(ev_min, ev)
        ev_max = ev if ev_max is None else max(ev_max, ev)
        for d, entries in solution.policy.items():
            for info_idx, entry in entries.items():
                if entry.reached:
                    union[d].setdefault(info_idx, set()).update(entry.tied)

    return EnvelopeReport(
        ev_min=ev_min,
        ev_max=ev_max,
        admissible_union={
            d: {i: tuple(sorted(s)) for i, s in sorted(per.items())}
            for d, per in union.items()
        },
        configurations_evaluated=total,
    )


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def _simplex_point(rng: Random, k: int) -> list[float]:
    # uniform over the k-simplex via normalized exponentials
    draws = [rng.expovariate(1.0) for _ in range(k)]
    s = sum(draws)
    return [d / s for d in draws]


def _sample_with_rng(diagram: InfluenceDiagram, rng: Random) -> PointRealization:
    chance: dict[str, tuple[tuple[float, ...], ...]] = {}
    for name in diagram.names(NodeKind.CHANCE):
        rows = []
        for row in diagram.node(name).chance_table.rows:
            free = 1.0 - sum(row)
            if free <= TOL:
                rows.append(tuple(row))
            else:
                extra = _simplex_point(rng, len(row))
                rows.append(tuple(b + free * e for b, e in zip(row, extra)))
        chance[name] = tuple(rows)
    values = tuple(
        rng.uniform(lo, hi) if hi > lo else lo
        for lo, hi in diagram.value_node.value_table.rows
    )
    return PointRealization(chance=chance, values=values)


def sample_member(diagram: InfluenceDiagram, seed: int) -> PointRealization:
    """A random admitted point model: per row, the free mass is spread over
    the outcomes uniformly on the allocation simplex; values are uniform in
    their intervals. Deterministic given the seed."""
    return _sample_with_rng(diagram, Random(seed))


# ---------------------------------------------------------------------------
# Soundness harness
# ---------------------------------------------------------------------------

def soundness_check(
    diagram: InfluenceDiagram,
    samples: int,
    seed: int = 0,
    report: SolveReport | None = None,
) -> SoundnessReport:
    """Solve once, then check per sampled member that (a) its exact optimal
    expected value lies inside the computed interval and (b) every optimal
    choice at every reachable information state is admissible. Violations
    are counted, not raised."""
    if report is None:
        report = solve(diagram)
    lo, hi = report.final_interval
    rng = Random(seed)

    ev_violations = policy_violations = 0
    worst = 0.0
    sampled_min = sampled_max = None
    projections = {
        name: _policy_projection(diagram, name, report.policies[name])
        for name in diagram.names(NodeKind.DECISION)
    }
    for _ in range(samples):
        member = _sample_with_rng(diagram, rng)
        solution = point_solve(diagram, member)
        ev = solution.expected_value
        sampled_min = ev if sampled_min is None else min(sampled_min, ev)
        sampled_max = ev if sampled_max is None else max(sampled_max, ev)
        margin = max(lo - ev, ev - hi)
        worst = max(worst, margin)
        if margin > _EV_TOL:
            ev_violations += 1
        for name, entries in solution.policy.items():
            admitted = report.policies[name]
            project = projections[name]
            for info_idx, entry in entries.items():
                if not entry.reached:
                    continue
                allowed = admitted.sets[project(info_idx)]
                if any(d not in allowed for d in entry.tied):
                    policy_violations += 1

    return SoundnessReport(
        samples=samples,
        interval=(lo, hi),
        ev_violations=ev_violations,
        policy_violations=policy_violations,
        worst_ev_margin=worst,
        sampled_min=sampled_min,
        sampled_max=sampled_max,
    )


def _policy_projection(diagram, name: str, admitted):
    """Map configurations over a decision's full parent set onto the
    (sub)set of parents its admissible table is keyed by."""
    parents = diagram.node(name).parents
    cards = diagram.cards_of(parents)
    positions = [parents.index(p) for p in admitted.info_parents]

    def project(info_idx: int) -> int:
        values = config_assignment(info_idx, cards)
        return config_index([values[p] for p in positions], admitted.info_cards)

    return project
