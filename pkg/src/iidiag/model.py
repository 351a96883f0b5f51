"""Data model for influence diagrams with lower-bounded probabilities.

A diagram couples a DAG of chance, decision, and value nodes with numeric
tables. Chance nodes store, per parent configuration, lower bounds on their
conditional distribution; the matching upper bounds are never stored and are
always recomputed as 1 minus the other outcomes' lower bounds, so the two can
never disagree. The single value node stores a [low, high] interval per
parent configuration. ``build_diagram`` validates everything up front and
returns an immutable diagram; it never returns a partially valid one.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable, Mapping, Sequence

from .errors import (
    CycleDetected,
    IntervalInverted,
    MalformedSpec,
    MultipleValueNodes,
    NegativeBound,
    NoValueNode,
    OutOfRange,
    ParentMismatch,
    RowSumExceedsOne,
    UnorderedDecisions,
)

# Absolute tolerance for row-sum and interval checks; all arithmetic is
# double precision.
TOL = 1e-12


class NodeKind(Enum):
    CHANCE = "chance"
    DECISION = "decision"
    VALUE = "value"


@dataclass(frozen=True)
class Variable:
    """A named discrete quantity with an ordered list of at least 2 outcomes."""

    name: str
    outcomes: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.outcomes) < 2:
            raise MalformedSpec(f"variable {self.name!r} needs >= 2 outcomes")
        if len(set(self.outcomes)) != len(self.outcomes):
            raise MalformedSpec(f"variable {self.name!r} has duplicate outcomes")

    @property
    def cardinality(self) -> int:
        return len(self.outcomes)


# ---------------------------------------------------------------------------
# Parent configurations: mixed-radix indexing, last declared parent fastest.
# ---------------------------------------------------------------------------

def config_count(cards: Sequence[int]) -> int:
    n = 1
    for c in cards:
        n *= c
    return n


def config_index(assignment: Sequence[int], cards: Sequence[int]) -> int:
    """Map an outcome-index tuple to its mixed-radix row index."""
    if len(assignment) != len(cards):
        raise OutOfRange(
            f"assignment covers {len(assignment)} parents, expected {len(cards)}"
        )
    index = 0
    for value, card in zip(assignment, cards):
        if not 0 <= value < card:
            raise OutOfRange(f"outcome index {value} outside [0, {card})")
        index = index * card + value
    return index


def config_assignment(index: int, cards: Sequence[int]) -> tuple[int, ...]:
    """Inverse of :func:`config_index`."""
    total = config_count(cards)
    if not 0 <= index < total:
        raise OutOfRange(f"config index {index} outside [0, {total})")
    out = []
    for card in reversed(cards):
        out.append(index % card)
        index //= card
    return tuple(reversed(out))


def implied_upper(row: Sequence[float], outcome: int) -> float:
    """Upper bound implied by the other outcomes' lower bounds."""
    return 1.0 - (sum(row) - row[outcome])


def is_point_row(row: Sequence[float]) -> bool:
    return abs(sum(row) - 1.0) <= TOL


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LowerCPT:
    """Per parent-configuration lower bounds for a chance node's distribution.

    ``rows[i]`` is the vector of lower bounds over the node's outcomes for
    the parent configuration with mixed-radix index ``i``.
    """

    parents: tuple[str, ...]
    cards: tuple[int, ...]
    rows: tuple[tuple[float, ...], ...]

    def row_for(self, assignment: Mapping[str, int]) -> tuple[float, ...]:
        idx = config_index([assignment[p] for p in self.parents], self.cards)
        return self.rows[idx]

    def upper(self, row_index: int, outcome: int) -> float:
        return implied_upper(self.rows[row_index], outcome)


@dataclass(frozen=True)
class IntervalValueTable:
    """Per parent-configuration [low, high] value intervals for the value node."""

    parents: tuple[str, ...]
    cards: tuple[int, ...]
    rows: tuple[tuple[float, float], ...]

    def interval_for(self, assignment: Mapping[str, int]) -> tuple[float, float]:
        idx = config_index([assignment[p] for p in self.parents], self.cards)
        return self.rows[idx]


@dataclass(frozen=True)
class Node:
    """A named node: kind, outcome variable (None for the value node),
    ordered parents, and the table matching its kind."""

    name: str
    kind: NodeKind
    variable: Variable | None
    parents: tuple[str, ...]
    chance_table: LowerCPT | None = None
    value_table: IntervalValueTable | None = None

    @property
    def cardinality(self) -> int:
        if self.variable is None:
            raise MalformedSpec(f"node {self.name!r} has no outcomes")
        return self.variable.cardinality


@dataclass(frozen=True)
class InfluenceDiagram:
    """An immutable, validated influence diagram.

    ``nodes`` preserves declaration order, which fixes all deterministic
    tie-breaking downstream. Mutation happens only by building a new diagram.
    """

    nodes: dict[str, Node]
    decision_order: tuple[str, ...]
    added_information_arcs: tuple[tuple[str, str], ...] = ()

    # -- lookups ------------------------------------------------------------

    def node(self, name: str) -> Node:
        try:
            return self.nodes[name]
        except KeyError:
            raise MalformedSpec(f"unknown node {name!r}") from None

    @property
    def value_node(self) -> Node:
        for node in self.nodes.values():
            if node.kind is NodeKind.VALUE:
                return node
        raise NoValueNode("diagram has no value node")

    def names(self, kind: NodeKind | None = None) -> tuple[str, ...]:
        if kind is None:
            return tuple(self.nodes)
        return tuple(n for n, node in self.nodes.items() if node.kind is kind)

    def card(self, name: str) -> int:
        return self.node(name).cardinality

    def cards_of(self, names: Iterable[str]) -> tuple[int, ...]:
        return tuple(self.card(n) for n in names)

    def successors(self, name: str) -> tuple[str, ...]:
        return tuple(
            n for n, node in self.nodes.items() if name in node.parents
        )

    def arcs(self) -> tuple[tuple[str, str], ...]:
        return tuple(
            (p, n) for n, node in self.nodes.items() for p in node.parents
        )

    def has_path(self, src: str, dst: str, skip_arc: tuple[str, str] | None = None) -> bool:
        """Directed reachability, optionally ignoring one specific arc."""
        stack, seen = [src], set()
        while stack:
            cur = stack.pop()
            if cur == dst:
                return True
            if cur in seen:
                continue
            seen.add(cur)
            for nxt in self.successors(cur):
                if skip_arc is not None and (cur, nxt) == skip_arc:
                    continue
                stack.append(nxt)
        return False

    def topological_order(self) -> tuple[str, ...]:
        """Kahn's algorithm with declaration order breaking ties."""
        remaining = dict.fromkeys(self.nodes)
        indeg = {n: len(self.nodes[n].parents) for n in self.nodes}
        order: list[str] = []
        while remaining:
            ready = [n for n in remaining if indeg[n] == 0]
            if not ready:
                raise CycleDetected("arcs contain a directed cycle")
            head = ready[0]
            del remaining[head]
            order.append(head)
            for succ in self.successors(head):
                indeg[succ] -= 1
        return tuple(order)

    # -- derived structure ---------------------------------------------------

    def replace_nodes(
        self,
        updates: Mapping[str, Node] = (),
        remove: Iterable[str] = (),
    ) -> "InfluenceDiagram":
        """New diagram with some nodes swapped out and/or dropped; declaration
        order of the survivors is preserved."""
        dropped = set(remove)
        updates = dict(updates)
        nodes = {
            name: updates.get(name, node)
            for name, node in self.nodes.items()
            if name not in dropped
        }
        return InfluenceDiagram(
            nodes=nodes,
            decision_order=tuple(d for d in self.decision_order if d not in dropped),
            added_information_arcs=self.added_information_arcs,
        )


# ---------------------------------------------------------------------------
# Construction and validation
# ---------------------------------------------------------------------------

def _want(mapping: Mapping[str, Any], key: str, where: str) -> Any:
    if not isinstance(mapping, Mapping) or key not in mapping:
        raise MalformedSpec(f"{where}: missing field {key!r}")
    return mapping[key]


def _check_number(x: Any, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise MalformedSpec(f"{where}: expected a number, got {x!r}")
    return float(x)


def _check_labels(raw: Any, where: str) -> tuple[str, ...]:
    if not isinstance(raw, Sequence) or isinstance(raw, (str, bytes)):
        raise MalformedSpec(f"{where}: expected a list of labels")
    labels = []
    for item in raw:
        if not isinstance(item, str):
            raise MalformedSpec(f"{where}: label {item!r} is not a string")
        labels.append(item)
    return tuple(labels)


def build_diagram(data: Mapping[str, Any]) -> InfluenceDiagram:
    """Build and validate a diagram from its plain-data description.

    ``data`` has the same shape as the on-disk JSON document: a "variables"
    list giving each chance node's outcomes and a "nodes" list giving every
    node's kind, parents, and table. Decision nodes carry their alternatives
    inline. Raises a specific :class:`~iidiag.errors.DiagramError` subclass on
    the first violated invariant.

    Missing no-forgetting information arcs (each decision seeing every earlier
    decision and its information) are added automatically and reported via
    ``added_information_arcs``.
    """
    raw_vars = _want(data, "variables", "document")
    raw_nodes = _want(data, "nodes", "document")
    if not isinstance(raw_vars, Sequence) or not isinstance(raw_nodes, Sequence):
        raise MalformedSpec("document: 'variables' and 'nodes' must be lists")

    variables: dict[str, Variable] = {}
    for i, rv in enumerate(raw_vars):
        name = _want(rv, "name", f"variables[{i}]")
        outcomes = _check_labels(_want(rv, "outcomes", f"variables[{i}]"), f"variables[{i}].outcomes")
        if name in variables:
            raise MalformedSpec(f"variables[{i}]: duplicate variable {name!r}")
        variables[name] = Variable(name=name, outcomes=outcomes)

    # First pass: names, kinds, parents (tables need all cardinalities, so
    # they are checked in a second pass).
    decls: list[tuple[str, NodeKind, tuple[str, ...], Any]] = []
    seen: set[str] = set()
    for i, rn in enumerate(raw_nodes):
        where = f"nodes[{i}]"
        name = _want(rn, "name", where)
        if not isinstance(name, str):
            raise MalformedSpec(f"{where}: name must be a string")
        if name in seen:
            raise MalformedSpec(f"{where}: duplicate node {name!r}")
        seen.add(name)
        kind_raw = _want(rn, "kind", where)
        try:
            kind = NodeKind(kind_raw)
        except ValueError:
            raise MalformedSpec(f"{where}: unknown kind {kind_raw!r}") from None
        parents = _check_labels(_want(rn, "parents", where), f"{where}.parents")
        if len(set(parents)) != len(parents):
            raise MalformedSpec(f"{where}: duplicate parents")
        decls.append((name, kind, parents, rn))

    names = {d[0] for d in decls}
    value_names = [d[0] for d in decls if d[1] is NodeKind.VALUE]
    if len(value_names) > 1:
        raise MultipleValueNodes(f"value nodes: {', '.join(value_names)}")
    if not value_names:
        raise NoValueNode("declare exactly one value node")
    value_name = value_names[0]

    cards: dict[str, int] = {}
    for i, (name, kind, parents, rn) in enumerate(decls):
        where = f"nodes[{i}] ({name})"
        for p in parents:
            if p not in names:
                raise MalformedSpec(f"{where}: unknown parent {p!r}")
            if p == name:
                raise CycleDetected(f"{where}: node is its own parent")
            if p == value_name:
                raise MalformedSpec(f"{where}: the value node cannot have successors")
        if kind is NodeKind.CHANCE:
            if name not in variables:
                raise MalformedSpec(f"{where}: chance node has no 'variables' entry")
            cards[name] = variables[name].cardinality
        elif kind is NodeKind.DECISION:
            if name in variables:
                raise MalformedSpec(f"{where}: decision outcomes belong in 'alternatives'")
            alts = _check_labels(_want(rn, "alternatives", where), f"{where}.alternatives")
            variables[name] = Variable(name=name, outcomes=alts)
            cards[name] = len(alts)
        else:
            if name in variables:
                raise MalformedSpec(f"{where}: the value node has no outcomes")
            if "table" not in rn:
                raise MalformedSpec(f"{where}: value node needs a table")

    unused = [v for v in variables if v not in names]
    if unused:
        raise MalformedSpec(f"variables without a matching node: {', '.join(unused)}")

    # Second pass: tables.
    nodes: dict[str, Node] = {}
    for i, (name, kind, parents, rn) in enumerate(decls):
        where = f"nodes[{i}] ({name})"
        parent_cards = tuple(cards[p] for p in parents)
        n_rows = config_count(parent_cards)
        if kind is NodeKind.CHANCE:
            rows = _parse_chance_rows(
                _want(rn, "table", where), n_rows, cards[name], where
            )
            table = LowerCPT(parents=parents, cards=parent_cards, rows=rows)
            nodes[name] = Node(name, kind, variables[name], parents, chance_table=table)
        elif kind is NodeKind.DECISION:
            if "table" in rn:
                raise MalformedSpec(f"{where}: decision nodes carry no table")
            nodes[name] = Node(name, kind, variables[name], parents)
        else:
            rows = _parse_value_rows(_want(rn, "table", where), n_rows, where)
            table = IntervalValueTable(parents=parents, cards=parent_cards, rows=rows)
            nodes[name] = Node(name, kind, None, parents, value_table=table)

    diagram = InfluenceDiagram(nodes=nodes, decision_order=())
    diagram.topological_order()  # raises CycleDetected on a cycle

    order = _decision_order(diagram)
    diagram, added = _add_no_forgetting(diagram, order)
    diagram = InfluenceDiagram(
        nodes=diagram.nodes, decision_order=order, added_information_arcs=added
    )
    check_structure(diagram)
    return diagram


def _parse_chance_rows(raw: Any, n_rows: int, k: int, where: str) -> tuple[tuple[float, ...], ...]:
    if not isinstance(raw, Sequence):
        raise MalformedSpec(f"{where}.table: expected a list of rows")
    if len(raw) != n_rows:
        raise ParentMismatch(f"{where}.table: expected {n_rows} rows, got {len(raw)}")
    rows = []
    for r, raw_row in enumerate(raw):
        at = f"{where}.table[{r}]"
        if not isinstance(raw_row, Sequence) or isinstance(raw_row, (str, bytes)):
            raise MalformedSpec(f"{at}: expected a list of bounds")
        if len(raw_row) != k:
            raise ParentMismatch(f"{at}: expected {k} bounds, got {len(raw_row)}")
        row = tuple(_check_number(x, at) for x in raw_row)
        for b in row:
            if b < -TOL:
                raise NegativeBound(f"{at}: lower bound {b} < 0")
        if sum(row) > 1.0 + TOL:
            raise RowSumExceedsOne(f"{at}: bounds sum to {sum(row)} > 1")
        rows.append(tuple(max(b, 0.0) for b in row))
    return tuple(rows)


def _parse_value_rows(raw: Any, n_rows: int, where: str) -> tuple[tuple[float, float], ...]:
    if not isinstance(raw, Sequence):
        raise MalformedSpec(f"{where}.table: expected a list of [low, high] rows")
    if len(raw) != n_rows:
        raise ParentMismatch(f"{where}.table: expected {n_rows} rows, got {len(raw)}")
    rows = []
    for r, raw_row in enumerate(raw):
        at = f"{where}.table[{r}]"
        if not isinstance(raw_row, Sequence) or len(raw_row) != 2:
            raise MalformedSpec(f"{at}: expected a [low, high] pair")
        lo = _check_number(raw_row[0], at)
        hi = _check_number(raw_row[1], at)
        if lo > hi + TOL:
            raise IntervalInverted(f"{at}: low {lo} > high {hi}")
        rows.append((lo, hi))
    return tuple(rows)


def _decision_order(diagram: InfluenceDiagram) -> tuple[str, ...]:
    """Total order of decisions via directed paths; raises when two decisions
    are incomparable."""
    decisions = diagram.names(NodeKind.DECISION)
    if len(decisions) <= 1:
        return decisions
    topo = diagram.topological_order()
    ordered = tuple(n for n in topo if n in set(decisions))
    for earlier, later in zip(ordered, ordered[1:]):
        if not diagram.has_path(earlier, later):
            raise UnorderedDecisions(
                f"no directed path orders decisions {earlier!r} and {later!r}"
            )
    return ordered


def _add_no_forgetting(
    diagram: InfluenceDiagram, order: tuple[str, ...]
) -> tuple[InfluenceDiagram, tuple[tuple[str, str], ...]]:
    added: list[tuple[str, str]] = []
    updates: dict[str, Node] = {}
    known: list[str] = []  # earlier decisions and their information, in order
    for name in order:
        node = updates.get(name, diagram.nodes[name])
        parents = list(node.parents)
        for p in known:
            if p not in parents:
                parents.append(p)
                added.append((p, name))
        if len(parents) != len(node.parents):
            updates[name] = Node(name, node.kind, node.variable, tuple(parents))
        for p in parents:
            if p not in known:
                known.append(p)
        if name not in known:
            known.append(name)
    return diagram.replace_nodes(updates), tuple(added)


def check_structure(diagram: InfluenceDiagram) -> None:
    """Invariant sweep used after construction and after every transformation."""
    value = diagram.value_node  # NoValueNode if missing
    if len(diagram.names(NodeKind.VALUE)) > 1:
        raise MultipleValueNodes("more than one value node")
    if diagram.successors(value.name):
        raise MalformedSpec("the value node cannot have successors")
    diagram.topological_order()

    if set(diagram.decision_order) != set(diagram.names(NodeKind.DECISION)):
        raise MalformedSpec("decision_order out of sync with the node set")

    for node in diagram.nodes.values():
        for p in node.parents:
            if p not in diagram.nodes:
                raise MalformedSpec(f"{node.name}: unknown parent {p!r}")
        if node.kind is NodeKind.CHANCE:
            table = node.chance_table
            if table is None or table.parents != node.parents:
                raise ParentMismatch(f"{node.name}: table parents disagree with arcs")
            if table.cards != diagram.cards_of(node.parents):
                raise ParentMismatch(f"{node.name}: table cards disagree with parents")
            k = node.cardinality
            if len(table.rows) != config_count(table.cards):
                raise ParentMismatch(f"{node.name}: wrong row count")
            for r, row in enumerate(table.rows):
                if len(row) != k:
                    raise ParentMismatch(f"{node.name}: row {r} has wrong length")
                for b in row:
                    if b < -TOL:
                        raise NegativeBound(f"{node.name}: row {r} bound {b} < 0")
                if sum(row) > 1.0 + TOL:
                    raise RowSumExceedsOne(f"{node.name}: row {r} sums to {sum(row)}")
        elif node.kind is NodeKind.VALUE:
            table = node.value_table
            if table is None or table.parents != node.parents:
                raise ParentMismatch(f"{node.name}: table parents disagree with arcs")
            if table.cards != diagram.cards_of(node.parents):
                raise ParentMismatch(f"{node.name}: table cards disagree with parents")
            if len(table.rows) != config_count(table.cards):
                raise ParentMismatch(f"{node.name}: wrong row count")
            for r, (lo, hi) in enumerate(table.rows):
                if lo > hi + TOL:
                    raise IntervalInverted(f"{node.name}: row {r} has low {lo} > high {hi}")
