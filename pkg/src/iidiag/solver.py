"""Reduces a diagram to its bare value node, collecting the expected-value
interval and one admissible-alternatives table per decision.

The reduction rule is a fixed priority order, tied by node declaration
order, so identical diagrams always produce identical reports and step logs:

1. drop any barren node;
2. remove the last remaining decision once every other value-node parent is
   among its information predecessors;
3. fold any chance node whose only successor is the value node;
4. sum out any chance node whose only successor is a single chance node;
5. otherwise take the first chance parent of the value node all of whose
   successors are chance nodes or the value node, and reverse the arc to its
   topologically earliest chance successor, repeating until rule 3 applies.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import Unsolvable
from .model import InfluenceDiagram, NodeKind
from .transforms import (
    AdmissibleSet,
    StepKind,
    TransformStep,
    marginalize_chance,
    remove_barren,
    remove_chance_into_value,
    remove_decision,
    reverse_arc,
)


@dataclass(frozen=True)
class SolveReport:
    """Final expected-value interval, admissible policies, and the audit log."""

    final_interval: tuple[float, float]
    policies: dict[str, AdmissibleSet]
    steps: tuple[TransformStep, ...]
    notes: tuple[str, ...]

    @property
    def lower(self) -> float:
        return self.final_interval[0]

    @property
    def upper(self) -> float:
        return self.final_interval[1]


def next_step(diagram: InfluenceDiagram) -> TransformStep:
    """The step :func:`solve` would apply next; a pure function of the diagram."""
    value = diagram.value_node
    if len(diagram.nodes) == 1:
        raise Unsolvable("only the value node remains")

    for name, node in diagram.nodes.items():
        if node.kind is not NodeKind.VALUE and not diagram.successors(name):
            return TransformStep(StepKind.REMOVE_BARREN, node=name)

    if diagram.decision_order:
        last = diagram.decision_order[-1]
        observed = set(diagram.node(last).parents)
        others = [p for p in value.parents if p != last]
        if (
            last in value.parents
            and diagram.successors(last) == (value.name,)
            and all(p in observed for p in others)
        ):
            return TransformStep(StepKind.REMOVE_DECISION, node=last, into=value.name)

    for name in diagram.names(NodeKind.CHANCE):
        if diagram.successors(name) == (value.name,):
            return TransformStep(
                StepKind.REMOVE_CHANCE_INTO_VALUE, node=name, into=value.name
            )

    for name in diagram.names(NodeKind.CHANCE):
        succs = diagram.successors(name)
        if len(succs) == 1 and diagram.node(succs[0]).kind is NodeKind.CHANCE:
            return TransformStep(StepKind.MARGINALIZE_CHANCE, node=name, into=succs[0])

    topo = {n: i for i, n in enumerate(diagram.topological_order())}
    for name in diagram.names(NodeKind.CHANCE):
        if name not in value.parents:
            continue
        succs = diagram.successors(name)
        kinds = [diagram.node(s).kind for s in succs]
        if any(k is NodeKind.DECISION for k in kinds):
            continue  # cannot reach rule 3 until that decision goes
        heads = sorted(
            (s for s, k in zip(succs, kinds) if k is NodeKind.CHANCE),
            key=topo.__getitem__,
        )
        for head in heads:
            if not diagram.has_path(name, head, skip_arc=(name, head)):
                return TransformStep(StepKind.REVERSE_ARC, node=name, into=head)

    raise Unsolvable("no reduction rule applies; invalid information structure")


def apply_step(
    diagram: InfluenceDiagram, step: TransformStep
) -> tuple[InfluenceDiagram, TransformStep]:
    """Run one step descriptor, returning the new diagram and the completed
    step (with admissible sets / notes filled in)."""
    if step.kind is StepKind.REMOVE_BARREN:
        return remove_barren(diagram, step.node)
    if step.kind is StepKind.REMOVE_DECISION:
        return remove_decision(diagram, step.node)
    if step.kind is StepKind.REMOVE_CHANCE_INTO_VALUE:
        return remove_chance_into_value(diagram, step.node)
    if step.kind is StepKind.MARGINALIZE_CHANCE:
        return marginalize_chance(diagram, step.node)
    return reverse_arc(diagram, step.into, step.node)


def solve(diagram: InfluenceDiagram) -> SolveReport:
    """Evaluate the diagram: bounded expected value plus admissible policies.

    Every decision of the input diagram appears exactly once in
    ``policies``; a decision dropped as barren never influences value, so it
    is reported with every alternative admissible at the empty information
    state.
    """
    original_decisions = diagram.names(NodeKind.DECISION)
    steps: list[TransformStep] = []
    policies: dict[str, AdmissibleSet] = {}
    notes: list[str] = []

    budget = 2 * (len(diagram.nodes) + len(diagram.arcs())) ** 2 + 10
    while len(diagram.nodes) > 1:
        if len(steps) > budget:
            raise Unsolvable("step budget exceeded; reduction is not converging")
        step = next_step(diagram)
        removed = diagram.node(step.node)
        diagram, step = apply_step(diagram, step)
        steps.append(step)

        if step.admissible is not None:
            policies[step.node] = step.admissible
            if step.lower_gap and step.lower_gap > 0:
                notes.append(
                    f"{step.node}: admissible-set hull lower bound sits "
                    f"{step.lower_gap:.4g} below the best attainable floor"
                )
        elif step.kind is StepKind.REMOVE_BARREN and removed.kind is NodeKind.DECISION:
            alternatives = removed.variable.outcomes
            policies[step.node] = AdmissibleSet(
                decision=step.node,
                alternatives=alternatives,
                info_parents=(),
                info_cards=(),
                sets=(tuple(range(len(alternatives))),),
            )
            notes.append(f"{step.node}: barren decision, any alternative is optimal")
        if step.notes:
            ind = sum(1 for n in step.notes if n.kind == "indeterminate")
            conv = len(step.notes) - ind
            notes.append(
                f"{step.node}->{step.into}: {conv} convention-zero and "
                f"{ind} indeterminate posterior bounds stored as 0"
            )

    table = diagram.value_node.value_table
    assert table is not None and len(table.rows) == 1
    report = SolveReport(
        final_interval=table.rows[0],
        policies=policies,
        steps=tuple(steps),
        notes=tuple(notes),
    )
    missing = [d for d in original_decisions if d not in report.policies]
    assert not missing, f"decisions without a policy: {missing}"
    return report
