"""Exception hierarchy for diagram construction, transformation, and solving."""


class DiagramError(Exception):
    """Base class for all errors raised by this package."""


class MalformedSpec(DiagramError):
    """The diagram description is structurally broken (missing or bad fields)."""


class DiagramSyntaxError(DiagramError):
    """A diagram file is not valid JSON; message carries line/column."""


class CycleDetected(DiagramError):
    """The arcs do not form a DAG."""


class MultipleValueNodes(DiagramError):
    """More than one value node declared."""


class NoValueNode(DiagramError):
    """No value node declared."""


class RowSumExceedsOne(DiagramError):
    """A chance row's lower bounds sum to more than 1."""


class NegativeBound(DiagramError):
    """A lower bound below 0."""


class IntervalInverted(DiagramError):
    """A value row with lower endpoint above the upper endpoint."""


class ParentMismatch(DiagramError):
    """A table's shape disagrees with the node's declared parents or outcomes."""


class UnorderedDecisions(DiagramError):
    """Two decision nodes with no directed path between them."""


class OutOfRange(DiagramError):
    """A configuration index or assignment outside the valid range."""


class NotRemovable(DiagramError):
    """The node does not satisfy the removal preconditions."""


class WouldCreateCycle(DiagramError):
    """Reversing the arc would create a directed cycle."""


class ArcMissing(DiagramError):
    """The arc to reverse does not exist."""


class NotBarren(DiagramError):
    """The node has successors (or is the value node) and cannot be dropped."""


class Unsolvable(DiagramError):
    """No reduction rule applies; the information structure is invalid."""


class ShapeMismatch(DiagramError):
    """A point realization does not match the diagram's tables."""


class NonPointResidual(DiagramError):
    """Endpoint enumeration requires every non-varied row to be point-valued."""


class CombinatorialLimitExceeded(DiagramError):
    """Endpoint enumeration would evaluate more configurations than the cap."""
