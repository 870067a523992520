"""Exception types raised by weightflow."""


class WeightFlowError(Exception):
    """Base class for all library errors."""


class GraphError(WeightFlowError, ValueError):
    pass


class DuplicateEdge(GraphError):
    pass


class NonPositiveWeight(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class Disconnected(GraphError):
    pass


class EdgeNotInGraph(GraphError, KeyError):
    pass


class UnbalancedMasses(WeightFlowError, ValueError):
    pass


class ZeroTotalWeight(WeightFlowError, ArithmeticError):
    pass


class AlphaOutsideBranch(WeightFlowError, ValueError):
    pass


class VertexSetMismatch(WeightFlowError, ValueError):
    pass


class InputFormatError(WeightFlowError, ValueError):
    """Malformed text input; carries the offending line number."""

    def __init__(self, path, lineno, message):
        self.path = path
        self.lineno = lineno
        super().__init__(f"{path}:{lineno}: {message}")


class StaleDistances(WeightFlowError, RuntimeError):
    """A distance matrix was used after the weights it was built from changed."""


class InvariantViolation(WeightFlowError, RuntimeError):
    """A bound that must hold for every flow step was broken."""
