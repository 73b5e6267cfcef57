"""Exception types shared across the planner modules."""


class BudgetPathError(Exception):
    """Base class for all planner errors."""


class ParseError(BudgetPathError):
    """Scenario or solution input is not valid JSON / does not match the schema."""


class ValidationError(BudgetPathError):
    """A scenario violates one of its invariants (named in the message)."""


class UnboundedPolytope(BudgetPathError):
    """Half-space system admits a recession direction."""


class EmptyPolytope(BudgetPathError):
    """Half-space system has no feasible point."""


class DegeneratePolytope(BudgetPathError):
    """Feasible set exists but has (near-)empty interior."""


class Infeasible(BudgetPathError):
    """No budget-feasible path exists between start and end."""


class SequenceRepetition(BudgetPathError):
    """A graph path revisits a region non-consecutively (graph construction bug)."""


class InvalidSequence(BudgetPathError):
    """A visitation sequence references an unknown region index."""


class NumericalBreakdown(BudgetPathError):
    """Solver iterate produced non-finite values."""


class MaxIterations(BudgetPathError):
    """Solver hit its iteration cap; best iterate attached as ``best``."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class TooManyNodes(BudgetPathError):
    """Dense verification grid would exceed the node budget."""


class GenerationFailed(BudgetPathError):
    """Random scenario generation exceeded its rejection budget."""
