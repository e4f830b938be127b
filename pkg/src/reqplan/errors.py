"""Exception types shared across the engine modules."""


class ReqPlanError(Exception):
    """Base class for all engine errors."""


class MissingEvaluations(ReqPlanError):
    """A required evaluation cell is absent and the policy forbids skipping."""


class NoRatings(ReqPlanError):
    """No stakeholder rated the requested (requirement, dimension) pair."""


class EmptyMatrix(ReqPlanError):
    """Factorization was asked to train on a matrix with no observed entries."""


class IndexOutOfRange(ReqPlanError):
    """A stakeholder or requirement index is outside the factor model."""


class TooLarge(ReqPlanError):
    """An exhaustive oracle was invoked beyond its instance-size bound."""


class IncompletePlan(ReqPlanError):
    """A release plan is missing requirements or uses releases outside 1..n."""


class InconsistentBackground(ReqPlanError):
    """The hard (background) constraints are unsatisfiable on their own."""


class UnknownRequirement(ReqPlanError):
    """A requirement id does not exist in the project."""


class ParseError(ReqPlanError):
    """A project document is structurally malformed; the message names the location."""


class ValidationError(ReqPlanError):
    """A parsed project violates model invariants."""

    def __init__(self, issues):
        self.issues = list(issues)
        lines = "; ".join(str(i) for i in self.issues)
        super().__init__(f"project validation failed: {lines}")
