"""Exception hierarchy for the flow library.

All numerical failure modes raise a subclass of :class:`RGFlowError` so that
callers (and the command line front end) can distinguish usage mistakes from
genuine numerical breakdown.
"""


class RGFlowError(Exception):
    """Base class for all library errors."""


class DomainError(RGFlowError):
    """Argument outside the mathematical domain of an operation."""


class SingularityError(DomainError):
    """Evaluation requested exactly at a pole or essential singularity."""


class BranchCutError(DomainError):
    """Evaluation requested on a branch cut without a boundary-value request."""


class ConvergenceError(RGFlowError):
    """An iterative scheme failed to reach the requested tolerance."""


class ContainmentError(RGFlowError):
    """A contour does not enclose exactly one solution of the target equation."""


class BlowUpError(RGFlowError):
    """A trajectory left the trusted region during integration."""


class BracketError(RGFlowError):
    """A sign-change bracket could not be established for a root solve."""


class OffBranchError(RGFlowError):
    """A root solve converged to a solution off the principal branch."""
