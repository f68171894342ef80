"""Exception taxonomy.

Two families: ``ValidationFailure`` covers bad user data and bodies outside the
smooth/generic hypotheses (CLI exit code 1); ``InvariantViolation`` covers
mathematical identities that must hold for correct code and signal an internal
problem when they do not (CLI exit code 2).
"""


class AffineBodiesError(Exception):
    """Base class for all toolkit errors."""


class ValidationFailure(AffineBodiesError):
    """Input or body fails a precondition of the requested analysis."""


class BadSpec(ValidationFailure):
    """Malformed body specification (kind, coefficient count, dimensions)."""


class NonPositiveRadial(ValidationFailure):
    """The induced radial function is not strictly positive."""


class NonConvex(ValidationFailure):
    """A principal curvature drops below the positivity tolerance."""


class BadRatio(ValidationFailure):
    """Affinity ratio t must be positive."""


class Unsupported(ValidationFailure):
    """Operation not available in this dimension."""


class Degenerate(ValidationFailure):
    """An equilibrium has a near-zero Hessian eigenvalue (non-Morse body)."""


class BracketNotFound(ValidationFailure):
    """The isoperimetric-maximum numerator does not change sign on the search window."""


class NoSignChange(ValidationFailure):
    """Arc endpoints do not bracket a zero of the slope field."""


class FrameNotCritical(ValidationFailure):
    """A supplied frame member fails the slope residual bound."""


class NotReached(ValidationFailure):
    """The unstable count has not settled to 2 by the end of the scan window."""


class InvariantViolation(AffineBodiesError):
    """A mathematical identity the code guarantees was violated."""


class PoincareHopfViolation(InvariantViolation):
    """Equilibrium counts break the Poincare-Hopf identity after reseeding."""


class ExcessiveDegeneracy(InvariantViolation):
    """More than the tolerated fraction of field rows failed to classify."""


class GraphSplitFailure(InvariantViolation):
    """Boundary normals degenerate; the graph-form area integral is unavailable."""


class MethodDisagreement(InvariantViolation):
    """Two independent evaluation routes disagree beyond tolerance."""
