"""Exception hierarchy shared by all modules.

Each class carries an ``exit_code`` used by the command line front end.
"""


class CombitriError(Exception):
    exit_code = 1


class ParseError(CombitriError):
    exit_code = 2


class ComplexError(CombitriError):
    """Malformed complex or bad query against one."""

    exit_code = 2


class NotPure(ComplexError):
    pass


class DuplicateFacet(ComplexError):
    pass


class BadVertexId(ComplexError):
    pass


class NotAFace(ComplexError):
    exit_code = 3


class NotAFacet(ComplexError):
    exit_code = 3


class VertexClash(ComplexError):
    exit_code = 3


class NotPseudomanifold(ComplexError):
    exit_code = 4


class PreconditionError(CombitriError):
    exit_code = 4


class DegenerateDouble(PreconditionError):
    pass


class ClosedInput(PreconditionError):
    pass


class NotClosed(PreconditionError):
    pass


class BoundaryMismatch(PreconditionError):
    pass


class DimensionMismatch(PreconditionError):
    pass


class ChiMismatch(PreconditionError):
    pass


class ChiBoundaryMismatch(ChiMismatch):
    pass


class ResidualNonzero(PreconditionError):
    pass


class BadType(PreconditionError):
    pass


class UnsupportedDimension(PreconditionError):
    pass


class NoExposedFacet(PreconditionError):
    pass


class UnknownFixture(PreconditionError):
    pass


class IllegalMove(CombitriError):
    """Raised with a ``witness`` describing the violated condition."""

    exit_code = 3

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class IllegalShelling(IllegalMove):
    pass


class EmptyResult(IllegalMove):
    pass


class InternalAssertFailed(CombitriError):
    exit_code = 5


class NonIntegralCoefficient(InternalAssertFailed):
    pass


class VerificationFailed(InternalAssertFailed):
    pass


class ReplayMismatch(InternalAssertFailed):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class BudgetExhausted(CombitriError):
    exit_code = 6
