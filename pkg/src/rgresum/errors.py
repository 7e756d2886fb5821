"""Exception hierarchy shared by all rgresum modules."""


class RgResumError(Exception):
    """Base class for all library errors."""


class InvalidInputError(RgResumError):
    """Base class for precondition violations (bad arguments, bad domains)."""


class NonzeroInnerConstant(InvalidInputError):
    """Inner series of a composition has a nonzero constant term."""


class ZeroLinearCoefficient(InvalidInputError):
    """Operation requires a nonzero linear coefficient a1."""


class InsufficientOrder(InvalidInputError):
    """Series is truncated below the order an operation needs."""


class DomainError(InvalidInputError):
    """Evaluation point lies outside the validity domain of a closed form."""


class NegativeCoupling(InvalidInputError):
    """Coupling constants must be nonnegative."""


class NumericalError(RgResumError):
    """Base class for runtime numerical failures."""


class ConvergenceFailure(NumericalError):
    """An iterative numerical procedure failed to reach its tolerance."""


class NoRootInBracket(NumericalError):
    """A root bracket does not enclose a sign change."""
