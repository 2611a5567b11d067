"""Exception hierarchy shared by every module."""


class ValidationError(ValueError):
    """Input violates a documented precondition."""


class ZeroProbabilityError(ValidationError):
    """Conditioning on an outcome whose probability vanishes."""


class DegenerateBoundError(ValidationError):
    """The Robertson lower bound is undefined (vanishing variance of A)."""


class AccuracyError(ArithmeticError):
    """A numerical procedure failed to reach the requested accuracy."""
