class PglabError(Exception):
    """Base class for library errors."""


class DomainError(PglabError, ValueError):
    """Operation is undefined for the given input (e.g. inverting zero)."""


class PrecisionError(PglabError, ArithmeticError):
    """Not enough p-adic digits to produce a meaningful answer."""

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class HypothesisFailure(DomainError):
    """A precondition of the Wronskian proposition does not hold."""

    def __init__(self, message, failed):
        super().__init__(message)
        self.failed = failed


class Indeterminate(PglabError):
    """A rank or zero test cannot be decided at the working precision."""
