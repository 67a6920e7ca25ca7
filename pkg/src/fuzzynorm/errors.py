"""Exception hierarchy shared by all checkers."""


class FuzzyNormError(Exception):
    """Base class for every error raised by this package."""


class StructuralError(FuzzyNormError, ValueError):
    """Shapes or dimensions do not fit together, or a sample is degenerate."""


class DomainError(FuzzyNormError, ValueError):
    """An input lies outside the domain of an operation (NaN, p < 1, ...)."""


class ContractViolation(FuzzyNormError, RuntimeError):
    """A user-supplied evaluator broke a contract the library relies on."""
