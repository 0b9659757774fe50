"""Exception hierarchy shared by the whole package.

The CLI maps these onto exit codes: parse errors exit 2, computation
errors exit 3.
"""


class MotivicError(Exception):
    """Base class for every error raised on purpose by this package."""


class ParseError(MotivicError):
    """A syntax problem in DSL or polynomial text, with a 1-based position."""

    def __init__(self, message, line, col):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class LexError(ParseError):
    pass


class UndefinedNameError(ParseError):
    pass


class ComputationError(MotivicError):
    """Raised when a well-formed request cannot be computed."""


class NormalizationError(ComputationError):
    def __init__(self, diagnostic):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic


class BudgetExceededError(ComputationError):
    pass


class NotCountableError(ComputationError):
    pass


class TooFewPointsError(NotCountableError):
    pass


class NonHomogeneousError(ComputationError):
    pass


class NonIntegralFitError(ComputationError):
    pass
