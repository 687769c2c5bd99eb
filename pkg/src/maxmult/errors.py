"""Exception hierarchy.

CLI exit codes hang off ``exit_code``: 2 for input errors, 3 for refuted or
non-permissible situations, 4 for budget/inconclusive outcomes.
"""


class MaxMultError(Exception):
    exit_code = 3


class ParseError(MaxMultError, ValueError):
    exit_code = 2

    def __init__(self, message, pos=None, text=None):
        self.pos = pos
        self.text = text
        if pos is not None:
            message = f"{message} at position {pos}"
        super().__init__(message)


class UnknownVariableError(ParseError):
    pass


class NonInvertibleCoefficientError(ParseError):
    pass


class BudgetExceeded(MaxMultError):
    exit_code = 4

    def __init__(self, limit, used):
        self.limit = limit
        self.used = used
        super().__init__(f"budget exceeded: {used} reduction steps (limit {limit})")


class UndefinedOrderError(MaxMultError, ValueError):
    """Order of the zero polynomial / zero ideal is infinite."""


class NotPermissibleError(MaxMultError):
    pass


class NotInSingularLocusError(MaxMultError, ValueError):
    pass


class NotYetPolynomialError(MaxMultError):
    exit_code = 4


class NonPrimaryError(MaxMultError, ValueError):
    pass


class StratumEmptyError(MaxMultError):
    pass


class FiberDataError(MaxMultError, ValueError):
    pass
