"""Exception types shared across the package."""


class OpilabError(Exception):
    pass


class DomainError(OpilabError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class BudgetExceededError(OpilabError, RuntimeError):
    """An exact enumeration would exceed the configured budget."""


class IdentityViolationError(OpilabError, AssertionError):
    """Two independent routes to the same quantity disagree.

    This is the strongest failure class: it means an exact identity the
    toolkit is built to check does not hold on a concrete instance.
    """

    def __init__(self, message, instance=None):
        super().__init__(message)
        self.instance = instance
