"""Exception hierarchy shared by every module."""


class DSheafError(Exception):
    """Base class for all errors raised by :mod:`dsheaf`."""


class DomainError(DSheafError, ValueError):
    """Input outside the mathematical domain of an operation."""


class ContractViolation(DomainError):
    """A caller broke an operation's precondition (e.g. non-monic input)."""


class BudgetExceeded(DSheafError):
    """An enumeration would exceed the configured resource budget."""

    def __init__(self, budget_name, limit, requested):
        self.budget_name = budget_name
        self.limit = limit
        self.requested = requested
        super().__init__(
            f"budget {budget_name!r} exceeded: requested {requested}, limit {limit} "
            f"(override with DSHEAF_BUDGET)"
        )


class InvariantViolation(DSheafError, RuntimeError):
    """An internal invariant failed, e.g. a contracted integer came out fractional."""


class ReferenceDataError(DSheafError, ValueError):
    """Malformed or inconsistent reference CSV."""
