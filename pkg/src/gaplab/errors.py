"""Exception types shared by every gaplab module."""


class GapLabError(Exception):
    """Base class for errors raised by gaplab."""


class DomainError(GapLabError, ValueError):
    """An input lies outside the domain of the requested operation."""


class ConstraintViolation(GapLabError):
    """A derived quantity fails a mathematical side condition.

    Unlike :class:`DomainError` the inputs were well formed; the chain of
    formulas simply does not close for them (e.g. a separation fraction
    ``epsilon >= 1`` or an infeasible thinning exponent ``m``).
    """

    def __init__(self, message, *, quantity=None, value=None):
        super().__init__(message)
        self.quantity = quantity
        self.value = value


class ConditioningError(GapLabError, ArithmeticError):
    """A floating point linear-algebra step is numerically unreliable."""


class SieveCapError(GapLabError, MemoryError):
    """A sieve request exceeds the configured memory cap."""
