"""Exception hierarchy shared by all modules."""


class InboxError(Exception):
    """Base class for every error raised by this package."""


class InputError(InboxError, ValueError):
    """Malformed or out-of-range input (bad shapes, parameters, JSON)."""


class ValidationError(InputError):
    """A geometric object violates its construction invariants."""


class UnboundedError(InboxError):
    """The convex set is not compact in a queried direction."""


class InfeasibleError(InboxError):
    """No strictly feasible point could be constructed (empty interior)."""


class CapabilityError(InboxError):
    """The request is valid but exceeds a documented implementation limit."""


class ConditioningError(InboxError, ArithmeticError):
    """A Newton system was not numerically positive definite.

    The offending iterate is kept on ``iterate`` when known.
    """

    def __init__(self, message, iterate=None):
        super().__init__(message)
        self.iterate = iterate
