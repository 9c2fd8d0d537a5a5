class YoungkitError(Exception):
    """Base class for every error raised by youngkit"""


class DomainError(YoungkitError, ValueError):
    """An argument lies outside a domain, box or codomain"""


class PreconditionError(YoungkitError, ValueError):
    """A hypothesis of the inequality being checked does not hold"""


class UnsupportedDimensionError(PreconditionError):
    """The higher dimensional analogue was requested outside 2 <= n <= settings.max_ndim"""


class ConfigError(YoungkitError, ValueError):
    """A JSON description is malformed

    :param field: Dotted path of the offending field.
    :param msg: What is wrong with it.
    """
    def __init__(self, field: str, msg: str):
        self.field = field
        super().__init__("{}: {}".format(field, msg))


class ConvergenceError(YoungkitError, ArithmeticError):
    """An adaptive integral did not meet its tolerance

    :param estimate: Best estimate of the integral when the subdivision budget ran out.
    :param error: Error estimate of `estimate`.
    :param context: Name of the integral that failed, filled in by the caller.
    """
    def __init__(self, estimate: float, error: float, context: str = ""):
        self.estimate = estimate
        self.error = error
        self.context = context
        super().__init__(self._message())

    def _message(self):
        msg = "tolerance not met (estimate {:.17g}, error {:.3g})".format(self.estimate, self.error)
        if self.context:
            msg = "{}: {}".format(self.context, msg)
        return msg

    def with_context(self, context: str) -> "ConvergenceError":
        """Return a copy of the error whose context is prefixed by `context`"""
        if self.context:
            context = "{} > {}".format(context, self.context)
        return ConvergenceError(self.estimate, self.error, context)
