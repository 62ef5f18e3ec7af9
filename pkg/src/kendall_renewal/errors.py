"""Exception hierarchy shared by all modules.

Each class carries an ``exit_code`` so the command line front end can map
failures to distinct process exit statuses without a lookup table.
"""


class KendallError(Exception):
    exit_code = 10


class ParameterError(KendallError, ValueError):
    """Invalid model parameters or inputs outside an operation's domain."""

    exit_code = 2


class CatalogLookupError(KendallError, KeyError):
    exit_code = 3

    def __str__(self):
        # KeyError quotes its argument; keep messages one plain line.
        return str(self.args[0]) if self.args else ""


class DivergenceError(KendallError, ArithmeticError):
    """A transform or series is evaluated at (or beyond) its pole."""

    exit_code = 4


class IntegrationError(KendallError, RuntimeError):
    exit_code = 5


class RunawayError(KendallError, RuntimeError):
    """A simulation hit ``max_steps`` before the stopping event occurred."""

    exit_code = 6


class OutOfScopeError(KendallError, ValueError):
    """The requested theorem does not apply to the supplied law."""

    exit_code = 7


class DegenerateConditionError(KendallError, ZeroDivisionError):
    exit_code = 8


class PrecisionWarning(UserWarning):
    pass
