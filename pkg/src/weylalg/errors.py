class WeylError(Exception):
    """Base class for domain errors raised by weylalg.

    The CLI maps these to exit code 1 and prints the class name.
    """


class ZeroOperatorError(WeylError, ValueError):
    pass


class InexactDivisionError(WeylError, ArithmeticError):
    pass
