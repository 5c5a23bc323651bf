"""Exception types raised across the package."""


class Fermat223Error(Exception):
    """Base class for all package errors."""


class ZeroInverse(Fermat223Error, ZeroDivisionError):
    pass


class NonResidue(Fermat223Error, ValueError):
    pass


class KNotDividing(Fermat223Error, ValueError):
    pass


class NotPrime(Fermat223Error, ValueError):
    pass


class SingularCurve(Fermat223Error, ValueError):
    pass


class SingularAlpha(SingularCurve):
    pass


class ConstraintViolation(Fermat223Error, ValueError):
    pass


class ZeroArgument(Fermat223Error, ValueError):
    pass


class BothZero(Fermat223Error, ValueError):
    pass


class InvalidL(Fermat223Error, ValueError):
    pass


class NotPassed(Fermat223Error, ValueError):
    pass


class ParseError(Fermat223Error, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SchemaVersionMismatch(ParseError):
    pass
