"""Exception hierarchy shared by all modules."""


class HiggsTwistError(Exception):
    """Base class for every error raised by this package."""


class ParamMismatch(HiggsTwistError):
    pass


class BadParams(HiggsTwistError, ValueError):
    pass


class DivisionByZero(HiggsTwistError, ZeroDivisionError):
    pass


class NotDivisibleByP(HiggsTwistError, ArithmeticError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class TagMismatch(HiggsTwistError):
    pass


class WrongLevel(HiggsTwistError):
    pass


class BadIndex(HiggsTwistError, IndexError):
    pass


class ExponentOverflow(HiggsTwistError, OverflowError):
    pass


class NotAUnit(HiggsTwistError, ArithmeticError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NonInvertibleImage(NotAUnit):
    pass


class ShapeMismatch(HiggsTwistError, ValueError):
    pass


class NotInvertible(HiggsTwistError, ArithmeticError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ExponentTooLarge(HiggsTwistError, ValueError):
    pass


class NotNilpotentToOrder(HiggsTwistError, ArithmeticError):
    pass


class PolynomialSyntaxError(HiggsTwistError, ValueError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at column {position})"
        super().__init__(message)
        self.position = position


class ManifestError(HiggsTwistError, ValueError):
    """Located manifest error: ``path`` is a field path like ``patches[1].lift[0]``."""

    def __init__(self, message, path=None, line=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if path:
            where.append(path)
        if where:
            message = f"{', '.join(where)}: {message}"
        super().__init__(message)
        self.path = path
        self.line = line


class UnknownExample(HiggsTwistError, KeyError):
    def __init__(self, name, available):
        super().__init__(f"unknown example {name!r}; available: {', '.join(available)}")
        self.available = list(available)

    def __str__(self):
        return self.args[0]
