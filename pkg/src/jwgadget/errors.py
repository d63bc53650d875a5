"""Exception types raised across the package."""


class JWGadgetError(Exception):
    """Base class for all errors raised by jwgadget."""


class UnclassifiableTerm(JWGadgetError, ValueError):
    pass


class IndexOutOfRange(JWGadgetError, IndexError):
    pass


class ParseError(JWGadgetError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class WidthMismatch(JWGadgetError, ValueError):
    pass


class ShapeMismatch(JWGadgetError, ValueError):
    pass


class DiagonalTermNotGadgetizable(JWGadgetError, ValueError):
    pass


class InsufficientDirtyAncillae(JWGadgetError, ValueError):
    def __init__(self, required: int, available: int):
        self.required = required
        self.available = available
        super().__init__(
            f"need {required} dirty ancillae, only {available} available"
        )


class DomainError(JWGadgetError, ValueError):
    pass


class RegisterTooLarge(JWGadgetError, ValueError):
    pass


class NonUnitary(JWGadgetError, ValueError):
    pass


class DimensionMismatch(JWGadgetError, ValueError):
    pass
