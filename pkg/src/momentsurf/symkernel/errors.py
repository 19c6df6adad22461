"""Exceptions raised by the symbolic kernel."""


class SymkernelError(Exception):
    """Base class for kernel failures."""


class DslSyntaxError(SymkernelError):
    def __init__(self, message: str, offset: int, text: str = ""):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.text = text


class UnknownNameError(SymkernelError):
    def __init__(self, name: str, offset: int | None = None):
        where = "" if offset is None else f" at offset {offset}"
        super().__init__(f"unknown name {name!r}{where}")
        self.name = name
        self.offset = offset


class ZeroDenominatorError(SymkernelError, ZeroDivisionError):
    """A denominator is identically zero."""


class SingularSystemError(SymkernelError):
    """A linear system has identically vanishing determinant."""


class NotLinearError(SymkernelError):
    """The unknown does not enter the expression linearly."""


class SizeLimitError(SymkernelError):
    """An intermediate polynomial exceeded the configured term bound."""


class MissingRuleError(SymkernelError):
    """A derivation met a variable it has no rule for."""
