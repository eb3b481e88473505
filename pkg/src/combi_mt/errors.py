"""Exception hierarchy shared by every module.

Each class name doubles as the message prefix the CLI prints, so callers can
match on ``str(exc).split(":")[0]``.
"""

from __future__ import annotations


class CombiError(Exception):
    """Base class for domain errors (CLI exit status 1)."""

    def __str__(self) -> str:
        msg = super().__str__()
        return f"{type(self).__name__}: {msg}" if msg else type(self).__name__


class FormulaSyntaxError(CombiError):
    def __init__(self, message: str, position: int, expected: tuple[str, ...] = ()):
        self.position = position
        self.expected = expected
        detail = f"{message} at position {position}"
        if expected:
            detail += f" (expected one of: {', '.join(expected)})"
        super().__init__(detail)


class UnknownSymbol(CombiError):
    pass


class ArityMismatch(CombiError):
    pass


class SignatureMismatch(CombiError):
    pass


class UnboundVariable(CombiError):
    pass


class EmptyUniverse(CombiError):
    pass


class StructureFormatError(CombiError):
    pass


class DuplicateTag(CombiError):
    pass


class SymbolClash(CombiError):
    pass


class UnknownTag(CombiError):
    pass


class NotAnECombination(CombiError):
    pass


class NotAPCombination(CombiError):
    pass


class ArityError(CombiError):
    pass


class SigmaArity(CombiError):
    pass


class NotSeparable(CombiError):
    pass


class WitnessMismatch(CombiError):
    pass


class ZeroFactor(CombiError):
    pass


class BoundExceeded(CombiError):
    pass


class UndefinedIndex(CombiError):
    pass


class UnknownKind(CombiError):
    pass
