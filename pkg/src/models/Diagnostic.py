"""Diagnostic model and the exception hierarchy that carries diagnostics."""

from dataclasses import dataclass
from enum import Enum

from .SourceLocation import BUILTIN_LOC, SourceLocation


class Severity(Enum):
    ERROR = 'error'
    WARNING = 'warning'
    NOTE = 'note'


@dataclass(frozen=True)
class Diagnostic:
    """A compiler message with an optional chain of explanatory notes.

    Attributes:
        severity (Severity): error, warning or note
        message (str): Message text; never contains internal variable names
        loc (SourceLocation): Where the problem is reported
        notes (tuple[Diagnostic]): Provenance chain, each of severity note
    """

    severity: Severity
    message: str
    loc: SourceLocation = BUILTIN_LOC
    notes: tuple['Diagnostic', ...] = ()

    def __post_init__(self):
        for note in self.notes:
            if note.severity is not Severity.NOTE:
                raise ValueError("Diagnostic notes must have severity 'note'")

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    @classmethod
    def error(cls, message: str, loc: SourceLocation = BUILTIN_LOC, notes=()) -> 'Diagnostic':
        return cls(Severity.ERROR, message, loc, tuple(notes))

    @classmethod
    def warning(cls, message: str, loc: SourceLocation = BUILTIN_LOC, notes=()) -> 'Diagnostic':
        return cls(Severity.WARNING, message, loc, tuple(notes))

    @classmethod
    def note(cls, message: str, loc: SourceLocation = BUILTIN_LOC) -> 'Diagnostic':
        return cls(Severity.NOTE, message, loc)

    def to_dict(self) -> dict:
        return {
            'severity': self.severity.value,
            'message': self.message,
            'loc': self.loc.to_dict(),
            'notes': [n.to_dict() for n in self.notes],
        }


class LoompError(Exception):
    """Base of all domain errors; carries the diagnostic to report."""

    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic

    @classmethod
    def at(cls, message: str, loc: SourceLocation = BUILTIN_LOC, notes=()) -> 'LoompError':
        return cls(Diagnostic.error(message, loc, notes))


class LexError(LoompError):
    pass


class ParseError(LoompError):
    pass


class SemaError(LoompError):
    """Semantic error; may carry several diagnostics."""

    def __init__(self, diagnostic: Diagnostic, extra: tuple[Diagnostic, ...] = ()):
        super().__init__(diagnostic)
        self.diagnostics = (diagnostic,) + tuple(extra)


class LoopNestDepthError(SemaError):
    pass


class TransformError(LoompError):
    pass


class IRError(LoompError):
    pass


class InvalidHandleError(IRError):
    pass


class ImperfectNestError(IRError):
    pass


class IRParseError(IRError):
    pass


class InterpreterError(LoompError):
    pass


class StepLimitExceeded(InterpreterError):
    pass


class DivisionByZeroError(InterpreterError):
    pass


class UnboundVariableError(InterpreterError):
    pass


class MalformedPhiError(InterpreterError):
    pass
