"""SourceLocation model for positions in mini-language source files."""

from dataclasses import dataclass


@dataclass(frozen=True)
class SourceLocation:
    """A 1-based position inside a source file.

    Attributes:
        file (str): Name of the source file
        line (int): 1-based line number
        column (int): 1-based column number
    """

    file: str
    line: int
    column: int

    def __post_init__(self):
        if self.line < 1 or self.column < 1:
            raise ValueError(f"Invalid source location {self.line}:{self.column} (must be 1-based)")

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"

    def to_dict(self) -> dict:
        """Convert SourceLocation to dictionary representation."""
        return {'file': self.file, 'line': self.line, 'column': self.column}

    @classmethod
    def from_dict(cls, data: dict) -> 'SourceLocation':
        """Create SourceLocation instance from dictionary."""
        return cls(
            file=data.get('file', '<unknown>'),
            line=data.get('line', 1),
            column=data.get('column', 1)
        )


# Location attached to nodes that do not come from any file
BUILTIN_LOC = SourceLocation('<builtin>', 1, 1)
