"""Token model produced by the mini-language lexer."""

from dataclasses import dataclass
from enum import Enum

from .SourceLocation import SourceLocation


class TokenKind(Enum):
    """Kinds of tokens the lexer produces."""

    IDENTIFIER = 'identifier'
    INTEGER_LITERAL = 'integer-literal'
    PUNCTUATION = 'punctuation'
    KEYWORD = 'keyword'
    PRAGMA_INTRO = 'pragma-intro'
    PRAGMA_END = 'end-of-line-in-pragma'
    EOF = 'end-of-file'


@dataclass(frozen=True)
class Token:
    """A single lexical token.

    Attributes:
        kind (TokenKind): Token category
        text (str): Exact source spelling (empty for end markers)
        loc (SourceLocation): Location of the first character
    """

    kind: TokenKind
    text: str
    loc: SourceLocation

    def is_punct(self, text: str) -> bool:
        return self.kind is TokenKind.PUNCTUATION and self.text == text

    def is_word(self, text: str) -> bool:
        """True for identifiers and keywords spelled ``text``."""
        return self.kind in (TokenKind.IDENTIFIER, TokenKind.KEYWORD) and self.text == text

    def describe(self) -> str:
        """Human-readable name used in syntax errors."""
        if self.kind is TokenKind.EOF:
            return 'end of file'
        if self.kind is TokenKind.PRAGMA_END:
            return 'end of pragma line'
        return f"'{self.text}'"

    def __repr__(self) -> str:
        return f"Token({self.kind.value}, {self.text!r}, {self.loc})"
