"""Lexical analysis of mini-language source files.

Pragma lines are tokenized in a line-bounded mode: a ``#pragma`` at the
start of a line produces a pragma-intro token, and the end of that line
produces an end-of-line-in-pragma token.
"""

import logging
import re

from ..models.Diagnostic import LexError
from ..models.SourceLocation import SourceLocation
from ..models.Token import Token, TokenKind

logger = logging.getLogger(__name__)

KEYWORDS = {'for', 'if', 'else', 'int', 'uint', 'long', 'ulong'}

PUNCTUATORS = [
    '++', '--', '+=', '-=', '==', '!=', '<=', '>=', '&&', '||',
    '(', ')', '{', '}', ';', ',', '=', '<', '>', '+', '-', '*', '/', '%', '!', '?', ':',
]

TOKEN_SPEC = [
    ('NEWLINE', r'\n'),
    ('CONTINUATION', r'\\\r?\n'),
    ('SKIP', r'[ \t\r\f\v]+'),
    ('LINE_COMMENT', r'//[^\n]*'),
    ('BLOCK_COMMENT', r'/\*.*?\*/'),
    ('OPEN_COMMENT', r'/\*'),
    ('PRAGMA', r'\#[ \t]*pragma\b'),
    ('NUMBER', r'(?:0[xX][0-9a-fA-F]*|\d+)[A-Za-z0-9_]*'),
    ('ID', r'[A-Za-z_]\w*(?:\.[A-Za-z_]\w*)*'),
    ('PUNCT', '|'.join(re.escape(p) for p in PUNCTUATORS)),
    ('MISMATCH', r'.'),
]

TOKEN_REGEX = re.compile('|'.join(f"(?P<{name}>{pattern})" for name, pattern in TOKEN_SPEC), re.DOTALL)

INTEGER_REGEX = re.compile(r'^(?P<digits>0[xX][0-9a-fA-F]+|\d+)(?P<suffix>[uU]?[lL]?|[lL][uU])$')


def split_integer_literal(text: str) -> tuple[int, str]:
    """Split an integer-literal spelling into its value and suffix.

    Args:
        text: Literal as written, e.g. ``0x10u``

    Returns:
        tuple[int, str]: (value, lower-cased suffix)

    Raises:
        ValueError: If the spelling is not a valid literal
    """
    match = INTEGER_REGEX.match(text)
    if not match:
        raise ValueError(f"invalid integer literal '{text}'")
    digits = match.group('digits')
    value = int(digits, 16) if digits[:2].lower() == '0x' else int(digits, 10)
    return value, match.group('suffix').lower()


def tokenize(source: str, filename: str = '<input>') -> list[Token]:
    """Tokenize mini-language source into a full token stream.

    Comments and whitespace are discarded; the stream always ends with an
    end-of-file token.

    Args:
        source: Source text
        filename: File name recorded in every token location

    Returns:
        list[Token]: Tokens in source order

    Raises:
        LexError: On an illegal character, an unterminated comment, an
            invalid integer literal or a misplaced ``#``
    """
    tokens: list[Token] = []
    line, line_start = 1, 0
    in_pragma = False
    line_has_tokens = False

    def location(pos: int) -> SourceLocation:
        return SourceLocation(filename, line, pos - line_start + 1)

    for match in TOKEN_REGEX.finditer(source):
        kind = match.lastgroup
        text = match.group()
        loc = location(match.start())

        if kind in ('NEWLINE', 'CONTINUATION', 'BLOCK_COMMENT'):
            if kind == 'NEWLINE' and in_pragma:
                tokens.append(Token(TokenKind.PRAGMA_END, '', loc))
                in_pragma = False
            newlines = text.count('\n')
            if newlines:
                line += newlines
                line_start = match.start() + text.rindex('\n') + 1
                if kind == 'NEWLINE':
                    line_has_tokens = False
            continue
        if kind in ('SKIP', 'LINE_COMMENT'):
            continue
        if kind == 'OPEN_COMMENT':
            raise LexError.at("unterminated comment", loc)
        if kind == 'MISMATCH':
            if text == '#':
                raise LexError.at("'#' is only allowed to start a pragma line", loc)
            raise LexError.at(f"illegal character {text!r}", loc)

        if kind == 'PRAGMA':
            if line_has_tokens or in_pragma:
                raise LexError.at("'#pragma' must start a line", loc)
            tokens.append(Token(TokenKind.PRAGMA_INTRO, text, loc))
            in_pragma = True
        elif kind == 'NUMBER':
            try:
                split_integer_literal(text)
            except ValueError as e:
                raise LexError.at(str(e), loc) from None
            tokens.append(Token(TokenKind.INTEGER_LITERAL, text, loc))
        elif kind == 'ID':
            token_kind = TokenKind.KEYWORD if text in KEYWORDS else TokenKind.IDENTIFIER
            tokens.append(Token(token_kind, text, loc))
        else:
            tokens.append(Token(TokenKind.PUNCTUATION, text, loc))
        line_has_tokens = True

    end_loc = location(len(source))
    if in_pragma:
        tokens.append(Token(TokenKind.PRAGMA_END, '', end_loc))
    tokens.append(Token(TokenKind.EOF, '', end_loc))
    logger.debug(f"Tokenized {filename}: {len(tokens)} tokens")
    return tokens
