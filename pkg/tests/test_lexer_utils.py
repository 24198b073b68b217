"""Tests for the lexer."""

import pytest

from src.models import LexError, TokenKind
from src.utils.lexer_utils import split_integer_literal, tokenize


def kinds(tokens):
    return [t.kind for t in tokens]


def test_tokenize_pragma_line():
    """Test a pragma line is bracketed by pragma-intro and end-of-line tokens."""
    tokens = tokenize("#pragma omp unroll partial(2)\n")

    assert kinds(tokens) == [
        TokenKind.PRAGMA_INTRO,
        TokenKind.IDENTIFIER,
        TokenKind.IDENTIFIER,
        TokenKind.IDENTIFIER,
        TokenKind.PUNCTUATION,
        TokenKind.INTEGER_LITERAL,
        TokenKind.PUNCTUATION,
        TokenKind.PRAGMA_END,
        TokenKind.EOF,
    ]
    assert [t.text for t in tokens[1:7]] == ['omp', 'unroll', 'partial', '(', '2', ')']


def test_tokenize_locations():
    """Test tokens carry 1-based line and column positions."""
    tokens = tokenize("for (int i = 0;\n  i < 4; ++i)", 'loop.c')

    assert tokens[0].loc.file == 'loop.c'
    assert (tokens[0].loc.line, tokens[0].loc.column) == (1, 1)
    second_line = [t for t in tokens if t.loc.line == 2]
    assert second_line[0].text == 'i'
    assert second_line[0].loc.column == 3


def test_tokenize_keywords_and_punctuators():
    """Test keywords, identifiers and two-character punctuators."""
    tokens = tokenize("for (uint k = 0; k <= n; k += 2)")

    assert tokens[0].kind is TokenKind.KEYWORD
    assert tokens[2].kind is TokenKind.KEYWORD
    assert tokens[3].kind is TokenKind.IDENTIFIER
    assert '<=' in [t.text for t in tokens]
    assert '+=' in [t.text for t in tokens]


def test_tokenize_skips_comments():
    """Test line and block comments produce no tokens."""
    tokens = tokenize("// header\nbody(/* first */ 1); /* multi\nline */")

    assert [t.text for t in tokens[:-1]] == ['body', '(', '1', ')', ';']


def test_tokenize_pragma_continuation():
    """Test a backslash-newline keeps the pragma line open."""
    tokens = tokenize("#pragma omp tile \\\n    sizes(2)\nbody(1);")

    end = kinds(tokens).index(TokenKind.PRAGMA_END)
    assert [t.text for t in tokens[1:end]] == ['omp', 'tile', 'sizes', '(', '2', ')']


def test_tokenize_pragma_at_end_of_file():
    """Test a pragma on the last line without newline is still terminated."""
    tokens = tokenize("#pragma omp unroll")

    assert kinds(tokens)[-2:] == [TokenKind.PRAGMA_END, TokenKind.EOF]


def test_tokenize_dotted_identifier():
    """Test internal dotted names lex as one identifier."""
    tokens = tokenize("body(unrolled.iv.i);")

    assert tokens[2].kind is TokenKind.IDENTIFIER
    assert tokens[2].text == 'unrolled.iv.i'


def test_tokenize_unterminated_comment():
    """Test an unterminated block comment is rejected."""
    with pytest.raises(LexError) as exc_info:
        tokenize("body(1); /* never closed")

    assert str(exc_info.value) == "unterminated comment"
    assert exc_info.value.diagnostic.loc.column == 10


def test_tokenize_illegal_character():
    """Test an illegal character names the character."""
    with pytest.raises(LexError) as exc_info:
        tokenize("body($);")

    assert str(exc_info.value) == "illegal character '$'"


def test_tokenize_misplaced_pragma():
    """Test '#pragma' after other tokens on the same line is rejected."""
    with pytest.raises(LexError) as exc_info:
        tokenize("body(1); #pragma omp unroll\n")

    assert str(exc_info.value) == "'#pragma' must start a line"


def test_tokenize_stray_hash():
    """Test '#' that does not start a pragma is rejected."""
    with pytest.raises(LexError) as exc_info:
        tokenize("#define N 4\n")

    assert "only allowed to start a pragma line" in str(exc_info.value)


def test_tokenize_invalid_literal():
    """Test a literal with a bad suffix is a lexical error."""
    with pytest.raises(LexError) as exc_info:
        tokenize("body(12abc);")

    assert "invalid integer literal '12abc'" in str(exc_info.value)


def test_split_integer_literal():
    """Test literal values and suffixes."""
    assert split_integer_literal('17') == (17, '')
    assert split_integer_literal('0x10u') == (16, 'u')
    assert split_integer_literal('10UL') == (10, 'ul')
    assert split_integer_literal('0XffL') == (255, 'l')

    with pytest.raises(ValueError):
        split_integer_literal('0x')
