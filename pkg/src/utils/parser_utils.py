"""Recursive-descent parser for the mini language and its pragmas.

Directives bind to the statement that follows them; consecutive pragma
lines stack with the outermost directive first.
"""

import logging

from ..models.Diagnostic import ParseError
from ..models.Expr import (
    Cast,
    Expr,
    IntLiteral,
    VarRef,
    convert,
    make_binary,
    make_conditional,
    make_unary,
)
from ..models.IntType import INT, LONG, TYPE_KEYWORDS, UINT, ULONG, IntType
from ..models.SourceLocation import SourceLocation
from ..models.Stmt import (
    Assign,
    AttributedStmt,
    CallBody,
    CollapseClause,
    Compound,
    Directive,
    DirectiveKind,
    ForStmt,
    FullClause,
    IfStmt,
    IncDec,
    LoopHintAttr,
    PartialClause,
    Program,
    ScheduleClause,
    SizesClause,
    Stmt,
    VarDecl,
)
from ..models.Token import Token, TokenKind
from .lexer_utils import split_integer_literal, tokenize

logger = logging.getLogger(__name__)

# Binary operator precedence, lowest first
PRECEDENCE = [('||',), ('&&',), ('==', '!='), ('<', '<=', '>', '>='), ('+', '-'), ('*', '/', '%')]

DIRECTIVE_CLAUSES = {
    DirectiveKind.UNROLL: ('full', 'partial'),
    DirectiveKind.TILE: ('sizes',),
    DirectiveKind.WORKSHARE_FOR: ('schedule', 'collapse'),
}


def literal_type(value: int, suffix: str, hex_literal: bool) -> IntType:
    """Type of an integer literal following C's first-that-fits rule.

    Raises:
        ValueError: If no type of the language can hold the value
    """
    if suffix in ('ul', 'lu'):
        candidates = [ULONG]
    elif suffix == 'u':
        candidates = [UINT, ULONG]
    elif suffix == 'l':
        candidates = [LONG, ULONG] if hex_literal else [LONG]
    else:
        candidates = [INT, UINT, LONG, ULONG] if hex_literal else [INT, LONG]
    for candidate in candidates:
        if candidate.fits(value):
            return candidate
    raise ValueError(f"integer literal {value} is too large for any integer type")


class Parser:
    """Parser over a token list; the token list is never modified."""

    def __init__(self, tokens: list[Token]):
        if not tokens or tokens[-1].kind is not TokenKind.EOF:
            raise ValueError("Token stream must end with an end-of-file token")
        self.tokens = tokens
        self.pos = 0
        self.scopes: list[dict[str, VarDecl]] = [{}]
        self.decls: list[VarDecl] = []

    # Token helpers

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind is not TokenKind.EOF:
            self.pos += 1
        return token

    def error(self, expected: str, token: Token | None = None) -> ParseError:
        token = token or self.current
        return ParseError.at(f"expected {expected}, found {token.describe()}", token.loc)

    def expect_punct(self, text: str) -> Token:
        if not self.current.is_punct(text):
            raise self.error(f"'{text}'")
        return self.advance()

    def expect_word(self, text: str) -> Token:
        if not self.current.is_word(text):
            raise self.error(f"'{text}'")
        return self.advance()

    def expect_identifier(self) -> Token:
        if self.current.kind is not TokenKind.IDENTIFIER:
            raise self.error('identifier')
        return self.advance()

    def accept_punct(self, text: str) -> bool:
        if self.current.is_punct(text):
            self.advance()
            return True
        return False

    # Scopes

    def declare(self, name: str, type_: IntType, init: Expr | None, loc: SourceLocation) -> VarDecl:
        decl = VarDecl(name, type_, convert(init, type_) if init is not None else None,
                       len(self.decls), loc=loc)
        self.scopes[-1][name] = decl
        self.decls.append(decl)
        return decl

    def lookup(self, name: str) -> VarDecl | None:
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        return None

    def var_ref(self, token: Token) -> VarRef:
        decl = self.lookup(token.text)
        if decl is None:
            return VarRef(token.text, INT, None, loc=token.loc)
        return VarRef(token.text, decl.type, decl.decl_id, loc=token.loc)

    # Program and statements

    def parse_program(self, filename: str) -> Program:
        start = self.current.loc
        stmts = []
        while self.current.kind is not TokenKind.EOF:
            stmts.append(self.parse_statement())
        return Program(tuple(stmts), tuple(self.decls), filename, loc=start)

    def parse_statement(self) -> Stmt:
        token = self.current
        if token.kind is TokenKind.PRAGMA_INTRO:
            return self.parse_pragma()
        if token.kind is TokenKind.PRAGMA_END:
            raise self.error('statement')
        if token.is_word('for'):
            return self.parse_for()
        if token.is_word('if'):
            return self.parse_if()
        if token.is_punct('{'):
            return self.parse_compound()
        if token.kind is TokenKind.KEYWORD and token.text in TYPE_KEYWORDS:
            decl = self.parse_declaration()
            self.expect_punct(';')
            return decl
        stmt = self.parse_simple_statement()
        self.expect_punct(';')
        return stmt

    def parse_compound(self) -> Compound:
        start = self.expect_punct('{')
        self.scopes.append({})
        stmts = []
        while not self.current.is_punct('}'):
            if self.current.kind is TokenKind.EOF:
                raise self.error("'}'")
            stmts.append(self.parse_statement())
        self.advance()
        self.scopes.pop()
        return Compound(tuple(stmts), loc=start.loc)

    def parse_declaration(self) -> VarDecl:
        type_token = self.advance()
        name = self.expect_identifier()
        init = None
        if self.accept_punct('='):
            init = self.parse_expression()
        return self.declare(name.text, TYPE_KEYWORDS[type_token.text], init, type_token.loc)

    def parse_simple_statement(self) -> Stmt:
        """Assignment, increment/decrement or ``body(...)`` call."""
        token = self.current
        if token.is_punct('++') or token.is_punct('--'):
            self.advance()
            target = self.var_ref(self.expect_identifier())
            return IncDec(target, token.text, True, loc=token.loc)
        if token.kind is not TokenKind.IDENTIFIER:
            raise self.error('statement')
        if token.text == 'body' and self.peek().is_punct('('):
            return self.parse_call()
        target = self.var_ref(self.advance())
        op = self.current
        if op.is_punct('++') or op.is_punct('--'):
            self.advance()
            return IncDec(target, op.text, False, loc=token.loc)
        if op.is_punct('=') or op.is_punct('+=') or op.is_punct('-='):
            self.advance()
            value = self.parse_expression()
            if op.text == '=':
                value = convert(value, target.type)
            return Assign(target, op.text, value, loc=token.loc)
        raise self.error("'=', '+=', '-=', '++' or '--'")

    def parse_call(self) -> CallBody:
        name = self.advance()
        self.expect_punct('(')
        args = []
        if not self.current.is_punct(')'):
            args.append(self.parse_expression())
            while self.accept_punct(','):
                args.append(self.parse_expression())
        self.expect_punct(')')
        return CallBody(tuple(args), loc=name.loc)

    def parse_for(self) -> ForStmt:
        start = self.advance()
        self.expect_punct('(')
        self.scopes.append({})
        init = None
        if not self.current.is_punct(';'):
            if self.current.kind is TokenKind.KEYWORD and self.current.text in TYPE_KEYWORDS:
                init = self.parse_declaration()
            else:
                init = self.parse_simple_statement()
        self.expect_punct(';')
        cond = self.parse_expression()
        self.expect_punct(';')
        incr = self.parse_simple_statement()
        self.expect_punct(')')
        body = self.parse_statement()
        self.scopes.pop()
        return ForStmt(init, cond, incr, body, loc=start.loc)

    def parse_if(self) -> IfStmt:
        start = self.advance()
        self.expect_punct('(')
        cond = self.parse_expression()
        self.expect_punct(')')
        then = self.parse_statement()
        otherwise = None
        if self.current.is_word('else'):
            self.advance()
            otherwise = self.parse_statement()
        return IfStmt(cond, then, otherwise, loc=start.loc)

    # Pragmas

    def parse_pragma(self) -> Stmt:
        intro = self.advance()
        namespace = self.current
        if namespace.is_word('omp'):
            self.advance()
            kind, parallel, clauses = self.parse_omp_directive()
            self.end_pragma()
            associated = self.parse_associated(intro)
            return Directive(kind, tuple(clauses), associated, parallel, loc=intro.loc)
        if namespace.is_word('clang'):
            self.advance()
            self.expect_word('loop')
            hint = self.parse_loop_hint()
            self.end_pragma()
            return AttributedStmt((hint,), self.parse_associated(intro), loc=intro.loc)
        raise self.error("'omp' or 'clang loop' after '#pragma'")

    def end_pragma(self) -> None:
        if self.current.kind is not TokenKind.PRAGMA_END:
            raise self.error('end of pragma line')
        self.advance()

    def parse_associated(self, intro: Token) -> Stmt:
        if self.current.kind is TokenKind.EOF or self.current.is_punct('}'):
            raise ParseError.at("expected statement after directive", intro.loc)
        return self.parse_statement()

    def parse_omp_directive(self) -> tuple[DirectiveKind, bool, list]:
        name = self.current
        parallel = False
        if name.is_word('parallel'):
            self.advance()
            if not self.current.is_word('for'):
                raise self.error("'for' after 'parallel'")
            parallel = True
        try:
            kind = DirectiveKind(self.current.text) if self.current.kind in (
                TokenKind.IDENTIFIER, TokenKind.KEYWORD) else None
        except ValueError:
            kind = None
        if kind is None:
            raise ParseError.at(f"unknown OpenMP directive {self.current.describe()}", self.current.loc)
        directive_name = self.advance().text
        clauses = []
        while self.current.kind is not TokenKind.PRAGMA_END:
            if self.current.kind is TokenKind.EOF:
                raise self.error('end of pragma line')
            if clauses and self.accept_punct(','):
                continue
            clauses.append(self.parse_clause(kind, directive_name))
        return kind, parallel, clauses

    def parse_clause(self, kind: DirectiveKind, directive_name: str):
        token = self.current
        if token.kind not in (TokenKind.IDENTIFIER, TokenKind.KEYWORD) or \
                token.text not in DIRECTIVE_CLAUSES[kind]:
            raise ParseError.at(
                f"unknown clause {token.describe()} for directive '{directive_name}'", token.loc
            )
        self.advance()
        if token.text == 'full':
            return FullClause(loc=token.loc)
        if token.text == 'partial':
            factor = None
            if self.accept_punct('('):
                factor = self.parse_expression()
                self.expect_punct(')')
            return PartialClause(factor, loc=token.loc)
        if token.text == 'sizes':
            self.expect_punct('(')
            sizes = [self.parse_expression()]
            while self.accept_punct(','):
                sizes.append(self.parse_expression())
            self.expect_punct(')')
            return SizesClause(tuple(sizes), loc=token.loc)
        if token.text == 'schedule':
            self.expect_punct('(')
            self.expect_word('static')
            chunk = self.parse_expression() if self.accept_punct(',') else None
            self.expect_punct(')')
            return ScheduleClause('static', chunk, loc=token.loc)
        self.expect_punct('(')
        depth = self.parse_expression()
        self.expect_punct(')')
        return CollapseClause(depth, loc=token.loc)

    def parse_loop_hint(self) -> LoopHintAttr:
        self.expect_word('unroll_count')
        self.expect_punct('(')
        token = self.current
        if token.kind is not TokenKind.INTEGER_LITERAL:
            raise self.error('integer literal')
        self.advance()
        self.expect_punct(')')
        value, _ = split_integer_literal(token.text)
        if value < 2:
            raise ParseError.at("unroll_count must be at least 2", token.loc)
        return LoopHintAttr('unroll-count', value, implicit=False)

    # Expressions

    def parse_expression(self) -> Expr:
        cond = self.parse_binary(0)
        if self.current.is_punct('?'):
            question = self.advance()
            then = self.parse_expression()
            self.expect_punct(':')
            otherwise = self.parse_expression()
            return make_conditional(cond, then, otherwise, loc=question.loc)
        return cond

    def parse_binary(self, level: int) -> Expr:
        if level == len(PRECEDENCE):
            return self.parse_unary()
        lhs = self.parse_binary(level + 1)
        while self.current.kind is TokenKind.PUNCTUATION and self.current.text in PRECEDENCE[level]:
            op = self.advance()
            rhs = self.parse_binary(level + 1)
            lhs = make_binary(op.text, lhs, rhs, loc=lhs.loc)
        return lhs

    def parse_unary(self) -> Expr:
        token = self.current
        if token.is_punct('-') or token.is_punct('!'):
            self.advance()
            return make_unary(token.text, self.parse_unary(), loc=token.loc)
        if token.is_punct('(') and self.peek().kind is TokenKind.KEYWORD and self.peek().text in TYPE_KEYWORDS:
            self.advance()
            target = TYPE_KEYWORDS[self.advance().text]
            self.expect_punct(')')
            return Cast(self.parse_unary(), target, False, loc=token.loc)
        return self.parse_primary()

    def parse_primary(self) -> Expr:
        token = self.current
        if token.kind is TokenKind.INTEGER_LITERAL:
            self.advance()
            value, suffix = split_integer_literal(token.text)
            try:
                type_ = literal_type(value, suffix, token.text[:2].lower() == '0x')
            except ValueError as e:
                raise ParseError.at(str(e), token.loc) from None
            return IntLiteral(value, type_, loc=token.loc)
        if token.kind is TokenKind.IDENTIFIER:
            self.advance()
            return self.var_ref(token)
        if token.is_punct('('):
            self.advance()
            inner = self.parse_expression()
            self.expect_punct(')')
            return inner
        raise self.error('expression')


def parse_program(tokens: list[Token], filename: str | None = None) -> Program:
    """Parse a token stream into an immutable Program.

    Args:
        tokens: Token stream ending with end-of-file
        filename: Name recorded on the Program (defaults to the tokens' file)

    Returns:
        Program: Root node holding statements and all declarations

    Raises:
        ParseError: On a syntax error, an unknown directive or clause
    """
    if filename is None:
        filename = tokens[0].loc.file if tokens else '<input>'
    program = Parser(tokens).parse_program(filename)
    logger.debug(f"Parsed {filename}: {len(program.stmts)} top-level statements, {len(program.decls)} declarations")
    return program


def parse_source(source: str, filename: str = '<input>') -> Program:
    """Tokenize and parse source text in one step."""
    return parse_program(tokenize(source, filename), filename)
