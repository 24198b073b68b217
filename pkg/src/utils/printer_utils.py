"""Pretty-printer producing re-parseable mini-language source.

Implicit casts are not printed; the parser re-inserts them from the same
promotion rule, so printing a parsed program and parsing it again gives a
structurally equal tree.
"""

import logging

from ..models.CanonicalLoop import OMPCanonicalLoop
from ..models.Expr import Binary, Cast, Conditional, Expr, IntLiteral, Unary, VarRef
from ..models.Stmt import (
    Assign,
    AttributedStmt,
    CallBody,
    CollapseClause,
    Compound,
    Directive,
    ForStmt,
    FullClause,
    IfStmt,
    IncDec,
    PartialClause,
    Program,
    ScheduleClause,
    SizesClause,
    Stmt,
    VarDecl,
)

logger = logging.getLogger(__name__)

INDENT = '    '

BINARY_PRECEDENCE = {
    '||': 1, '&&': 2, '==': 3, '!=': 3, '<': 4, '<=': 4, '>': 4, '>=': 4,
    '+': 5, '-': 5, '*': 6, '/': 6, '%': 6,
}
CONDITIONAL_PRECEDENCE = 0
UNARY_PRECEDENCE = 7


def format_literal(lit: IntLiteral) -> str:
    """Spell a literal so that it re-parses with the same type and value."""
    suffix = lit.type.literal_suffix
    if lit.value >= 0:
        return f"{lit.value}{suffix}"
    if lit.type.fits(-lit.value):
        return f"-{-lit.value}{suffix}"
    return f"-{lit.type.max_value}{suffix} - 1"


def _precedence(expr: Expr) -> int:
    expr = _visible(expr)
    if isinstance(expr, Binary):
        return BINARY_PRECEDENCE[expr.op]
    if isinstance(expr, Conditional):
        return CONDITIONAL_PRECEDENCE
    if isinstance(expr, IntLiteral) and expr.value < 0:
        return BINARY_PRECEDENCE['-'] if not expr.type.fits(-expr.value) else UNARY_PRECEDENCE
    if isinstance(expr, (Unary, Cast)):
        return UNARY_PRECEDENCE
    return UNARY_PRECEDENCE + 1


def _visible(expr: Expr) -> Expr:
    while isinstance(expr, Cast) and expr.implicit:
        expr = expr.operand
    return expr


def _operand(expr: Expr, minimum: int) -> str:
    text = format_expr(expr)
    return f"({text})" if _precedence(expr) < minimum else text


def format_expr(expr: Expr) -> str:
    """Render an expression with the parentheses its shape requires."""
    expr = _visible(expr)
    if isinstance(expr, IntLiteral):
        return format_literal(expr)
    if isinstance(expr, VarRef):
        return expr.name
    if isinstance(expr, Cast):
        return f"({expr.type.keyword}){_operand(expr.operand, UNARY_PRECEDENCE)}"
    if isinstance(expr, Unary):
        operand = _operand(expr.operand, UNARY_PRECEDENCE)
        if operand.startswith('-'):
            operand = f"({operand})"
        return f"{expr.op}{operand}"
    if isinstance(expr, Binary):
        level = BINARY_PRECEDENCE[expr.op]
        # Left-associative: the right operand needs strictly higher precedence
        return f"{_operand(expr.lhs, level)} {expr.op} {_operand(expr.rhs, level + 1)}"
    if isinstance(expr, Conditional):
        return (f"{_operand(expr.cond, CONDITIONAL_PRECEDENCE + 1)} ? "
                f"{format_expr(expr.then)} : {format_expr(expr.otherwise)}")
    raise TypeError(f"Cannot print {type(expr).__name__}")


def format_clause(clause) -> str:
    if isinstance(clause, FullClause):
        return 'full'
    if isinstance(clause, PartialClause):
        return 'partial' if clause.factor is None else f"partial({format_expr(clause.factor)})"
    if isinstance(clause, SizesClause):
        return f"sizes({', '.join(format_expr(s) for s in clause.sizes)})"
    if isinstance(clause, ScheduleClause):
        chunk = f", {format_expr(clause.chunk)}" if clause.chunk is not None else ''
        return f"schedule({clause.kind}{chunk})"
    if isinstance(clause, CollapseClause):
        return f"collapse({format_expr(clause.depth)})"
    raise TypeError(f"Cannot print clause {type(clause).__name__}")


class SourcePrinter:
    """Statement printer; substitutes shadow statements when given a table."""

    def __init__(self, shadow_table=None):
        self.shadow_table = shadow_table
        self.lines: list[str] = []

    def emit(self, depth: int, text: str) -> None:
        self.lines.append(f"{INDENT * depth}{text}")

    def simple(self, stmt: Stmt) -> str:
        """Statements that fit in a for-header, without the semicolon."""
        if isinstance(stmt, VarDecl):
            init = f" = {format_expr(stmt.init)}" if stmt.init is not None else ''
            return f"{stmt.type.keyword} {stmt.name}{init}"
        if isinstance(stmt, Assign):
            return f"{stmt.target.name} {stmt.op} {format_expr(stmt.value)}"
        if isinstance(stmt, IncDec):
            return f"{stmt.op}{stmt.target.name}" if stmt.prefix else f"{stmt.target.name}{stmt.op}"
        if isinstance(stmt, CallBody):
            return f"body({', '.join(format_expr(a) for a in stmt.args)})"
        raise TypeError(f"Not a simple statement: {type(stmt).__name__}")

    def stmt(self, stmt: Stmt, depth: int) -> None:
        if isinstance(stmt, Program):
            for child in stmt.stmts:
                self.stmt(child, depth)
        elif isinstance(stmt, CallBody) and stmt.thread is not None:
            self.emit(depth, f"{self.simple(stmt)}; /* thread {format_expr(stmt.thread)} */")
        elif isinstance(stmt, (VarDecl, Assign, IncDec, CallBody)):
            self.emit(depth, f"{self.simple(stmt)};")
        elif isinstance(stmt, Compound):
            self.emit(depth, '{')
            for child in stmt.stmts:
                self.stmt(child, depth + 1)
            self.emit(depth, '}')
        elif isinstance(stmt, ForStmt):
            init = self.simple(stmt.init) if stmt.init is not None else ''
            self.emit(depth, f"for ({init}; {format_expr(stmt.cond)}; {self.simple(stmt.incr)})")
            self.nested(stmt.body, depth)
        elif isinstance(stmt, IfStmt):
            self.emit(depth, f"if ({format_expr(stmt.cond)})")
            self.nested(stmt.then, depth)
            if stmt.otherwise is not None:
                self.emit(depth, 'else')
                self.nested(stmt.otherwise, depth)
        elif isinstance(stmt, Directive):
            transformed = self.shadow_table.get(stmt) if self.shadow_table is not None else None
            if transformed is not None:
                self.stmt(transformed, depth)
                return
            clauses = ''.join(f" {format_clause(c)}" for c in stmt.clauses)
            self.emit(depth, f"{stmt.spelling}{clauses}")
            self.stmt(stmt.associated, depth)
        elif isinstance(stmt, AttributedStmt):
            for attr in stmt.attrs:
                self.emit(depth, f"#pragma clang loop unroll_count({attr.value})")
            self.stmt(stmt.stmt, depth)
        elif isinstance(stmt, OMPCanonicalLoop):
            self.stmt(stmt.loop, depth)
        else:
            raise TypeError(f"Cannot print {type(stmt).__name__}")

    def nested(self, body: Stmt, depth: int) -> None:
        self.stmt(body, depth if isinstance(body, Compound) else depth + 1)


def print_source(node: Stmt, shadow_table=None) -> str:
    """Render a statement or program as mini-language source.

    Args:
        node: Statement or Program to print
        shadow_table: If given, directives with a transformed statement are
            replaced by it, producing the transformed program

    Returns:
        str: Source text ending with a newline
    """
    printer = SourcePrinter(shadow_table)
    printer.stmt(node, 0)
    return '\n'.join(printer.lines) + '\n'
