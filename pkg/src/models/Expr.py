"""Expression nodes of the mini-language AST.

Nodes are immutable; identity (``is``) distinguishes nodes, structural
comparison lives in ``dump_utils.structural_equal``.
"""

from dataclasses import dataclass, field

from .IntType import INT, IntType
from .SourceLocation import BUILTIN_LOC, SourceLocation

ARITHMETIC_OPS = ('+', '-', '*', '/', '%')
COMPARISON_OPS = ('<', '<=', '>', '>=', '==', '!=')
LOGICAL_OPS = ('&&', '||')
UNARY_OPS = ('-', '!')


@dataclass(frozen=True, eq=False)
class Node:
    """Base of every AST node."""

    loc: SourceLocation = field(default=BUILTIN_LOC, kw_only=True)

    def children(self) -> tuple:
        return ()


@dataclass(frozen=True, eq=False)
class Expr(Node):
    """Base of expression nodes; every subclass has a ``type`` field."""


@dataclass(frozen=True, eq=False)
class IntLiteral(Expr):
    value: int
    type: IntType = INT

    def __post_init__(self):
        if not self.type.fits(self.value):
            raise ValueError(f"Literal {self.value} does not fit type {self.type}")


@dataclass(frozen=True, eq=False)
class VarRef(Expr):
    """Reference to a variable; ``decl_id`` is None for runtime-bound names."""

    name: str
    type: IntType = INT
    decl_id: int | None = None


@dataclass(frozen=True, eq=False)
class Binary(Expr):
    op: str
    lhs: Expr
    rhs: Expr
    type: IntType = INT

    def children(self) -> tuple:
        return (self.lhs, self.rhs)


@dataclass(frozen=True, eq=False)
class Unary(Expr):
    op: str
    operand: Expr
    type: IntType = INT

    def children(self) -> tuple:
        return (self.operand,)


@dataclass(frozen=True, eq=False)
class Cast(Expr):
    """Integral conversion; implicit casts come from the promotion rule."""

    operand: Expr
    type: IntType = INT
    implicit: bool = False

    def children(self) -> tuple:
        return (self.operand,)


@dataclass(frozen=True, eq=False)
class Conditional(Expr):
    cond: Expr
    then: Expr
    otherwise: Expr
    type: IntType = INT

    def children(self) -> tuple:
        return (self.cond, self.then, self.otherwise)


def convert(expr: Expr, target: IntType, implicit: bool = True) -> Expr:
    """Convert ``expr`` to ``target``, inserting a cast only when needed."""
    if implicit and expr.type == target:
        return expr
    return Cast(expr, target, implicit, loc=expr.loc)


def make_binary(op: str, lhs: Expr, rhs: Expr, loc: SourceLocation | None = None) -> Binary:
    """Build a Binary node applying the usual promotion rule.

    Arithmetic and comparison operands are converted to their common type;
    comparisons and logical operators yield ``int``.

    Args:
        op: Operator spelling
        lhs: Left operand
        rhs: Right operand
        loc: Node location (defaults to the left operand's)

    Returns:
        Binary: The typed node

    Raises:
        ValueError: If ``op`` is not a binary operator of the language
    """
    loc = loc or lhs.loc
    if op in LOGICAL_OPS:
        return Binary(op, lhs, rhs, INT, loc=loc)
    if op not in ARITHMETIC_OPS and op not in COMPARISON_OPS:
        raise ValueError(f"Unknown binary operator: {op}")
    common = IntType.promote(lhs.type, rhs.type)
    result = common if op in ARITHMETIC_OPS else INT
    return Binary(op, convert(lhs, common), convert(rhs, common), result, loc=loc)


def make_unary(op: str, operand: Expr, loc: SourceLocation | None = None) -> Unary:
    if op not in UNARY_OPS:
        raise ValueError(f"Unknown unary operator: {op}")
    return Unary(op, operand, INT if op == '!' else operand.type, loc=loc or operand.loc)


def make_conditional(cond: Expr, then: Expr, otherwise: Expr, loc: SourceLocation | None = None) -> Conditional:
    common = IntType.promote(then.type, otherwise.type)
    return Conditional(cond, convert(then, common), convert(otherwise, common), common, loc=loc or cond.loc)


def literal(value: int, type_: IntType = INT, loc: SourceLocation = BUILTIN_LOC) -> IntLiteral:
    """Literal of ``type_`` holding ``value`` wrapped into range."""
    return IntLiteral(type_.wrap(value), type_, loc=loc)
