"""Wrapping integer arithmetic and expression evaluation.

Values are Python ints kept in the canonical range of their IntType. The
AST interpreter, the IR interpreter and constant folding all share these
helpers so the three agree bit for bit.
"""

import logging
from typing import Callable

from ..models.CanonicalLoop import ClosureDescriptor
from ..models.Diagnostic import DivisionByZeroError, UnboundVariableError
from ..models.Expr import Binary, Cast, Conditional, Expr, IntLiteral, Unary, VarRef
from ..models.IntType import IntType
from ..models.SourceLocation import BUILTIN_LOC, SourceLocation

logger = logging.getLogger(__name__)

COMPARE = {
    '<': lambda a, b: a < b,
    '<=': lambda a, b: a <= b,
    '>': lambda a, b: a > b,
    '>=': lambda a, b: a >= b,
    '==': lambda a, b: a == b,
    '!=': lambda a, b: a != b,
}


def truncating_divmod(a: int, b: int) -> tuple[int, int]:
    """C division: quotient rounds toward zero, remainder takes the dividend's sign."""
    quotient = abs(a) // abs(b)
    if (a < 0) != (b < 0):
        quotient = -quotient
    return quotient, a - quotient * b


def apply_binary(op: str, a: int, b: int, operand_type: IntType, loc: SourceLocation = BUILTIN_LOC) -> int:
    """Apply a source-level binary operator to two values of ``operand_type``.

    Raises:
        DivisionByZeroError: For ``/`` or ``%`` by zero
    """
    if op in COMPARE:
        return int(COMPARE[op](a, b))
    if op == '+':
        return operand_type.wrap(a + b)
    if op == '-':
        return operand_type.wrap(a - b)
    if op == '*':
        return operand_type.wrap(a * b)
    if op in ('/', '%'):
        if b == 0:
            raise DivisionByZeroError.at("division by zero" if op == '/' else "remainder by zero", loc)
        quotient, remainder = truncating_divmod(a, b)
        return operand_type.wrap(quotient if op == '/' else remainder)
    raise ValueError(f"Unknown binary operator: {op}")


def apply_unary(op: str, value: int, result_type: IntType) -> int:
    if op == '-':
        return result_type.wrap(-value)
    if op == '!':
        return int(value == 0)
    raise ValueError(f"Unknown unary operator: {op}")


def evaluate(expr: Expr, lookup: Callable[[VarRef], int]) -> int:
    """Evaluate ``expr``; variable values come from ``lookup``.

    ``&&``, ``||`` and ``?:`` short-circuit like C.
    """
    if isinstance(expr, IntLiteral):
        return expr.value
    if isinstance(expr, VarRef):
        return expr.type.wrap(lookup(expr))
    if isinstance(expr, Cast):
        return expr.type.wrap(evaluate(expr.operand, lookup))
    if isinstance(expr, Unary):
        return apply_unary(expr.op, evaluate(expr.operand, lookup), expr.type)
    if isinstance(expr, Conditional):
        chosen = expr.then if evaluate(expr.cond, lookup) else expr.otherwise
        return expr.type.wrap(evaluate(chosen, lookup))
    if isinstance(expr, Binary):
        if expr.op == '&&':
            return int(bool(evaluate(expr.lhs, lookup)) and bool(evaluate(expr.rhs, lookup)))
        if expr.op == '||':
            return int(bool(evaluate(expr.lhs, lookup)) or bool(evaluate(expr.rhs, lookup)))
        lhs = evaluate(expr.lhs, lookup)
        rhs = evaluate(expr.rhs, lookup)
        return apply_binary(expr.op, lhs, rhs, expr.lhs.type, expr.loc)
    raise TypeError(f"Cannot evaluate {type(expr).__name__}")


class _NotConstant(Exception):
    pass


def _reject(ref: VarRef) -> int:
    raise _NotConstant(ref.name)


def fold_constant(expr: Expr | None, known: dict[str, int] | None = None) -> int | None:
    """Value of ``expr`` if it only reads literals and ``known`` names, else None.

    Division by zero also yields None; the error surfaces when the program runs.
    """
    if expr is None:
        return None
    known = known or {}

    def lookup(ref: VarRef) -> int:
        if ref.name in known:
            return known[ref.name]
        return _reject(ref)

    try:
        return evaluate(expr, lookup)
    except (_NotConstant, DivisionByZeroError):
        return None


def evaluate_closure(closure: ClosureDescriptor, lookup: Callable[[VarRef], int], *args: int) -> int:
    """Evaluate a closure: snapshot captures through ``lookup``, bind inputs to ``args``.

    Raises:
        ValueError: If the number of arguments does not match the inputs
    """
    if len(args) != len(closure.inputs):
        raise ValueError(f"Closure takes {len(closure.inputs)} inputs, got {len(args)}")
    bound = {c.name: evaluate(c.init, lookup) for c in closure.captures}
    bound.update({p.name: p.type.wrap(v) for p, v in zip(closure.inputs, args)})

    def closure_lookup(ref: VarRef) -> int:
        if ref.name in bound:
            return bound[ref.name]
        raise UnboundVariableError.at(f"closure reads unbound name '{ref.name}'", ref.loc)

    return closure.output.type.wrap(evaluate(closure.body, closure_lookup))


# IR opcodes

IR_ARITH = {'add': '+', 'sub': '-', 'mul': '*', 'udiv': '/', 'sdiv': '/', 'urem': '%', 'srem': '%'}
IR_COMPARE = {
    'icmp-eq': '==', 'icmp-ne': '!=',
    'icmp-ult': '<', 'icmp-ule': '<=', 'icmp-ugt': '>', 'icmp-uge': '>=',
    'icmp-slt': '<', 'icmp-sle': '<=', 'icmp-sgt': '>', 'icmp-sge': '>=',
}


def apply_ir_binop(op: str, a: int, b: int, result_type: IntType) -> int:
    """Apply an IR arithmetic opcode; ``u``/``s`` opcodes pick the operand interpretation."""
    if op in ('udiv', 'urem'):
        domain = result_type.as_unsigned()
    elif op in ('sdiv', 'srem'):
        domain = IntType(result_type.bits, True)
    else:
        domain = result_type
    value = apply_binary(IR_ARITH[op], domain.wrap(a), domain.wrap(b), domain)
    return result_type.wrap(value)


def apply_ir_compare(op: str, a: int, b: int, operand_type: IntType) -> int:
    signed = op.startswith('icmp-s')
    domain = IntType(operand_type.bits, signed)
    return int(COMPARE[IR_COMPARE[op]](domain.wrap(a), domain.wrap(b)))
