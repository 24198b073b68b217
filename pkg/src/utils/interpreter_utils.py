"""Tree-walking interpreter for the mini language."""

import logging

from ..config import DEFAULT_STEP_LIMIT
from ..models.CanonicalLoop import OMPCanonicalLoop
from ..models.Diagnostic import InterpreterError, StepLimitExceeded, UnboundVariableError
from ..models.Expr import Expr, VarRef
from ..models.IntType import IntType
from ..models.Stmt import (
    Assign,
    AttributedStmt,
    CallBody,
    Compound,
    Directive,
    ForStmt,
    IfStmt,
    IncDec,
    Program,
    Stmt,
    VarDecl,
)
from ..models.Trace import Trace, TraceEvent
from .eval_utils import apply_binary, evaluate

logger = logging.getLogger(__name__)


class ASTInterpreter:
    """Executes statements over a flat variable store.

    A directive runs its transformed statement when ``shadow_table`` has
    one, and its associated statement otherwise. Every executed statement
    and loop condition counts as one step.
    """

    def __init__(self, env: dict[str, int] | None = None, step_limit: int = DEFAULT_STEP_LIMIT,
                 shadow_table=None):
        self.store: dict[str, int] = dict(env or {})
        self.step_limit = step_limit
        self.shadow_table = shadow_table
        self.steps = 0
        self.trace = Trace()

    def _step(self, node) -> None:
        self.steps += 1
        if self.steps > self.step_limit:
            raise StepLimitExceeded.at(f"step limit of {self.step_limit} exceeded", node.loc)

    def lookup(self, ref: VarRef) -> int:
        try:
            return self.store[ref.name]
        except KeyError:
            raise UnboundVariableError.at(f"read of unbound variable '{ref.name}'", ref.loc) from None

    def eval(self, expr: Expr) -> int:
        return evaluate(expr, self.lookup)

    def _assign(self, target: VarRef, value: int) -> None:
        self.store[target.name] = target.type.wrap(value)

    def execute(self, stmt: Stmt) -> None:
        if isinstance(stmt, (Program, Compound)):
            for child in stmt.stmts:
                self.execute(child)
            return
        if isinstance(stmt, Directive):
            transformed = self.shadow_table.get(stmt) if self.shadow_table is not None else None
            self.execute(transformed if transformed is not None else stmt.associated)
            return
        if isinstance(stmt, AttributedStmt):
            self.execute(stmt.stmt)
            return
        if isinstance(stmt, OMPCanonicalLoop):
            self.execute(stmt.loop)
            return

        self._step(stmt)
        if isinstance(stmt, VarDecl):
            # An initializer-less declaration keeps a binding supplied by the environment
            if stmt.init is not None:
                self.store[stmt.name] = stmt.type.wrap(self.eval(stmt.init))
        elif isinstance(stmt, Assign):
            value = self.eval(stmt.value)
            if stmt.op == '=':
                self._assign(stmt.target, value)
            else:
                common = IntType.promote(stmt.target.type, stmt.value.type)
                old = common.wrap(self.lookup(stmt.target))
                result = apply_binary(stmt.op[0], old, common.wrap(value), common, stmt.loc)
                self._assign(stmt.target, result)
        elif isinstance(stmt, IncDec):
            self._assign(stmt.target, self.lookup(stmt.target) + stmt.delta)
        elif isinstance(stmt, CallBody):
            args = tuple((self.eval(a), a.type) for a in stmt.args)
            thread = self.eval(stmt.thread) if stmt.thread is not None else None
            self.trace.append(TraceEvent('body', args, thread))
        elif isinstance(stmt, IfStmt):
            if self.eval(stmt.cond):
                self.execute(stmt.then)
            elif stmt.otherwise is not None:
                self.execute(stmt.otherwise)
        elif isinstance(stmt, ForStmt):
            self._run_for(stmt)
        else:
            raise InterpreterError.at(f"cannot execute {type(stmt).__name__}", stmt.loc)

    def _run_for(self, loop: ForStmt) -> None:
        if loop.init is not None:
            self.execute(loop.init)
        while True:
            self._step(loop)
            if not self.eval(loop.cond):
                return
            self.execute(loop.body)
            self.execute(loop.incr)


def interpret_ast(program: Stmt, env: dict[str, int] | None = None, step_limit: int = DEFAULT_STEP_LIMIT,
                  shadow_table=None) -> Trace:
    """Run a program (or any statement) and return its ``body`` trace.

    Args:
        program: Program that passed semantic analysis
        env: Initial variable bindings, e.g. ``{'n': 10}``
        step_limit: Maximum number of executed statements
        shadow_table: Transformed statements to run in place of directives

    Returns:
        Trace: Events in execution order

    Raises:
        StepLimitExceeded: If the budget runs out
        DivisionByZeroError: On ``/`` or ``%`` by zero
        UnboundVariableError: On a read of a variable that was never set
    """
    interpreter = ASTInterpreter(env, step_limit, shadow_table)
    try:
        interpreter.execute(program)
    except InterpreterError as e:
        logger.debug(f"AST interpretation failed after {interpreter.steps} step(s): {e}")
        raise
    logger.debug(f"AST interpretation produced {len(interpreter.trace)} event(s) in {interpreter.steps} step(s)")
    return interpreter.trace
