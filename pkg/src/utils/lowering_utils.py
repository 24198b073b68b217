"""Lowering of the syntactic AST to IR (the irbuilder backend).

Statements outside directives lower to plain control flow. A directive's
loop nest is materialized as canonical skeletons, with every trip count
and start value computed before the outermost loop, and then handed to
the transformations of ``ir_transform_utils``, innermost directive first.
"""

import logging
from dataclasses import dataclass, field

from ..models.CanonicalLoop import OMPCanonicalLoop
from ..models.CanonicalLoopInfo import CanonicalLoopInfo
from ..models.Diagnostic import Diagnostic, IRError, LoompError, TransformError
from ..models.Expr import Binary, Cast, Conditional, Expr, IntLiteral, Unary, VarRef
from ..models.IntType import INT, IntType
from ..models.IRModule import IRModule
from ..models.SourceLocation import BUILTIN_LOC
from ..models.Stmt import (
    Assign,
    AttributedStmt,
    CallBody,
    Compound,
    Directive,
    DirectiveKind,
    ForStmt,
    IfStmt,
    IncDec,
    Program,
    ScheduleClause,
    SizesClause,
    Stmt,
    VarDecl,
)
from ..models.TransformOptions import TransformOptions
from ..models.UnrollDecision import UnrollDecision
from .irbuilder_utils import IRBuilder, create_canonical_loop
from .ir_transform_utils import collapse_loops, create_workshare_loop, tile_loops, unroll_loop
from .rewrite_utils import strip_implicit_casts
from .sema_utils import (
    BEGIN,
    END,
    INSUFFICIENT_DEPTH,
    LOGICAL_INPUT,
    analyze_canonical_loop,
    clause_constant,
    required_depth,
    resolve_unroll,
    strip_loop_wrappers,
)

logger = logging.getLogger(__name__)

ARITH_OPCODES = {'+': 'add', '-': 'sub', '*': 'mul'}
RELATIONS = {'<': 'lt', '<=': 'le', '>': 'gt', '>=': 'ge'}


@dataclass
class LoweredProgram:
    """Result of lowering a program.

    Attributes:
        module (IRModule): The complete module, entry block first
        handles (list[CanonicalLoopInfo]): Loops produced by the outermost
            directives, all still valid
        decisions (dict): Unroll directive -> UnrollDecision
    """

    module: IRModule
    handles: list[CanonicalLoopInfo] = field(default_factory=list)
    decisions: dict = field(default_factory=dict)


def compare_opcode(op: str, operand_type: IntType) -> str:
    if op == '==':
        return 'icmp-eq'
    if op == '!=':
        return 'icmp-ne'
    return f"icmp-{'s' if operand_type.signed else 'u'}{RELATIONS[op]}"


def _speculatable(expr: Expr, overrides: dict[str, int]) -> bool:
    """True if evaluating ``expr`` can never fail, so both arms may be computed."""
    if isinstance(expr, VarRef):
        return expr.name in overrides
    if isinstance(expr, Binary) and expr.op in ('/', '%'):
        divisor = strip_implicit_casts(expr.rhs)
        if not (isinstance(divisor, IntLiteral) and divisor.value != 0):
            return False
    return all(_speculatable(child, overrides) for child in expr.children())


class Lowering:
    """Emits IR for statements and expressions through one IRBuilder."""

    def __init__(self, options: TransformOptions | None = None, sema=None):
        self.options = options or TransformOptions()
        self.sema = sema
        self.module = IRModule()
        self.builder = IRBuilder(self.module, self.module.add_block('entry'))
        self.handles: list[CanonicalLoopInfo] = []
        self.decisions: dict[Directive, UnrollDecision] = {}
        self._temps = 0

    # Expressions

    def _temp(self) -> str:
        self._temps += 1
        return f"tmp.{self._temps}"

    def expr(self, expr: Expr, overrides: dict[str, int] | None = None) -> int:
        """Emit ``expr``; names in ``overrides`` read the given values instead of the store."""
        overrides = overrides or {}
        b = self.builder
        if isinstance(expr, IntLiteral):
            return b.const(expr.value, expr.type)
        if isinstance(expr, VarRef):
            if expr.name in overrides:
                value = overrides[expr.name]
                return value if b.type_of(value) == expr.type else b.cast(value, expr.type)
            return b.load(expr.name, expr.type)
        if isinstance(expr, Cast):
            value = self.expr(expr.operand, overrides)
            return value if expr.operand.type == expr.type else b.cast(value, expr.type)
        if isinstance(expr, Unary):
            value = self.expr(expr.operand, overrides)
            zero = b.const(0, expr.operand.type)
            if expr.op == '-':
                return b.binop('sub', zero, value, expr.type)
            return b.icmp('icmp-eq', value, zero)
        if isinstance(expr, Conditional):
            return self._conditional(expr, overrides)
        if isinstance(expr, Binary):
            if expr.op in ('&&', '||'):
                return self._logical(expr, overrides)
            lhs = self.expr(expr.lhs, overrides)
            rhs = self.expr(expr.rhs, overrides)
            operand_type = expr.lhs.type
            if expr.op in ARITH_OPCODES:
                return b.binop(ARITH_OPCODES[expr.op], lhs, rhs, expr.type)
            if expr.op in ('/', '%'):
                sign = 's' if operand_type.signed else 'u'
                return b.binop(f"{sign}{'div' if expr.op == '/' else 'rem'}", lhs, rhs, expr.type)
            return b.icmp(compare_opcode(expr.op, operand_type), lhs, rhs)
        raise TypeError(f"Cannot lower {type(expr).__name__}")

    def _truth(self, value: int, type_: IntType) -> int:
        return self.builder.icmp('icmp-ne', value, self.builder.const(0, type_))

    def _conditional(self, expr: Conditional, overrides: dict[str, int]) -> int:
        b = self.builder
        cond = self._truth(self.expr(expr.cond, overrides), expr.cond.type)
        if _speculatable(expr.then, overrides) and _speculatable(expr.otherwise, overrides):
            return b.select(cond, self.expr(expr.then, overrides), self.expr(expr.otherwise, overrides), expr.type)
        temp = self._temp()
        then, otherwise = self.module.add_block('cond.then'), self.module.add_block('cond.else')
        end = self.module.add_block('cond.end')
        b.branch(cond, then.label, otherwise.label)
        for block, arm in ((then, expr.then), (otherwise, expr.otherwise)):
            b.position_at(block)
            b.store(temp, self.expr(arm, overrides))
            b.jump(end.label)
        b.position_at(end)
        return b.load(temp, expr.type)

    def _logical(self, expr: Binary, overrides: dict[str, int]) -> int:
        b = self.builder
        lhs = self._truth(self.expr(expr.lhs, overrides), expr.lhs.type)
        if _speculatable(expr.rhs, overrides):
            rhs = self._truth(self.expr(expr.rhs, overrides), expr.rhs.type)
            if expr.op == '&&':
                return b.select(lhs, rhs, b.const(0, INT), INT)
            return b.select(lhs, b.const(1, INT), rhs, INT)
        temp = self._temp()
        b.store(temp, lhs)
        rest, end = self.module.add_block('logic.rhs'), self.module.add_block('logic.end')
        if expr.op == '&&':
            b.branch(lhs, rest.label, end.label)
        else:
            b.branch(lhs, end.label, rest.label)
        b.position_at(rest)
        b.store(temp, self._truth(self.expr(expr.rhs, overrides), expr.rhs.type))
        b.jump(end.label)
        b.position_at(end)
        return b.load(temp, INT)

    # Statements

    def stmt(self, stmt: Stmt) -> None:
        b = self.builder
        if isinstance(stmt, (Program, Compound)):
            for child in stmt.stmts:
                self.stmt(child)
        elif isinstance(stmt, VarDecl):
            if stmt.init is not None:
                b.store(stmt.name, self._converted(stmt.init, stmt.type))
        elif isinstance(stmt, Assign):
            self._assign(stmt)
        elif isinstance(stmt, IncDec):
            target = stmt.target
            old = b.load(target.name, target.type)
            one = b.const(1, target.type)
            b.store(target.name, b.binop('add' if stmt.delta > 0 else 'sub', old, one, target.type))
        elif isinstance(stmt, CallBody):
            args = tuple(self.expr(a) for a in stmt.args)
            thread = self.expr(stmt.thread) if stmt.thread is not None else None
            b.call_body(args, thread)
        elif isinstance(stmt, IfStmt):
            self._if(stmt)
        elif isinstance(stmt, ForStmt):
            self._plain_for(stmt)
        elif isinstance(stmt, AttributedStmt):
            self.stmt(stmt.stmt)
        elif isinstance(stmt, OMPCanonicalLoop):
            self.stmt(stmt.loop)
        elif isinstance(stmt, Directive):
            self.handles.extend(self.directive(stmt))
        else:
            raise TypeError(f"Cannot lower {type(stmt).__name__}")

    def _converted(self, expr: Expr, target: IntType) -> int:
        value = self.expr(expr)
        return value if expr.type == target else self.builder.cast(value, target)

    def _assign(self, stmt: Assign) -> None:
        b = self.builder
        target = stmt.target
        if stmt.op == '=':
            b.store(target.name, self._converted(stmt.value, target.type))
            return
        common = IntType.promote(target.type, stmt.value.type)
        old = b.load(target.name, target.type)
        if target.type != common:
            old = b.cast(old, common)
        value = self._converted(stmt.value, common)
        result = b.binop(ARITH_OPCODES[stmt.op[0]], old, value, common)
        b.store(target.name, result if common == target.type else b.cast(result, target.type))

    def _if(self, stmt: IfStmt) -> None:
        b = self.builder
        cond = self.expr(stmt.cond)
        then = self.module.add_block('if.then')
        otherwise = self.module.add_block('if.else') if stmt.otherwise is not None else None
        end = self.module.add_block('if.end')
        b.branch(cond, then.label, (otherwise or end).label)
        b.position_at(then)
        self.stmt(stmt.then)
        b.jump(end.label)
        if otherwise is not None:
            b.position_at(otherwise)
            self.stmt(stmt.otherwise)
            b.jump(end.label)
        b.position_at(end)

    def _plain_for(self, loop: ForStmt) -> None:
        b = self.builder
        if loop.init is not None:
            self.stmt(loop.init)
        cond = self.module.add_block('for.cond')
        body = self.module.add_block('for.body')
        incr = self.module.add_block('for.inc')
        end = self.module.add_block('for.end')
        b.jump(cond.label)
        b.position_at(cond)
        b.branch(self.expr(loop.cond), body.label, end.label)
        b.position_at(body)
        self.stmt(loop.body)
        b.jump(incr.label)
        b.position_at(incr)
        self.stmt(loop.incr)
        b.jump(cond.label)
        b.position_at(end)

    # Directives

    def _canonical(self, loop: ForStmt) -> OMPCanonicalLoop:
        if self.sema is not None and loop in self.sema.canonical_loops:
            return self.sema.canonical_loops[loop]
        return analyze_canonical_loop(loop)

    def _literal_nest(self, loops: list[ForStmt], tail: Directive | None, remaining: int) -> list[CanonicalLoopInfo]:
        """Skeletons for literal loops, the innermost one holding the body or an inner directive."""
        canonical = [self._canonical(loop) for loop in loops]
        begins, trips = [], []
        for c in canonical:
            begin = self.expr(c.distance.capture(BEGIN).init)
            end = self.expr(c.distance.capture(END).init)
            begins.append(begin)
            trips.append(self.expr(c.distance.body, {BEGIN: begin, END: end}))
        inner: list[CanonicalLoopInfo] = []
        tail_handles: list[CanonicalLoopInfo] = []

        def emitter(k: int):
            def emit(builder: IRBuilder, indvar: int) -> None:
                value = self.expr(canonical[k].user_value.body, {BEGIN: begins[k], LOGICAL_INPUT: indvar})
                builder.store(canonical[k].user_var.name, value)
                if k + 1 < len(loops):
                    inner.append(create_canonical_loop(builder, trips[k + 1], emitter(k + 1),
                                                       canonical[k + 1].user_var.name))
                elif tail is not None:
                    tail_handles.extend(self.directive(tail, consumed=True))
                else:
                    self.stmt(loops[k].body)
            return emit

        outer = create_canonical_loop(self.builder, trips[0], emitter(0), canonical[0].user_var.name)
        if tail is not None and len(tail_handles) < remaining:
            raise TransformError.at(INSUFFICIENT_DEPTH, tail.loc)
        return [outer] + inner + tail_handles[:remaining]

    def _nest(self, directive: Directive) -> list[CanonicalLoopInfo]:
        depth = required_depth(directive)
        current = strip_loop_wrappers(directive.associated)
        if isinstance(current, Directive):
            handles = self.directive(current, consumed=True)
            if len(handles) < depth:
                raise TransformError.at(INSUFFICIENT_DEPTH, directive.loc, [
                    Diagnostic.note(f"loop nest generated by '{current.spelling}' here", current.loc),
                ])
            return handles[:depth]
        loops: list[ForStmt] = []
        while isinstance(current, ForStmt) and len(loops) < depth:
            loops.append(current)
            if len(loops) < depth:
                current = strip_loop_wrappers(current.body)
        if len(loops) < depth and not isinstance(current, Directive) or not loops:
            raise TransformError.at(INSUFFICIENT_DEPTH, directive.loc)
        tail = current if len(loops) < depth else None
        return self._literal_nest(loops, tail, depth - len(loops))

    def directive(self, directive: Directive, consumed: bool = False) -> list[CanonicalLoopInfo]:
        """Lower a directive and its nest; returns the handles an outer directive may consume."""
        try:
            handles = self._nest(directive)
            return self._apply(directive, handles, consumed)
        except (TransformError, IRError) as e:
            if e.diagnostic.loc is not BUILTIN_LOC:
                raise
            notes = [Diagnostic.note(f"while applying '{directive.spelling}' here", directive.loc)]
            raise type(e).at(e.diagnostic.message, directive.loc, notes) from e

    def _apply(self, directive: Directive, handles: list[CanonicalLoopInfo], consumed: bool) -> list[CanonicalLoopInfo]:
        module = self.module
        if directive.kind is DirectiveKind.TILE:
            sizes = [clause_constant(s) for s in directive.clause(SizesClause).sizes]
            return tile_loops(module, handles, sizes)
        if directive.kind is DirectiveKind.UNROLL:
            decision = None
            if self.sema is not None:
                decision = self.sema.decision(directive)
            if decision is None:
                decision = resolve_unroll(directive, consumed, self.options.heuristic_factor)
            self.decisions[directive] = decision
            if decision.mode == 'full':
                unroll_loop(module, handles[0], 'full')
                return []
            if decision.compiler_chosen:
                result = unroll_loop(module, handles[0], 'heuristic', heuristic_factor=self.options.heuristic_factor)
            else:
                result = unroll_loop(module, handles[0], 'partial', decision.factor)
            return [result]
        handle = collapse_loops(module, handles) if len(handles) > 1 else handles[0]
        schedule = directive.clause(ScheduleClause)
        chunk = clause_constant(schedule.chunk) if schedule is not None and schedule.chunk is not None else None
        return [create_workshare_loop(module, handle, self.options.num_threads, chunk)]


def lower_program(program: Program, options: TransformOptions | None = None, sema=None) -> LoweredProgram:
    """Lower a program that passed semantic analysis to an IR module.

    Args:
        program: Program to lower
        options: Heuristic factor and thread count
        sema: SemaResult whose decisions and canonical loops are reused

    Returns:
        LoweredProgram: Module, surviving loop handles and unroll decisions

    Raises:
        TransformError: If a transformation is impossible
        IRError: If a nest cannot be transformed in IR
        SemaError: If a loop is not in canonical form
    """
    lowering = Lowering(options, sema)
    try:
        lowering.stmt(program)
        lowering.builder.halt()
        lowering.module.check_well_formed()
    except LoompError as e:
        logger.error(f"Error lowering {program.filename}: {e}")
        raise
    handles = [h for h in lowering.handles if h.valid]
    logger.info(f"Lowered {program.filename} to {len(lowering.module.blocks)} block(s), {len(handles)} loop handle(s)")
    return LoweredProgram(lowering.module, handles, lowering.decisions)
