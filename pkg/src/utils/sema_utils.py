"""Semantic analysis of loop directives.

Checks the OpenMP canonical loop form, builds the distance and user-value
closures of the OMPCanonicalLoop wrapper, validates clauses and loop nest
depth, and resolves unroll directives into explicit decisions.
"""

import logging
from dataclasses import dataclass, field

from ..config import HEURISTIC_UNROLL_FACTOR
from ..models.CanonicalLoop import (
    CanonicalForm,
    Capture,
    CaptureMode,
    ClosureDescriptor,
    Direction,
    OMPCanonicalLoop,
    Param,
)
from ..models.Diagnostic import Diagnostic, LoopNestDepthError, SemaError
from ..models.Expr import Binary, Expr, VarRef, convert, literal, make_binary, make_conditional
from ..models.IntType import IntType
from ..models.Stmt import (
    Assign,
    AttributedStmt,
    CollapseClause,
    Compound,
    Directive,
    DirectiveKind,
    ForStmt,
    FullClause,
    IncDec,
    PartialClause,
    Program,
    ScheduleClause,
    SizesClause,
    Stmt,
    VarDecl,
)
from ..models.UnrollDecision import UnrollDecision
from .diagnostic_utils import provenance_notes
from .eval_utils import fold_constant
from .rewrite_utils import assigned_names, directives_in, strip_implicit_casts, var_refs

logger = logging.getLogger(__name__)

NOT_CANONICAL = "loop is not in canonical form"
INSUFFICIENT_DEPTH = "insufficient loop nest depth"
NOT_POSITIVE = "argument must be a positive constant"
NO_LOOP_AFTER_FULL = "directive requires a loop but the inner unroll with 'full' leaves no generated loop"
FULL_NOT_CONSTANT = "cannot fully unroll: trip count is not a compile-time constant"

RELATION_OF = {'<': 'lt', '<=': 'le', '>': 'gt', '>=': 'ge', '!=': 'ne'}
MIRRORED = {'<': '>', '<=': '>=', '>': '<', '>=': '<=', '!=': '!='}

BEGIN, END, LOGICAL_INPUT, RESULT = '__begin', '__end', '__i', '__result'


def _not_canonical(loop: ForStmt, reason: str, where) -> SemaError:
    notes = [Diagnostic.note(reason, where.loc)] + provenance_notes(loop.provenance)
    return SemaError(Diagnostic.error(NOT_CANONICAL, loop.loc, notes))


def _split_init(loop: ForStmt) -> tuple[VarRef, Expr]:
    init = loop.init
    if isinstance(init, VarDecl) and init.init is not None:
        return VarRef(init.name, init.type, init.decl_id, loc=init.loc), init.init
    if isinstance(init, Assign) and init.op == '=':
        return init.target, init.value
    raise _not_canonical(loop, "loop initializer must declare or assign the iteration variable", init or loop)


def _is_iv(expr: Expr, iv: VarRef) -> bool:
    expr = strip_implicit_casts(expr)
    return isinstance(expr, VarRef) and expr.name == iv.name


def _split_compare(expr: Expr, iv: VarRef, loop: ForStmt) -> tuple[str, Expr] | None:
    expr = strip_implicit_casts(expr)
    if not isinstance(expr, Binary) or expr.op not in RELATION_OF:
        return None
    if _is_iv(expr.lhs, iv) and iv.name not in var_refs(expr.rhs):
        op, bound = expr.op, expr.rhs
    elif _is_iv(expr.rhs, iv) and iv.name not in var_refs(expr.lhs):
        op, bound = MIRRORED[expr.op], expr.lhs
    else:
        return None
    if bound.type != iv.type:
        raise _not_canonical(
            loop, f"condition compares the iteration variable as '{bound.type.c_name}'", expr
        )
    return RELATION_OF[op], bound


def _split_cond(loop: ForStmt, iv: VarRef) -> tuple[str, Expr]:
    cond = strip_implicit_casts(loop.cond)
    split = _split_compare(cond, iv, loop)
    if split is not None:
        return split
    # Generated tile loops bound the iteration variable twice: iv < a && iv < b
    if isinstance(cond, Binary) and cond.op == '&&':
        left = _split_compare(cond.lhs, iv, loop)
        right = _split_compare(cond.rhs, iv, loop)
        if left and right and left[0] == right[0] and left[0] != 'ne':
            rel, (a, b) = left[0], (left[1], right[1])
            pick = '<' if rel in ('lt', 'le') else '>'
            return rel, make_conditional(make_binary(pick, a, b), a, b, loc=cond.loc)
    raise _not_canonical(loop, "unsupported loop condition shape", loop.cond)


def _constant_step(loop: ForStmt, expr: Expr) -> int:
    value = fold_constant(expr)
    if value is None:
        raise _not_canonical(loop, "loop step is not a compile-time constant", expr)
    return value


def _split_incr(loop: ForStmt, iv: VarRef) -> int:
    incr = loop.incr
    if isinstance(incr, IncDec) and incr.target.name == iv.name:
        return incr.delta
    if isinstance(incr, Assign) and incr.target.name == iv.name:
        if incr.op == '+=':
            return _constant_step(loop, incr.value)
        if incr.op == '-=':
            return -_constant_step(loop, incr.value)
        value = strip_implicit_casts(incr.value)
        if isinstance(value, Binary) and value.op in ('+', '-'):
            if _is_iv(value.lhs, iv):
                step = _constant_step(loop, value.rhs)
                return step if value.op == '+' else -step
            if value.op == '+' and _is_iv(value.rhs, iv):
                return _constant_step(loop, value.lhs)
    raise _not_canonical(loop, "loop increment must add a constant to the iteration variable", incr)


def analyze_canonical_loop(loop: ForStmt) -> OMPCanonicalLoop:
    """Check canonical form and wrap the loop with its meta-information.

    The wrapped loop is ``loop`` itself, so the wrapper can be removed
    without loss.

    Args:
        loop: A literal or generated for-loop

    Returns:
        OMPCanonicalLoop: Wrapper holding the distance and user-value closures

    Raises:
        SemaError: "loop is not in canonical form", with a note naming the
            violated constraint
    """
    iv, lb = _split_init(loop)
    rel, ub = _split_cond(loop, iv)
    step = _split_incr(loop, iv)
    if step == 0:
        raise _not_canonical(loop, "loop step must not be zero", loop.incr)

    direction = Direction.UP if step > 0 else Direction.DOWN
    if (rel in ('lt', 'le') and direction is Direction.DOWN) or (rel in ('gt', 'ge') and direction is Direction.UP):
        raise _not_canonical(loop, "inconsistent direction: the step moves away from the loop bound", loop.incr)
    if rel == 'ne' and abs(step) != 1:
        raise _not_canonical(loop, "'!=' condition requires a step of 1 or -1", loop.incr)

    written = assigned_names(loop.body)
    if iv.name in written:
        raise _not_canonical(loop, "induction variable modified in body", written[iv.name])
    for name in sorted((var_refs(lb) | var_refs(ub)) - {iv.name}):
        if name in written:
            raise _not_canonical(loop, f"loop bound '{name}' modified in body", written[name])

    form = CanonicalForm(iv, lb, ub, step, direction, rel)
    logical = iv.type.as_unsigned()
    logger.debug(f"Canonical loop at {loop.loc}: iv={iv.name} step={step} rel={rel}")
    return OMPCanonicalLoop(
        loop,
        build_distance(form, logical),
        build_user_value(form, logical),
        iv,
        logical,
        form,
        loc=loop.loc,
    )


def build_distance(form: CanonicalForm, logical: IntType) -> ClosureDescriptor:
    """Trip-count closure evaluated in unsigned arithmetic of ``logical``.

    The body is ``guard ? (q >= CAP ? CAP : q + 1) : 0`` with ``q`` the
    unsigned span divided by the step and ``CAP = 2^bits - 2``; it never
    overflows the logical type.
    """
    begin, end = VarRef(BEGIN, form.iv.type), VarRef(END, form.iv.type)
    b, e = convert(begin, logical), convert(end, logical)
    up = form.direction is Direction.UP
    strict = form.rel in ('lt', 'gt', 'ne')

    guard = make_binary(('<' if strict else '<=') if up else ('>' if strict else '>='), begin, end)
    span = make_binary('-', e, b) if up else make_binary('-', b, e)
    if strict:
        span = make_binary('-', span, literal(1, logical))
    quotient = make_binary('/', span, literal(form.abs_step, logical))
    cap = literal(logical.max_value - 1, logical)
    counted = make_conditional(
        make_binary('>=', quotient, cap), cap, make_binary('+', quotient, literal(1, logical))
    )
    body = make_conditional(guard, counted, literal(0, logical))
    return ClosureDescriptor(
        captures=(Capture(BEGIN, CaptureMode.BY_VALUE, form.lb), Capture(END, CaptureMode.BY_REFERENCE, form.ub)),
        inputs=(),
        output=Param(RESULT, logical),
        body=body,
    )


def build_user_value(form: CanonicalForm, logical: IntType) -> ClosureDescriptor:
    """Closure mapping a logical iteration number to the user variable's value."""
    iv_type = form.iv.type
    offset = make_binary('*', convert(VarRef(LOGICAL_INPUT, logical), iv_type), literal(form.abs_step, iv_type))
    op = '+' if form.direction is Direction.UP else '-'
    return ClosureDescriptor(
        captures=(Capture(BEGIN, CaptureMode.BY_VALUE, form.lb),),
        inputs=(Param(LOGICAL_INPUT, logical),),
        output=Param(RESULT, iv_type),
        body=make_binary(op, VarRef(BEGIN, iv_type), offset),
    )


def constant_trip_count(canonical: OMPCanonicalLoop, known: dict[str, int] | None = None) -> int | None:
    """Trip count if both bounds fold to constants (given ``known`` values)."""
    values = {}
    for capture in canonical.distance.captures:
        value = fold_constant(capture.init, known)
        if value is None:
            return None
        values[capture.name] = value
    return fold_constant(canonical.distance.body, values)


# Nest depth


def strip_loop_wrappers(stmt: Stmt) -> Stmt:
    """Look through hints and single-statement compounds to the loop they hold."""
    while True:
        if isinstance(stmt, AttributedStmt):
            stmt = stmt.stmt
        elif isinstance(stmt, OMPCanonicalLoop):
            stmt = stmt.loop
        elif isinstance(stmt, Compound) and len(stmt.stmts) == 1:
            stmt = stmt.stmts[0]
        else:
            return stmt


def perfectly_nested(loop: ForStmt) -> Stmt | None:
    """The loop or directive that is the whole body of ``loop``, if any."""
    inner = strip_loop_wrappers(loop.body)
    return inner if isinstance(inner, (ForStmt, Directive)) else None


def clause_constant(expr: Expr | None, default: int = 1) -> int:
    value = fold_constant(expr) if expr is not None else None
    return value if value is not None and value >= 1 else default


def required_depth(directive: Directive) -> int:
    """Number of nested loops a directive associates with."""
    if directive.kind is DirectiveKind.TILE:
        sizes = directive.clause(SizesClause)
        return len(sizes.sizes) if sizes is not None else 1
    if directive.kind is DirectiveKind.WORKSHARE_FOR:
        collapse = directive.clause(CollapseClause)
        return clause_constant(collapse.depth) if collapse is not None else 1
    return 1


def _depth_error(directive: Directive, required: int, available: int) -> LoopNestDepthError:
    notes = [Diagnostic.note(
        f"'{directive.spelling}' requires {required} nested loop(s) but {available} are available",
        directive.loc,
    )]
    inner = strip_loop_wrappers(directive.associated)
    while isinstance(inner, Directive):
        notes.append(Diagnostic.note(f"loop nest generated by '{inner.spelling}' here", inner.loc))
        inner = strip_loop_wrappers(inner.associated)
    return LoopNestDepthError(Diagnostic.error(INSUFFICIENT_DEPTH, directive.loc, notes))


def nest_depth_after(stmt: Stmt) -> int:
    """Depth of the perfect canonical loop nest ``stmt`` stands for after transformation.

    Raises:
        LoopNestDepthError: If a directive inside ``stmt`` lacks loops
    """
    stmt = strip_loop_wrappers(stmt)
    if isinstance(stmt, ForStmt):
        inner = perfectly_nested(stmt)
        return 1 + (nest_depth_after(inner) if inner is not None else 0)
    if not isinstance(stmt, Directive):
        return 0
    required = required_depth(stmt)
    available = nest_depth_after(stmt.associated)
    if available < required:
        raise _depth_error(stmt, required, available)
    if stmt.kind is DirectiveKind.TILE:
        return 2 * required
    if stmt.kind is DirectiveKind.UNROLL:
        return 0 if stmt.clause(FullClause) is not None else 1
    return 0


def _clause_arguments(directive: Directive) -> list[Expr]:
    args = []
    for clause in directive.clauses:
        if isinstance(clause, PartialClause) and clause.factor is not None:
            args.append(clause.factor)
        elif isinstance(clause, SizesClause):
            args.extend(clause.sizes)
        elif isinstance(clause, CollapseClause) and clause.depth is not None:
            args.append(clause.depth)
        elif isinstance(clause, ScheduleClause) and clause.chunk is not None:
            args.append(clause.chunk)
    return args


def _inner_full_unroll(directive: Directive) -> FullClause | None:
    inner = strip_loop_wrappers(directive.associated)
    if isinstance(inner, Directive) and inner.kind is DirectiveKind.UNROLL:
        return inner.clause(FullClause)
    return None


def validate_directive(directive: Directive) -> list[Diagnostic]:
    """Check clause multiplicity, clause constants and loop nest depth.

    Returns:
        list[Diagnostic]: Errors found; empty if the directive is valid
    """
    diagnostics = []
    name = directive.spelling
    if directive.kind is DirectiveKind.UNROLL:
        modes = directive.clauses_of(FullClause) + directive.clauses_of(PartialClause)
        if len(modes) > 1:
            diagnostics.append(Diagnostic.error(
                f"directive '{name}' accepts at most one of 'full' and 'partial'", modes[1].loc))
    elif directive.kind is DirectiveKind.TILE:
        sizes = directive.clauses_of(SizesClause)
        if len(sizes) != 1:
            where = sizes[1].loc if len(sizes) > 1 else directive.loc
            diagnostics.append(Diagnostic.error(
                f"directive '{name}' requires exactly one 'sizes' clause", where))
    else:
        for clause_type in (ScheduleClause, CollapseClause):
            found = directive.clauses_of(clause_type)
            if len(found) > 1:
                diagnostics.append(Diagnostic.error(
                    f"directive '{name}' accepts at most one '{found[1].name}' clause", found[1].loc))

    for arg in _clause_arguments(directive):
        value = fold_constant(arg)
        if value is None or value < 1:
            diagnostics.append(Diagnostic.error(NOT_POSITIVE, arg.loc))
    if diagnostics:
        return diagnostics

    full = _inner_full_unroll(directive)
    if full is not None:
        return [Diagnostic.error(NO_LOOP_AFTER_FULL, directive.loc, [
            Diagnostic.note("'full' clause specified here removes the loop", full.loc),
        ])]
    required = required_depth(directive)
    try:
        available = nest_depth_after(directive.associated)
    except LoopNestDepthError:
        # Reported when the inner directive itself is validated
        return []
    if available < required:
        return list(_depth_error(directive, required, available).diagnostics)
    return []


# Program analysis


@dataclass
class SemaResult:
    """Outcome of analyzing a whole program.

    Attributes:
        program (Program): The analyzed program, unchanged
        decisions (dict): Unroll directive -> UnrollDecision
        consumed (set): Directives whose generated loops an outer directive uses
        canonical_loops (dict): Literal loop -> OMPCanonicalLoop for every
            loop a directive associates with
        warnings (list[Diagnostic]): Non-fatal diagnostics
    """

    program: Program
    decisions: dict = field(default_factory=dict)
    consumed: set = field(default_factory=set)
    canonical_loops: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def decision(self, directive: Directive) -> UnrollDecision | None:
        return self.decisions.get(directive)


def nest_levels(directive: Directive) -> list[Stmt]:
    """Literal loops and inner directives making up the associated nest.

    An inner directive stands for all remaining levels and ends the list.
    """
    levels: list[Stmt] = []
    current = strip_loop_wrappers(directive.associated)
    for _ in range(required_depth(directive)):
        if isinstance(current, Directive):
            levels.append(current)
            break
        if not isinstance(current, ForStmt):
            break
        levels.append(current)
        current = perfectly_nested(current)
    return levels


def resolve_unroll(directive: Directive, consumed: bool, heuristic_factor: int = HEURISTIC_UNROLL_FACTOR) -> UnrollDecision:
    """Turn an unroll directive into an explicit decision record."""
    if directive.clause(FullClause) is not None:
        return UnrollDecision('full', consumed=consumed)
    partial = directive.clause(PartialClause)
    if partial is not None and partial.factor is not None:
        return UnrollDecision('partial', clause_constant(partial.factor), consumed=consumed)
    if consumed:
        return UnrollDecision('partial', heuristic_factor, compiler_chosen=True, consumed=True)
    return UnrollDecision('deferred', compiler_chosen=True)


def static_trip_count(stmt: Stmt, result: SemaResult) -> int | None:
    """Compile-time trip count of the outermost loop ``stmt`` stands for."""
    stmt = strip_loop_wrappers(stmt)
    if isinstance(stmt, ForStmt):
        canonical = result.canonical_loops.get(stmt)
        if canonical is None:
            try:
                canonical = analyze_canonical_loop(stmt)
            except SemaError:
                return None
        return constant_trip_count(canonical)
    if not isinstance(stmt, Directive):
        return None
    inner = static_trip_count(stmt.associated, result)
    if inner is None:
        return None
    if stmt.kind is DirectiveKind.TILE:
        size = clause_constant(stmt.clause(SizesClause).sizes[0])
        return -(-inner // size)
    if stmt.kind is DirectiveKind.UNROLL:
        decision = result.decision(stmt)
        if decision is None or decision.mode == 'full':
            return None
        if decision.mode == 'deferred':
            return inner
        return -(-inner // decision.factor)
    return None


def _rectangularity_errors(levels: list[Stmt], result: SemaResult) -> list[Diagnostic]:
    errors = []
    outer_ivs: list[str] = []
    for level in levels:
        canonical = result.canonical_loops.get(level)
        if canonical is None:
            break
        form = canonical.form
        used = var_refs(form.lb) | var_refs(form.ub)
        for name in outer_ivs:
            if name in used:
                errors.append(Diagnostic.error(NOT_CANONICAL, level.loc, [
                    Diagnostic.note(f"loop bounds depend on the outer iteration variable '{name}'", form.ub.loc),
                ]))
        outer_ivs.append(form.iv.name)
    return errors


def analyze_program(program: Program, heuristic_factor: int = HEURISTIC_UNROLL_FACTOR) -> SemaResult:
    """Validate every directive of a program, innermost first.

    Args:
        program: Parsed program
        heuristic_factor: Factor used for a consumed unroll without clause

    Returns:
        SemaResult: Decisions and canonical-loop wrappers

    Raises:
        SemaError: With every error diagnostic found
    """
    result = SemaResult(program)
    directives = directives_in(program)
    for directive in directives:
        for level in nest_levels(directive):
            if isinstance(level, Directive):
                result.consumed.add(level)
    for directive in directives:
        if directive.kind is DirectiveKind.UNROLL:
            decision = resolve_unroll(directive, directive in result.consumed, heuristic_factor)
            result.decisions[directive] = decision
            logger.debug(f"Unroll at {directive.loc} resolved to {decision}")

    errors: list[Diagnostic] = []
    for directive in reversed(directives):
        diagnostics = validate_directive(directive)
        if diagnostics:
            errors.extend(diagnostics)
            continue
        levels = nest_levels(directive)
        for level in levels:
            if isinstance(level, ForStmt):
                try:
                    result.canonical_loops[level] = analyze_canonical_loop(level)
                except SemaError as e:
                    errors.extend(e.diagnostics)
        errors.extend(_rectangularity_errors(levels, result))
        decision = result.decision(directive)
        if decision is not None and decision.mode == 'full' and static_trip_count(directive.associated, result) is None:
            errors.append(Diagnostic.error(FULL_NOT_CONSTANT, directive.loc, [
                Diagnostic.note("loop with a runtime trip count is here", directive.associated.loc),
            ]))

    if errors:
        logger.debug(f"Semantic analysis of {program.filename} found {len(errors)} error(s)")
        raise SemaError(errors[0], tuple(errors[1:]))
    logger.info(f"Semantic analysis passed: {len(directives)} directive(s), {len(result.canonical_loops)} canonical loop(s)")
    return result
