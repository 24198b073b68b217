"""Shadow-AST backend: build a transformed statement per directive.

Transformations work in the normalized logical iteration space (counters
from 0) and re-materialize each user variable through its user-value
closure. Transformed statements are kept in a ShadowTable keyed by the
directive node; the syntactic tree itself is never modified.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable

from ..config import MAX_FULL_UNROLL
from ..models.CanonicalLoop import OMPCanonicalLoop
from ..models.Diagnostic import Diagnostic, SemaError, TransformError
from ..models.Expr import Expr, IntLiteral, VarRef, convert, literal, make_binary
from ..models.IntType import IntType
from ..models.SourceLocation import BUILTIN_LOC, SourceLocation
from ..models.Stmt import (
    Assign,
    AttributedStmt,
    Compound,
    Directive,
    DirectiveKind,
    ForStmt,
    IfStmt,
    IncDec,
    LoopHintAttr,
    Provenance,
    ScheduleClause,
    SizesClause,
    Stmt,
    VarDecl,
)
from ..models.TransformOptions import TransformOptions
from ..models.UnrollDecision import UnrollDecision
from .diagnostic_utils import is_internal_name, provenance_notes
from .eval_utils import fold_constant
from .rewrite_utils import (
    NodeTransformer,
    assigned_names,
    declared_names,
    directives_in,
    substitute,
    tag_threads,
    var_refs,
)
from .sema_utils import (
    BEGIN,
    END,
    FULL_NOT_CONSTANT,
    INSUFFICIENT_DEPTH,
    LOGICAL_INPUT,
    analyze_canonical_loop,
    clause_constant,
    constant_trip_count,
    required_depth,
    resolve_unroll,
)

logger = logging.getLogger(__name__)


class ShadowTable:
    """Side table from directive node to its transformed statement."""

    def __init__(self):
        self._entries: dict[Directive, Stmt] = {}
        self.decisions: dict[Directive, UnrollDecision] = {}

    def get(self, directive: Directive) -> Stmt | None:
        return self._entries.get(directive)

    def set(self, directive: Directive, stmt: Stmt) -> None:
        self._entries[directive] = stmt

    def hints(self) -> dict[Directive, UnrollDecision]:
        """Unroll directives left to the backend (no clause, no consumer)."""
        return {d: u for d, u in self.decisions.items() if u.mode == 'deferred'}

    def items(self):
        return self._entries.items()

    def __contains__(self, directive) -> bool:
        return directive in self._entries

    def __len__(self) -> int:
        return len(self._entries)


@dataclass
class LogicalLoop:
    """A canonical loop lowered to logical space.

    Attributes:
        canonical (OMPCanonicalLoop): The analyzed loop
        trip (Expr): Trip count, a literal or a prelude variable
        begin (Expr): Start value snapshot, a literal or a prelude variable
        prelude (list[Stmt]): Declarations to run once before the nest
    """

    canonical: OMPCanonicalLoop
    trip: Expr
    begin: Expr
    prelude: list[Stmt] = field(default_factory=list)

    @property
    def name(self) -> str:
        return self.canonical.user_var.name

    @property
    def logical_type(self) -> IntType:
        return self.canonical.logical_type

    @property
    def body(self) -> Stmt:
        return self.canonical.loop.body

    def user_value(self, index: Expr) -> Expr:
        value = substitute(self.canonical.user_value.body, {BEGIN: self.begin, LOGICAL_INPUT: index})
        return _fold(value)

    def bind_user_var(self, index: Expr, loc: SourceLocation) -> Stmt:
        """Declare or assign the user variable for logical iteration ``index``."""
        user = self.canonical.user_var
        value = self.user_value(index)
        if isinstance(self.canonical.loop.init, VarDecl):
            return VarDecl(user.name, user.type, value, loc=loc)
        return Assign(user, '=', value, loc=loc)


@dataclass
class LogicalSpace:
    """Iteration space handed to worksharing: a trip count and a binder."""

    trip: Expr
    logical_type: IntType
    name: str
    bind: Callable[[Expr], list[Stmt]]
    body: Stmt
    prelude: list[Stmt]
    parent: Provenance | None


def _fold(expr: Expr) -> Expr:
    value = fold_constant(expr)
    return literal(value, expr.type, expr.loc) if value is not None else expr


def _arith(op: str, a: Expr, b: Expr) -> Expr:
    return _fold(make_binary(op, a, b))


def ceil_div(n: Expr, divisor: int, logical: IntType) -> Expr:
    """``ceil(n / divisor)`` without overflow: ``n / d + (n % d != 0)``."""
    if divisor == 1:
        return n
    if isinstance(n, IntLiteral):
        return literal(-(-n.value // divisor), logical)
    d = literal(divisor, logical)
    remainder = make_binary('!=', make_binary('%', n, d), literal(0, logical))
    return make_binary('+', make_binary('/', n, d), convert(remainder, logical))


def materialize(canonical: OMPCanonicalLoop, known: dict[str, int] | None = None,
                loc: SourceLocation = BUILTIN_LOC) -> LogicalLoop:
    """Compute the trip count and start snapshot, folding them when constant."""
    name = canonical.user_var.name
    logical = canonical.logical_type
    prelude: list[Stmt] = []
    lb = canonical.distance.capture(BEGIN).init
    begin_value = fold_constant(lb, known)
    if begin_value is not None:
        begin = literal(begin_value, lb.type)
    else:
        capture = f"capture.begin.{name}"
        prelude.append(VarDecl(capture, lb.type, lb, loc=loc))
        begin = VarRef(capture, lb.type, loc=loc)

    trip_value = constant_trip_count(canonical, known)
    if trip_value is not None:
        trip = literal(trip_value, logical)
    else:
        ub = canonical.distance.capture(END).init
        count = substitute(canonical.distance.body, {BEGIN: begin, END: ub})
        variable = f"tripcount.{name}"
        prelude.append(VarDecl(variable, logical, count, loc=loc))
        trip = VarRef(variable, logical, loc=loc)
    return LogicalLoop(canonical, trip, begin, prelude)


def logical_for(name: str, logical: IntType, start: Expr, bounds: list[Expr], step: int,
                body: Stmt, provenance: Provenance, loc: SourceLocation) -> ForStmt:
    """Counting loop ``for (T name = start; name < b1 && ...; name += step)``."""
    iv = VarRef(name, logical, loc=loc)
    cond = make_binary('<', iv, bounds[0], loc=loc)
    for bound in bounds[1:]:
        cond = make_binary('&&', cond, make_binary('<', iv, bound, loc=loc), loc=loc)
    if step == 1:
        incr = IncDec(iv, '++', True, loc=loc)
    else:
        incr = Assign(iv, '+=', literal(step, logical, loc), loc=loc)
    init = VarDecl(name, logical, convert(start, logical), loc=loc)
    return ForStmt(init, cond, incr, body, provenance, loc=loc)


def _with_prelude(prelude: list[Stmt], stmt: Stmt) -> Stmt:
    if not prelude:
        return stmt
    loc = stmt.loc
    return Compound(tuple(prelude) + (stmt,), loc=loc)


def _origin(directive: Directive | None, canonical: OMPCanonicalLoop) -> tuple[Provenance, SourceLocation]:
    if directive is None:
        return Provenance('#pragma omp', canonical.loc, canonical.loop.provenance), canonical.loc
    return Provenance(directive.spelling, directive.loc, canonical.loop.provenance), directive.loc


# Tiling


def shadow_tile(nest: list[OMPCanonicalLoop], sizes: list[int], directive: Directive | None = None) -> Stmt:
    """Tile a perfect nest into floor loops followed by tile loops.

    Floor loop ``k`` runs over ``[0, ceil(n_k / s_k))``; tile loop ``k`` over
    ``[f_k * s_k, min((f_k + 1) * s_k, n_k))`` with the minimum written as a
    conjunction of two bounds.

    Raises:
        ValueError: If the nest and the sizes differ in length or a size is not positive
    """
    if len(nest) != len(sizes) or not nest:
        raise ValueError(f"Tiling needs one size per loop, got {len(sizes)} sizes for {len(nest)} loops")
    if any(s < 1 for s in sizes):
        raise ValueError(f"Tile sizes must be positive, got {sizes}")
    loc = directive.loc if directive is not None else nest[0].loc
    loops = [materialize(c, loc=loc) for c in nest]
    floors = [VarRef(f"tile.f{k}.{loop.name}", loop.logical_type, loc=loc) for k, loop in enumerate(loops)]
    tiles = [VarRef(f"tile.t{k}.{loop.name}", loop.logical_type, loc=loc) for k, loop in enumerate(loops)]

    bindings = tuple(loop.bind_user_var(tiles[k], loc) for k, loop in enumerate(loops))
    stmt: Stmt = Compound(bindings + (loops[-1].body,), loc=loc)
    for k in reversed(range(len(loops))):
        loop, size = loops[k], literal(sizes[k], loops[k].logical_type)
        provenance, _ = _origin(directive, nest[k])
        start = make_binary('*', floors[k], size)
        stmt = logical_for(tiles[k].name, loop.logical_type, start,
                           [make_binary('+', start, size), loop.trip], 1, stmt, provenance, loc)
    for k in reversed(range(len(loops))):
        loop = loops[k]
        provenance, _ = _origin(directive, nest[k])
        stmt = logical_for(floors[k].name, loop.logical_type, literal(0, loop.logical_type),
                           [ceil_div(loop.trip, sizes[k], loop.logical_type)], 1, stmt, provenance, loc)
    logger.debug(f"Tiled {len(nest)}-deep nest with sizes {sizes}")
    return _with_prelude([d for loop in loops for d in loop.prelude], stmt)


# Unrolling


def _instance(loop: LogicalLoop, index: Expr, loc: SourceLocation) -> Compound:
    return Compound((loop.bind_user_var(index, loc), loop.body), loc=loc)


def shadow_unroll_partial(canonical: OMPCanonicalLoop, factor: int, strategy: str,
                          directive: Directive | None = None) -> Stmt:
    """Partially unroll a loop, keeping the body execution order.

    Strategies:
        guarded-clone: step by ``factor``, clone ``j`` guarded by ``k + j < n``
        remainder-loop: unguarded main loop plus a loop over the tail
        strip-mine-hint: step by ``factor`` with an inner loop carrying an
            unroll-count hint, deferring the duplication

    Raises:
        ValueError: If the factor is not positive or the strategy is unknown
    """
    if factor < 1:
        raise ValueError(f"Unroll factor must be positive, got {factor}")
    if strategy not in ('guarded-clone', 'remainder-loop', 'strip-mine-hint'):
        raise ValueError(f"Unknown unroll strategy: {strategy}")
    provenance, loc = _origin(directive, canonical)
    loop = materialize(canonical, loc=loc)
    logical, n = loop.logical_type, loop.trip
    outer = VarRef(f"unrolled.iv.{loop.name}", logical, loc=loc)
    zero = literal(0, logical)

    if factor == 1:
        result: Stmt = logical_for(outer.name, logical, zero, [n], 1, _instance(loop, outer, loc), provenance, loc)
    elif strategy == 'guarded-clone':
        clones: list[Stmt] = [_instance(loop, outer, loc)]
        for j in range(1, factor):
            index = make_binary('+', outer, literal(j, logical))
            clones.append(IfStmt(make_binary('<', index, n), _instance(loop, index, loc), loc=loc))
        result = logical_for(outer.name, logical, zero, [n], factor, Compound(tuple(clones), loc=loc), provenance, loc)
    elif strategy == 'remainder-loop':
        main_bound = _arith('-', n, _arith('%', n, literal(factor, logical)))
        clones = [_instance(loop, _arith('+', outer, literal(j, logical)), loc) for j in range(factor)]
        main = logical_for(outer.name, logical, zero, [main_bound], factor, Compound(tuple(clones), loc=loc),
                           provenance, loc)
        rest = VarRef(f"unrolled.iv.{loop.name}.rem", logical, loc=loc)
        tail = logical_for(rest.name, logical, main_bound, [n], 1, _instance(loop, rest, loc), provenance, loc)
        result = Compound((main, tail), loc=loc)
    else:
        inner = VarRef(f"unroll_inner.iv.{loop.name}", logical, loc=loc)
        inner_loop = logical_for(inner.name, logical, outer, [make_binary('+', outer, literal(factor, logical)), n],
                                 1, _instance(loop, inner, loc), provenance, loc)
        hinted = AttributedStmt((LoopHintAttr('unroll-count', factor),), inner_loop, loc=loc)
        result = logical_for(outer.name, logical, zero, [n], factor, hinted, provenance, loc)
    logger.debug(f"Partially unrolled loop over '{loop.name}' by {factor} ({strategy})")
    return _with_prelude(loop.prelude, result)


class HintExpander(NodeTransformer):
    """Fully unroll hinted inner loops whose trip count became constant."""

    def __init__(self, known: dict[str, int]):
        self.known = dict(known)

    def visit_Compound(self, node: Compound) -> Stmt:
        saved = dict(self.known)
        stmts = []
        changed = False
        for stmt in node.stmts:
            new = self.visit(stmt)
            changed = changed or new is not stmt
            stmts.append(new)
            if isinstance(stmt, (VarDecl, Assign)):
                self._record(stmt)
        self.known = saved
        return Compound(tuple(stmts), loc=node.loc) if changed else node

    def visit_ForStmt(self, node: ForStmt) -> Stmt:
        saved = dict(self.known)
        for name in set(assigned_names(node)) | declared_names(node):
            self.known.pop(name, None)
        result = self.generic_visit(node)
        self.known = saved
        return result

    def _record(self, stmt: VarDecl | Assign) -> None:
        if isinstance(stmt, VarDecl):
            name, value = stmt.name, stmt.init
        elif stmt.op == '=':
            name, value = stmt.target.name, stmt.value
        else:
            self.known.pop(stmt.target.name, None)
            return
        folded = fold_constant(value, self.known) if value is not None else None
        if folded is None:
            self.known.pop(name, None)
        else:
            self.known[name] = folded

    def visit_AttributedStmt(self, node: AttributedStmt) -> Stmt:
        if isinstance(node.stmt, ForStmt):
            try:
                canonical = analyze_canonical_loop(node.stmt)
            except SemaError:
                return self.generic_visit(node)
            if constant_trip_count(canonical, self.known) is not None:
                return shadow_unroll_full(canonical, known=self.known)
        return self.generic_visit(node)


def shadow_unroll_full(canonical: OMPCanonicalLoop, directive: Directive | None = None,
                       known: dict[str, int] | None = None) -> Compound:
    """Replace a loop by its body instances, one per iteration.

    Hinted inner loops whose trip counts become constant are expanded too.

    Raises:
        TransformError: If the trip count is not a compile-time constant or
            exceeds the expansion limit
    """
    known = known or {}
    trip = constant_trip_count(canonical, known)
    notes = provenance_notes(canonical.loop.provenance)
    if trip is None:
        raise TransformError.at(FULL_NOT_CONSTANT, (directive or canonical).loc, notes)
    if trip > MAX_FULL_UNROLL:
        raise TransformError.at(
            f"cannot fully unroll: trip count {trip} exceeds the limit of {MAX_FULL_UNROLL}",
            (directive or canonical).loc, notes,
        )
    _, loc = _origin(directive, canonical)
    loop = materialize(canonical, known, loc=loc)
    instances = []
    for k in range(trip):
        binding = loop.bind_user_var(literal(k, loop.logical_type), loc)
        instance: Stmt = Compound((binding, loop.body), loc=loc)
        instances.append(HintExpander(known).visit(instance))
    logger.debug(f"Fully unrolled loop over '{loop.name}' into {trip} instance(s)")
    return Compound(tuple(instances), loc=loc)


# Collapse and worksharing


def _product(values: list[Expr], logical: IntType) -> Expr:
    result: Expr = literal(1, logical)
    for value in values:
        result = _arith('*', result, convert(value, logical))
    return result


def collapse_space(nest: list[OMPCanonicalLoop], directive: Directive | None = None) -> LogicalSpace:
    """Linearize a perfect nest into one logical space (row-major)."""
    loc = directive.loc if directive is not None else nest[0].loc
    loops = [materialize(c, loc=loc) for c in nest]
    if len(loops) == 1:
        single = loops[0]
        return LogicalSpace(single.trip, single.logical_type, single.name,
                            lambda index: [single.bind_user_var(index, loc)],
                            single.body, single.prelude, nest[0].loop.provenance)

    wide = max((loop.logical_type for loop in loops), key=lambda t: t.bits)

    def bind(index: Expr) -> list[Stmt]:
        bindings = []
        for k, loop in enumerate(loops):
            divisor = _product([inner.trip for inner in loops[k + 1:]], wide)
            position = index if isinstance(divisor, IntLiteral) and divisor.value == 1 else make_binary('/', index, divisor)
            if k > 0:
                position = make_binary('%', position, convert(loop.trip, wide))
            bindings.append(loop.bind_user_var(_fold(convert(position, loop.logical_type)), loc))
        return bindings

    name = '.'.join(loop.name for loop in loops)
    return LogicalSpace(_product([loop.trip for loop in loops], wide), wide, name, bind,
                        loops[-1].body, [d for loop in loops for d in loop.prelude], nest[0].loop.provenance)


def shadow_collapse(nest: list[OMPCanonicalLoop], directive: Directive | None = None) -> Stmt:
    """One loop over the product of the trip counts; indices recovered by div/mod."""
    space = collapse_space(nest, directive)
    loc = directive.loc if directive is not None else nest[0].loc
    provenance = Provenance(directive.spelling if directive else '#pragma omp', loc, space.parent)
    iv = VarRef(f"collapsed.iv.{space.name}", space.logical_type, loc=loc)
    body = Compound(tuple(space.bind(iv)) + (space.body,), loc=loc)
    loop = logical_for(iv.name, space.logical_type, literal(0, space.logical_type), [space.trip], 1, body, provenance, loc)
    return _with_prelude(space.prelude, loop)


def shadow_workshare(space: LogicalSpace, num_threads: int, chunk: int | None = None,
                     directive: Directive | None = None) -> Stmt:
    """Distribute a logical space over a simulated thread team.

    Without ``chunk`` thread ``t`` runs ``[t*B, min((t+1)*B, n))`` with
    ``B = ceil(n / T)``; with ``chunk`` it runs the chunks ``k`` with
    ``k mod T = t``. Every ``body`` call is tagged with the thread id.

    Raises:
        ValueError: If the thread count or chunk is not positive
    """
    if num_threads < 1:
        raise ValueError(f"Thread count must be positive, got {num_threads}")
    if chunk is not None and chunk < 1:
        raise ValueError(f"Chunk size must be positive, got {chunk}")
    loc = directive.loc if directive is not None else space.body.loc
    provenance = Provenance(directive.spelling if directive else '#pragma omp for', loc, space.parent)
    logical, n = space.logical_type, space.trip
    thread = VarRef('omp.thread', logical, loc=loc)
    iv = VarRef(f"omp.iv.{space.name}", logical, loc=loc)
    body = Compound(tuple(space.bind(iv)) + (tag_threads(space.body, thread),), loc=loc)

    if chunk is None:
        block = ceil_div(n, num_threads, logical)
        start = make_binary('*', thread, block)
        per_thread: Stmt = logical_for(iv.name, logical, start, [make_binary('+', start, block), n], 1,
                                       body, provenance, loc)
    else:
        size = literal(chunk, logical)
        chunk_iv = VarRef(f"omp.chunk.{space.name}", logical, loc=loc)
        start = make_binary('*', chunk_iv, size)
        inner = logical_for(iv.name, logical, start, [make_binary('+', start, size), n], 1, body, provenance, loc)
        per_thread = logical_for(chunk_iv.name, logical, thread, [ceil_div(n, chunk, logical)], num_threads,
                                 inner, provenance, loc)
    team = logical_for(thread.name, logical, literal(0, logical), [literal(num_threads, logical)], 1,
                       per_thread, provenance, loc)
    schedule = f"static-chunk({chunk})" if chunk is not None else 'static-block'
    logger.debug(f"Workshared loop over '{space.name}' across {num_threads} thread(s), {schedule}")
    return _with_prelude(space.prelude, team)


# Composition


class DirectiveInliner(NodeTransformer):
    """Replace directives nested in a statement by their transformed statements."""

    def __init__(self, table: ShadowTable, options: TransformOptions):
        self.table = table
        self.options = options

    def visit_Directive(self, node: Directive) -> Stmt:
        return self.visit(get_transformed_stmt(node, self.table, self.options))


def collect_nest(stmt: Stmt, depth: int, table: ShadowTable, options: TransformOptions,
                 directive: Directive) -> tuple[list[Stmt], list[OMPCanonicalLoop]]:
    """Find ``depth`` perfectly nested canonical loops, resolving inner directives.

    Returns:
        tuple: (hoisted prelude declarations, canonical loops outermost first)

    Raises:
        TransformError: If the nest is too shallow or not rectangular
    """
    prelude: list[Stmt] = []
    nest: list[OMPCanonicalLoop] = []
    current = stmt
    while len(nest) < depth:
        if isinstance(current, AttributedStmt):
            current = current.stmt
        elif isinstance(current, OMPCanonicalLoop):
            current = current.loop
        elif isinstance(current, Directive):
            current = get_transformed_stmt(current, table, options, consumed=True)
        elif isinstance(current, Compound) and len(current.stmts) == 1:
            current = current.stmts[0]
        elif isinstance(current, Compound) and current.stmts and all(
                isinstance(s, VarDecl) and is_internal_name(s.name) for s in current.stmts[:-1]):
            prelude.extend(current.stmts[:-1])
            current = current.stmts[-1]
        elif isinstance(current, ForStmt):
            canonical = analyze_canonical_loop(current)
            _check_rectangular(canonical, nest, prelude)
            nest.append(canonical)
            current = current.body
        else:
            break
    if len(nest) < depth:
        raise TransformError.at(INSUFFICIENT_DEPTH, directive.loc, [
            Diagnostic.note(f"'{directive.spelling}' requires {depth} nested loop(s) but {len(nest)} are available",
                            directive.loc),
        ])
    return prelude, nest


def _check_rectangular(canonical: OMPCanonicalLoop, outer: list[OMPCanonicalLoop], prelude: list[Stmt]) -> None:
    form = canonical.form
    used = var_refs(form.lb) | var_refs(form.ub)
    for decl in prelude:
        if decl.name in used and decl.init is not None:
            used |= var_refs(decl.init)
    for loop in outer:
        if loop.user_var.name in used:
            notes = [Diagnostic.note("inner loop bounds depend on an outer loop", canonical.loc)]
            notes += provenance_notes(canonical.loop.provenance)
            raise TransformError.at("cannot transform a non-rectangular loop nest", outer[0].loc, notes)


def get_transformed_stmt(directive: Directive, table: ShadowTable, options: TransformOptions | None = None,
                         consumed: bool = False) -> Stmt:
    """Transformed statement of a directive, composing innermost first.

    The associated statement is resolved first (an inner directive
    contributes its own transformed statement), then this directive's
    transformation is applied. Results are cached in ``table``.

    Args:
        directive: Directive that passed semantic analysis
        table: Shadow side table, updated in place
        options: Strategy, heuristic factor and thread count
        consumed: True if an outer directive uses the generated loop

    Returns:
        Stmt: The transformed statement

    Raises:
        TransformError: If the transformation is impossible
        SemaError: If a generated loop is not in canonical form
    """
    cached = table.get(directive)
    if cached is not None:
        return cached
    options = options or TransformOptions()
    prelude, nest = collect_nest(directive.associated, required_depth(directive), table, options, directive)

    if directive.kind is DirectiveKind.TILE:
        sizes = [clause_constant(s) for s in directive.clause(SizesClause).sizes]
        result = shadow_tile(nest, sizes, directive)
    elif directive.kind is DirectiveKind.UNROLL:
        decision = resolve_unroll(directive, consumed, options.heuristic_factor)
        table.decisions[directive] = decision
        if decision.mode == 'full':
            result = shadow_unroll_full(nest[0], directive)
        elif decision.mode == 'deferred':
            result = nest[0].loop
        else:
            strategy = options.unroll_strategy
            if consumed and strategy == 'remainder-loop':
                logger.warning(
                    f"Unroll at {directive.loc} is consumed by an outer directive; "
                    f"using guarded-clone instead of remainder-loop"
                )
                strategy = 'guarded-clone'
            result = shadow_unroll_partial(nest[0], decision.factor, strategy, directive)
    else:
        schedule = directive.clause(ScheduleClause)
        space = collapse_space(nest, directive)
        # Thread tags must reach calls inside nested directives too
        space.body = DirectiveInliner(table, options).visit(space.body)
        chunk = clause_constant(schedule.chunk) if schedule is not None and schedule.chunk is not None else None
        result = shadow_workshare(space, options.num_threads, chunk, directive)

    result = _with_prelude(prelude, result)
    table.set(directive, result)
    logger.debug(f"Shadow statement built for '{directive.spelling}' at {directive.loc}")
    return result


def transform_program(program, options: TransformOptions | None = None) -> ShadowTable:
    """Build transformed statements for every directive of a program."""
    options = options or TransformOptions()
    table = ShadowTable()
    for directive in directives_in(program):
        if directive not in table:
            get_transformed_stmt(directive, table, options)
    logger.info(f"Shadow backend transformed {len(table)} directive(s) ({options.unroll_strategy})")
    return table
