"""Loop transformations on CanonicalLoopInfo handles.

Every transformation rebuilds the nest with fresh skeletons and abandons
the input handles. The old outermost preheader becomes the setup block
(trip counts of the new loops are computed there), the body of the old
innermost loop is moved (or cloned) into the new innermost body, and the
new outermost after block jumps to the old one, where the surrounding code
continues.
"""

import logging

from ..config import HEURISTIC_UNROLL_FACTOR, MAX_FULL_UNROLL
from ..models.CanonicalLoopInfo import CanonicalLoopInfo
from ..models.Diagnostic import Diagnostic, DivisionByZeroError, ImperfectNestError, TransformError
from ..models.IRModule import ARITH_OPS, CMP_OPS, IRModule
from ..models.IntType import IntType
from .eval_utils import apply_ir_binop, apply_ir_compare
from .irbuilder_utils import (
    IRBuilder,
    body_region,
    clone_region,
    create_canonical_loop,
    defining_block,
    loop_region,
    replace_uses,
    retarget,
)
from .sema_utils import FULL_NOT_CONSTANT

logger = logging.getLogger(__name__)

UNROLL_MODES = ('full', 'partial', 'heuristic')


def constant_value(module: IRModule, value: int) -> int | None:
    """Fold a value built from constants only; None for phis, loads or division by zero."""
    definitions = {v: instr for v, (_, instr) in module.values.items()}
    cache: dict[int, int | None] = {}

    def fold(v: int) -> int | None:
        if v in cache:
            return cache[v]
        cache[v] = None
        instr = definitions.get(v)
        result = None
        if instr is None:
            result = None
        elif instr.op == 'const':
            result = instr.imm
        elif instr.op == 'cast':
            operand = fold(instr.args[0])
            result = instr.type.wrap(operand) if operand is not None else None
        elif instr.op in ARITH_OPS or instr.op in CMP_OPS or instr.op == 'select':
            operands = [fold(a) for a in instr.args]
            if None not in operands:
                try:
                    if instr.op in ARITH_OPS:
                        result = apply_ir_binop(instr.op, operands[0], operands[1], instr.type)
                    elif instr.op in CMP_OPS:
                        operand_type = definitions[instr.args[0]].type
                        result = apply_ir_compare(instr.op, operands[0], operands[1], operand_type)
                    else:
                        result = operands[1] if operands[0] else operands[2]
                except DivisionByZeroError:
                    result = None
        cache[v] = result
        return result

    return fold(value)


def _type_of(module: IRModule, value: int) -> IntType:
    return module.values[value][1].type


def ceil_div(builder: IRBuilder, n: int, divisor: int, type_: IntType) -> int:
    """``n udiv d + (n urem d != 0)``; never overflows."""
    if divisor == 1:
        return n
    d = builder.const(divisor, type_)
    quotient = builder.binop('udiv', n, d, type_)
    remainder = builder.binop('urem', n, d, type_)
    nonzero = builder.icmp('icmp-ne', remainder, builder.const(0, type_))
    return builder.binop('add', quotient, builder.cast(nonzero, type_), type_)


def umin(builder: IRBuilder, a: int, b: int, type_: IntType) -> int:
    less = builder.icmp('icmp-ult', a, b)
    return builder.select(less, a, b, type_)


# Nest discipline


def _check_valid(loops: list[CanonicalLoopInfo]) -> None:
    if not loops:
        raise ValueError("A transformation needs at least one loop")
    for loop in loops:
        loop.assert_valid()
    if len({id(loop) for loop in loops}) != len(loops):
        raise ValueError("The same loop handle was passed twice")


def _imperfect(message: str, loop: CanonicalLoopInfo) -> ImperfectNestError:
    return ImperfectNestError.at(message, notes=[Diagnostic.note(f"in loop '{loop.name}'")])


def perfect_nest(module: IRModule, loops: list[CanonicalLoopInfo]) -> tuple[list, list[str]]:
    """Check that ``loops`` form a perfect nest with trip counts computed outside it.

    Returns:
        tuple: (prologue instructions of the outer levels, blocks of the
        innermost body region)

    Raises:
        InvalidHandleError: If a handle was abandoned
        ImperfectNestError: If a level holds more than the next loop, or a
            trip count depends on the nest
    """
    _check_valid(loops)
    prologue = []
    for outer, inner in zip(loops, loops[1:]):
        entry = module.block(outer.body_entry)
        if entry.terminator is None or entry.terminator.targets != (inner.preheader,):
            raise _imperfect("loop nest is not perfectly nested", outer)
        after = module.block(inner.after)
        if after.instructions or after.terminator is None or after.terminator.targets != (outer.latch,):
            raise _imperfect("loop nest is not perfectly nested: code follows the inner loop", outer)
        prologue.extend(entry.instructions)
    outermost = loop_region(module, loops[0])
    for loop in loops:
        where = defining_block(module, loop.trip_count)
        if where is None or where in outermost:
            raise _imperfect("trip count is computed inside the loop nest", loop)
    return prologue, body_region(module, loops[-1])


class _Rebuild:
    """Bookkeeping shared by the transformations that replace a nest."""

    def __init__(self, module: IRModule, loops: list[CanonicalLoopInfo]):
        self.module = module
        self.loops = loops
        self.prologue, self.region = perfect_nest(module, loops)
        setup = module.block(loops[0].preheader)
        setup.terminator = None
        self.builder = IRBuilder(module, setup)

    def move_body(self, builder: IRBuilder, mapping: dict[int, int], name: str) -> None:
        """Move prologue and innermost body into the current block, then continue in a join block."""
        builder.block.instructions.extend(self.prologue)
        region_blocks = [self.module.block(label) for label in self.region]
        replace_uses([builder.block] + region_blocks, mapping)
        join = self.module.add_block(f"{name}.cont")
        retarget(region_blocks, self.loops[-1].latch, join.label)
        builder.jump(self.loops[-1].body_entry)
        builder.position_at(join)

    def finish(self, extra_doomed=()) -> None:
        self.builder.jump(self.loops[0].after)
        doomed = set(extra_doomed)
        for k, loop in enumerate(self.loops):
            doomed |= {loop.header, loop.cond, loop.latch, loop.exit}
            if k > 0:
                doomed |= {loop.preheader, loop.after}
            if k < len(self.loops) - 1:
                doomed.add(loop.body_entry)
        self.module.remove_blocks(doomed)
        for loop in self.loops:
            loop.invalidate()
            logger.debug(f"Invalidated loop handle '{loop.name}'")


# Transformations


def tile_loops(module: IRModule, loops: list[CanonicalLoopInfo], sizes: list[int]) -> list[CanonicalLoopInfo]:
    """Tile a perfect nest; returns the floor loops followed by the tile loops.

    Floor loop ``k`` runs ``ceil(n_k / s_k)`` times; tile loop ``k`` runs
    ``min(s_k, n_k - f_k * s_k)`` times, computed in the innermost floor
    body. The original logical index is ``f_k * s_k + t_k``.

    Args:
        module: Module holding the nest
        loops: Perfect nest, outermost first
        sizes: One positive tile size per loop

    Returns:
        list[CanonicalLoopInfo]: 2d valid handles

    Raises:
        ValueError: If sizes and loops differ in length or a size is not positive
        InvalidHandleError: If a handle was abandoned
        ImperfectNestError: If the loops do not form a perfect nest
    """
    if len(sizes) != len(loops):
        raise ValueError(f"Tiling needs one size per loop, got {len(sizes)} sizes for {len(loops)} loops")
    if any(s < 1 for s in sizes):
        raise ValueError(f"Tile sizes must be positive, got {sizes}")
    rebuild = _Rebuild(module, loops)
    depth = len(loops)
    counts = [loop.trip_count for loop in loops]
    types = [_type_of(module, n) for n in counts]
    names = [loop.name for loop in loops]
    floor_counts = [ceil_div(rebuild.builder, n, s, t) for n, s, t in zip(counts, sizes, types)]
    handles: dict[int, CanonicalLoopInfo] = {}
    floors: list[int] = [0] * depth
    starts: list[int] = [0] * depth
    tiles: list[int] = [0] * depth

    def tile_emitter(k: int):
        def emit(builder: IRBuilder, tile: int) -> None:
            tiles[k] = tile
            if k + 1 < depth:
                handles[depth + k + 1] = create_canonical_loop(builder, tile_counts[k + 1], tile_emitter(k + 1),
                                                               f"tile.t{k + 1}.{names[k + 1]}")
                return
            mapping = {loop.indvar: builder.binop('add', starts[j], tiles[j], types[j])
                       for j, loop in enumerate(loops)}
            rebuild.move_body(builder, mapping, f"tile.t{k}.{names[k]}")
        return emit

    tile_counts: list[int] = []

    def floor_emitter(k: int):
        def emit(builder: IRBuilder, floor: int) -> None:
            floors[k] = floor
            if k + 1 < depth:
                handles[k + 1] = create_canonical_loop(builder, floor_counts[k + 1], floor_emitter(k + 1),
                                                       f"tile.f{k + 1}.{names[k + 1]}")
                return
            for j in range(depth):
                size = builder.const(sizes[j], types[j])
                starts[j] = builder.binop('mul', floors[j], size, types[j])
                remaining = builder.binop('sub', counts[j], starts[j], types[j])
                tile_counts.append(umin(builder, size, remaining, types[j]))
            handles[depth] = create_canonical_loop(builder, tile_counts[0], tile_emitter(0), f"tile.t0.{names[0]}")
        return emit

    handles[0] = create_canonical_loop(rebuild.builder, floor_counts[0], floor_emitter(0), f"tile.f0.{names[0]}")
    rebuild.finish()
    logger.debug(f"Tiled {depth}-deep nest with sizes {sizes}")
    return [handles[k] for k in range(2 * depth)]


def collapse_loops(module: IRModule, loops: list[CanonicalLoopInfo]) -> CanonicalLoopInfo:
    """Replace a perfect nest by one loop over the product of its trip counts.

    Inside the body, index ``k`` is recovered as
    ``(linear udiv prod(n_j, j > k)) urem n_k`` in the widest counter type.

    Raises:
        InvalidHandleError: If a handle was abandoned
        ImperfectNestError: If the loops do not form a perfect nest
    """
    rebuild = _Rebuild(module, loops)
    builder = rebuild.builder
    types = [_type_of(module, loop.trip_count) for loop in loops]
    wide = max(types, key=lambda t: t.bits)
    counts = [loop.trip_count if t == wide else builder.cast(loop.trip_count, wide) for loop, t in zip(loops, types)]
    inner_products: list[int | None] = [None] * len(loops)
    product = None
    for k in reversed(range(len(loops))):
        inner_products[k] = product
        product = counts[k] if product is None else builder.binop('mul', counts[k], product, wide)
    name = 'collapsed.' + '.'.join(loop.name for loop in loops)

    def emit(body: IRBuilder, linear: int) -> None:
        mapping = {}
        for k, loop in enumerate(loops):
            index = linear
            if inner_products[k] is not None:
                index = body.binop('udiv', index, inner_products[k], wide)
            if k > 0:
                index = body.binop('urem', index, counts[k], wide)
            if types[k] != wide:
                index = body.cast(index, types[k])
            mapping[loop.indvar] = index
        rebuild.move_body(body, mapping, name)

    handle = create_canonical_loop(builder, product, emit, name)
    rebuild.finish()
    logger.debug(f"Collapsed {len(loops)}-deep nest into '{handle.name}'")
    return handle


def unroll_loop(module: IRModule, loop: CanonicalLoopInfo, mode: str, factor: int | None = None,
                heuristic_factor: int = HEURISTIC_UNROLL_FACTOR) -> CanonicalLoopInfo | None:
    """Unroll a loop fully, partially, or by the heuristic factor.

    ``full`` clones the body once per iteration and returns None. ``partial``
    strip-mines by ``factor`` and fully unrolls the inner loop; clone ``j``
    runs only if ``floor * factor + j`` is below the trip count. It returns
    the floor loop. ``heuristic`` is ``partial`` with ``heuristic_factor``,
    recorded on the returned handle.

    Raises:
        ValueError: If the mode is unknown or the factor is not positive
        TransformError: If ``full`` is asked for a non-constant trip count
        InvalidHandleError: If the handle was abandoned
    """
    if mode not in UNROLL_MODES:
        raise ValueError(f"Unknown unroll mode: {mode}. Use one of: {', '.join(UNROLL_MODES)}")
    if mode == 'heuristic':
        factor = heuristic_factor
    if mode != 'full' and (factor is None or factor < 1):
        raise ValueError(f"Unroll factor must be positive, got {factor}")
    loop.assert_valid()
    if mode == 'full':
        trip = constant_value(module, loop.trip_count)
        if trip is None:
            raise TransformError.at(FULL_NOT_CONSTANT, notes=[Diagnostic.note(f"in loop '{loop.name}'")])
        if trip > MAX_FULL_UNROLL:
            raise TransformError.at(f"cannot fully unroll: trip count {trip} exceeds the limit of {MAX_FULL_UNROLL}")

    rebuild = _Rebuild(module, [loop])
    builder = rebuild.builder
    type_ = _type_of(module, loop.trip_count)
    n = loop.trip_count

    def emit_clones(body: IRBuilder, indices: list[int], guarded: bool, prefix: str) -> None:
        for j, index in enumerate(indices):
            join = module.add_block(f"{prefix}.u{j}.next")
            entry = clone_region(module, rebuild.region, {loop.indvar: index}, loop.latch, join.label, f"u{j}")
            if guarded and j > 0:
                body.branch(body.icmp('icmp-ult', index, n), entry, join.label)
            else:
                body.jump(entry)
            body.position_at(join)

    if mode == 'full':
        indices = [builder.const(k, type_) for k in range(trip)]
        emit_clones(builder, indices, False, f"{loop.name}.unrolled")
        rebuild.finish(rebuild.region)
        logger.debug(f"Fully unrolled loop '{loop.name}' into {trip} copies")
        return None

    name = f"unrolled.{loop.name}"

    def emit(body: IRBuilder, floor: int) -> None:
        base = body.binop('mul', floor, body.const(factor, type_), type_) if factor > 1 else floor
        indices = [base] + [body.binop('add', base, body.const(j, type_), type_) for j in range(1, factor)]
        emit_clones(body, indices, True, name)

    handle = create_canonical_loop(builder, ceil_div(builder, n, factor, type_), emit, name)
    rebuild.finish(rebuild.region)
    if mode == 'heuristic':
        handle.chosen_unroll_factor = factor
    logger.debug(f"Partially unrolled loop '{loop.name}' by {factor} ({mode})")
    return handle


def create_workshare_loop(module: IRModule, loop: CanonicalLoopInfo, num_threads: int,
                          chunk: int | None = None) -> CanonicalLoopInfo:
    """Distribute a loop over a simulated team of ``num_threads`` threads.

    Without ``chunk`` thread ``t`` runs the block ``[t*B, min((t+1)*B, n))``
    with ``B = ceil(n / T)``; with ``chunk`` it runs chunks ``t, t+T, ...``
    of ``chunk`` iterations. Threads run one after another in id order and
    every ``call-body`` of the body is tagged with the thread id.

    Returns:
        CanonicalLoopInfo: Handle on the rewritten loop over a thread's iterations

    Raises:
        ValueError: If the thread count or chunk is not positive
        InvalidHandleError: If the handle was abandoned
    """
    if num_threads < 1:
        raise ValueError(f"Thread count must be positive, got {num_threads}")
    if chunk is not None and chunk < 1:
        raise ValueError(f"Chunk size must be positive, got {chunk}")
    rebuild = _Rebuild(module, [loop])
    builder = rebuild.builder
    type_ = _type_of(module, loop.trip_count)
    n = loop.trip_count
    threads = builder.const(num_threads, type_)
    zero = builder.const(0, type_)
    state: dict[str, int] = {}
    handles: list[CanonicalLoopInfo] = []

    def iteration_emitter(body: IRBuilder, offset: int) -> None:
        index = body.binop('add', state['start'], offset, type_)
        for label in rebuild.region:
            for instr in module.block(label).instructions:
                if instr.op == 'call-body':
                    instr.thread = state['thread']
        rebuild.move_body(body, {loop.indvar: index}, f"omp.iv.{loop.name}")

    if chunk is None:
        block = ceil_div(builder, n, num_threads, type_)

        def thread_emitter(body: IRBuilder, thread: int) -> None:
            state['thread'] = thread
            start = state['start'] = body.binop('mul', thread, block, type_)
            inside = body.icmp('icmp-ult', start, n)
            count = umin(body, body.binop('sub', n, start, type_), block, type_)
            count = body.select(inside, count, zero, type_)
            handles.append(create_canonical_loop(body, count, iteration_emitter, f"omp.iv.{loop.name}"))
    else:
        size = builder.const(chunk, type_)
        chunks = ceil_div(builder, n, chunk, type_)

        def chunk_emitter(body: IRBuilder, round_: int) -> None:
            index = body.binop('add', state['thread'], body.binop('mul', round_, threads, type_), type_)
            start = state['start'] = body.binop('mul', index, size, type_)
            count = umin(body, body.binop('sub', n, start, type_), size, type_)
            handles.append(create_canonical_loop(body, count, iteration_emitter, f"omp.iv.{loop.name}"))

        def thread_emitter(body: IRBuilder, thread: int) -> None:
            state['thread'] = thread
            has_chunk = body.icmp('icmp-ult', thread, chunks)
            rounds = ceil_div(body, body.binop('sub', chunks, thread, type_), num_threads, type_)
            rounds = body.select(has_chunk, rounds, zero, type_)
            create_canonical_loop(body, rounds, chunk_emitter, f"omp.chunk.{loop.name}")

    create_canonical_loop(builder, threads, thread_emitter, 'omp.thread')
    rebuild.finish()
    schedule = f"static-chunk({chunk})" if chunk is not None else 'static-block'
    logger.debug(f"Workshared loop '{loop.name}' across {num_threads} thread(s), {schedule}")
    return handles[0]
