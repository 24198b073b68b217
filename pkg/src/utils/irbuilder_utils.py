"""IR builder and the canonical loop skeleton.

``create_canonical_loop`` emits the seven-block skeleton

    preheader -> header -> cond -> body ... -> latch -> header
                            cond -> exit -> after

with an unsigned induction phi starting at 0 and incremented by one in the
latch. The region helpers below are shared by the loop transformations.
"""

import logging
from typing import Callable

from ..models.CanonicalLoopInfo import CanonicalLoopInfo
from ..models.Diagnostic import IRError
from ..models.IRModule import ARITH_OPS, CMP_OPS, BasicBlock, Instruction, IRModule, Terminator
from ..models.IntType import INT, IntType

logger = logging.getLogger(__name__)

SKELETON_SUFFIXES = ('preheader', 'header', 'cond', 'body', 'latch', 'exit', 'after')

BodyEmitter = Callable[['IRBuilder', int], None]


class IRBuilder:
    """Appends instructions at an insertion point of an IRModule.

    Attributes:
        module (IRModule): Module being built
        block (BasicBlock | None): Current insertion block
    """

    def __init__(self, module: IRModule, block: BasicBlock | str | None = None):
        self.module = module
        self.block = None
        if block is not None:
            self.position_at(block)

    def position_at(self, block: BasicBlock | str) -> None:
        self.block = self.module.block(block) if isinstance(block, str) else block

    @property
    def terminated(self) -> bool:
        return self.block is not None and self.block.terminator is not None

    def type_of(self, value: int) -> IntType:
        for block in self.module.blocks:
            for instr in block.instructions:
                if instr.result == value:
                    return instr.type
        raise IRError.at(f"use of undefined value %{value}")

    def _emit(self, instr: Instruction) -> Instruction:
        if self.block is None:
            raise IRError.at("builder has no insertion point")
        if self.block.terminator is not None:
            raise IRError.at(f"cannot append to terminated block '{self.block.label}'")
        self.block.instructions.append(instr)
        return instr

    def _value(self, op: str, type_: IntType, **fields) -> int:
        result = self.module.new_value()
        self._emit(Instruction(op, result, type_, **fields))
        return result

    # Values

    def const(self, value: int, type_: IntType) -> int:
        return self._value('const', type_, imm=type_.wrap(value))

    def binop(self, op: str, a: int, b: int, type_: IntType) -> int:
        if op not in ARITH_OPS:
            raise ValueError(f"Unknown arithmetic opcode: {op}")
        return self._value(op, type_, args=(a, b))

    def icmp(self, op: str, a: int, b: int) -> int:
        if op not in CMP_OPS:
            raise ValueError(f"Unknown comparison opcode: {op}")
        return self._value(op, INT, args=(a, b))

    def select(self, cond: int, a: int, b: int, type_: IntType) -> int:
        return self._value('select', type_, args=(cond, a, b))

    def cast(self, value: int, type_: IntType) -> int:
        return self._value('cast', type_, args=(value,))

    def phi(self, type_: IntType, incoming: tuple[tuple[str, int], ...] = ()) -> int:
        return self._value('phi', type_, incoming=incoming)

    def load(self, var: str, type_: IntType) -> int:
        return self._value('load', type_, var=var)

    # Effects

    def store(self, var: str, value: int) -> None:
        self._emit(Instruction('store', args=(value,), var=var))

    def call_body(self, args: tuple[int, ...], thread: int | None = None) -> None:
        self._emit(Instruction('call-body', args=tuple(args), thread=thread))

    # Terminators

    def _terminate(self, terminator: Terminator) -> None:
        if self.block is None:
            raise IRError.at("builder has no insertion point")
        if self.block.terminator is not None:
            raise IRError.at(f"block '{self.block.label}' is already terminated")
        self.block.terminator = terminator

    def jump(self, target: str) -> None:
        self._terminate(Terminator('jump', (target,)))

    def branch(self, cond: int, then: str, otherwise: str) -> None:
        self._terminate(Terminator('branch', (then, otherwise), cond))

    def halt(self) -> None:
        self._terminate(Terminator('halt'))


def unique_loop_name(module: IRModule, name: str) -> str:
    """First of ``name``, ``name1``, ``name2``... with no skeleton block yet."""
    candidate, counter = name, 1
    while any(module.has_block(f"{candidate}.{suffix}") for suffix in SKELETON_SUFFIXES):
        candidate = f"{name}{counter}"
        counter += 1
    return candidate


def create_canonical_loop(builder: IRBuilder, trip_count: int, body_emitter: BodyEmitter,
                          name: str = 'loop') -> CanonicalLoopInfo:
    """Emit a loop skeleton running ``trip_count`` iterations.

    The current insertion block jumps to the new preheader. ``body_emitter``
    is called with the builder positioned in the body block and the
    induction value; wherever it leaves the builder is closed with a jump
    to the latch unless the emitter terminated that block itself. On
    return the builder is positioned in the (unterminated) after block.

    Args:
        builder: Builder positioned where the loop is entered
        trip_count: Unsigned value defined before the insertion point
        body_emitter: Callback emitting the loop body
        name: Base name of the skeleton's block labels

    Returns:
        CanonicalLoopInfo: A valid handle on the new skeleton
    """
    module = builder.module
    logical = builder.type_of(trip_count)
    if logical.signed:
        raise IRError.at(f"trip count %{trip_count} must be unsigned, got {logical}")
    base = unique_loop_name(module, name)
    labels = {suffix: module.add_block(f"{base}.{suffix}").label for suffix in SKELETON_SUFFIXES}

    builder.jump(labels['preheader'])

    builder.position_at(labels['preheader'])
    zero = builder.const(0, logical)
    builder.jump(labels['header'])

    builder.position_at(labels['header'])
    indvar = builder.phi(logical)
    builder.jump(labels['cond'])

    builder.position_at(labels['cond'])
    in_range = builder.icmp('icmp-ult', indvar, trip_count)
    builder.branch(in_range, labels['body'], labels['exit'])

    builder.position_at(labels['body'])
    body_emitter(builder, indvar)
    if not builder.terminated:
        builder.jump(labels['latch'])

    builder.position_at(labels['latch'])
    one = builder.const(1, logical)
    increment = builder.binop('add', indvar, one, logical)
    builder.jump(labels['header'])

    header = module.block(labels['header'])
    header.instructions[0].incoming = ((labels['preheader'], zero), (labels['latch'], increment))

    builder.position_at(labels['exit'])
    builder.jump(labels['after'])

    builder.position_at(labels['after'])
    logger.debug(f"Created loop skeleton '{base}' with trip count %{trip_count}")
    return CanonicalLoopInfo(
        labels['preheader'], labels['header'], labels['cond'], labels['body'],
        labels['latch'], labels['exit'], labels['after'], indvar, trip_count,
    )


# Regions


def body_region(module: IRModule, loop: CanonicalLoopInfo) -> list[str]:
    """Blocks reachable from the body entry without passing the latch.

    The body entry comes first, the other blocks follow in module order.
    """
    reached = {loop.body_entry}
    pending = [loop.body_entry]
    while pending:
        label = pending.pop()
        if not module.has_block(label):
            continue
        for target in module.block(label).successors:
            if target in (loop.latch, loop.header) or target in reached:
                continue
            reached.add(target)
            pending.append(target)
    return [loop.body_entry] + [b.label for b in module.blocks if b.label in reached and b.label != loop.body_entry]


def loop_region(module: IRModule, loop: CanonicalLoopInfo) -> set[str]:
    """Blocks executed between entering the header and reaching the exit."""
    return {loop.header, loop.cond, loop.latch, loop.exit} | set(body_region(module, loop))


def defining_block(module: IRModule, value: int) -> str | None:
    for block in module.blocks:
        for instr in block.instructions:
            if instr.result == value:
                return block.label
    return None


def replace_uses(blocks: list[BasicBlock], mapping: dict[int, int]) -> None:
    """Rewrite value operands in place according to ``mapping``."""
    if not mapping:
        return
    for block in blocks:
        for instr in block.instructions:
            instr.args = tuple(mapping.get(a, a) for a in instr.args)
            instr.incoming = tuple((label, mapping.get(v, v)) for label, v in instr.incoming)
            if instr.thread is not None:
                instr.thread = mapping.get(instr.thread, instr.thread)
        terminator = block.terminator
        if terminator is not None and terminator.cond is not None:
            terminator.cond = mapping.get(terminator.cond, terminator.cond)


def retarget(blocks: list[BasicBlock], old: str, new: str) -> None:
    for block in blocks:
        terminator = block.terminator
        if terminator is not None and old in terminator.targets:
            terminator.targets = tuple(new if t == old else t for t in terminator.targets)


def clone_region(module: IRModule, labels: list[str], values: dict[int, int], exit_from: str,
                 exit_to: str, suffix: str) -> str:
    """Copy a region with fresh labels and value ids.

    Args:
        module: Module holding the region
        labels: Region blocks, entry first
        values: Initial value mapping (e.g. old induction value -> replacement)
        exit_from: Label the region jumps to when done
        exit_to: Label the copy jumps to instead
        suffix: Appended to every copied label

    Returns:
        str: Label of the copy's entry block
    """
    label_map = {label: module.add_block(f"{label}.{suffix}").label for label in labels}
    mapping = dict(values)
    for label in labels:
        for instr in module.block(label).instructions:
            if instr.result is not None:
                mapping[instr.result] = module.new_value()
    for label in labels:
        source, copy = module.block(label), module.block(label_map[label])
        for instr in source.instructions:
            copy.instructions.append(Instruction(
                instr.op,
                mapping.get(instr.result, instr.result) if instr.result is not None else None,
                instr.type,
                tuple(mapping.get(a, a) for a in instr.args),
                instr.imm,
                instr.var,
                tuple((label_map.get(b, b), mapping.get(v, v)) for b, v in instr.incoming),
                mapping.get(instr.thread, instr.thread) if instr.thread is not None else None,
            ))
        terminator = source.terminator
        targets = tuple(exit_to if t == exit_from else label_map.get(t, t) for t in terminator.targets)
        cond = mapping.get(terminator.cond, terminator.cond) if terminator.cond is not None else None
        copy.terminator = Terminator(terminator.kind, targets, cond)
    return label_map[labels[0]]
