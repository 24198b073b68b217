"""Checks that a CanonicalLoopInfo still describes a well-shaped skeleton."""

import logging

from ..models.CanonicalLoopInfo import CanonicalLoopInfo
from ..models.Diagnostic import Diagnostic
from ..models.IRModule import SIGNED_CMP_OPS, IRModule
from .irbuilder_utils import body_region, defining_block, loop_region

logger = logging.getLogger(__name__)


def _jumps_to(module: IRModule, label: str, target: str) -> bool:
    block = module.block(label)
    return block.terminator is not None and block.terminator.kind == 'jump' and block.terminator.targets == (target,)


def verify_skeleton(module: IRModule, loop: CanonicalLoopInfo) -> list[Diagnostic]:
    """Report every skeleton invariant ``loop`` violates.

    Checked: the seven blocks exist and are distinct; preheader -> header ->
    cond; cond branches to body or exit on ``icmp-ult indvar, trip_count``;
    the body reaches the latch; the latch adds one to the indvar and jumps
    back; exit -> after; the indvar is a header phi starting at 0; the trip
    count is computed outside the loop.

    Returns:
        list[Diagnostic]: One error per violation, empty if the skeleton is valid
    """
    where = f"loop '{loop.name}'"
    if not loop.valid:
        return [Diagnostic.error(f"use of invalidated loop handle '{loop.name}'")]
    missing = [label for label in loop.blocks if not module.has_block(label)]
    if missing:
        return [Diagnostic.error(f"{where}: missing block '{label}'") for label in missing]
    if len(set(loop.blocks)) != len(loop.blocks):
        return [Diagnostic.error(f"{where}: skeleton blocks are not distinct")]

    problems: list[str] = []
    values = module.values

    if not _jumps_to(module, loop.preheader, loop.header):
        problems.append("preheader must jump to header")

    header = module.block(loop.header)
    phi = header.instructions[0] if header.instructions else None
    if phi is None or phi.op != 'phi' or phi.result != loop.indvar:
        problems.append("induction variable must be the first phi of the header")
        phi = None
    if not _jumps_to(module, loop.header, loop.cond):
        problems.append("header must jump to cond")

    cond = module.block(loop.cond)
    terminator = cond.terminator
    if terminator is None or terminator.kind != 'branch' or terminator.targets != (loop.body_entry, loop.exit):
        problems.append("cond must branch to the body or the exit")
    else:
        compare = values.get(terminator.cond, (None, None))[1]
        if compare is None:
            problems.append("cond branches on an undefined value")
        elif compare.op in SIGNED_CMP_OPS:
            problems.append("loop condition must use an unsigned comparison")
        elif compare.op != 'icmp-ult' or compare.args != (loop.indvar, loop.trip_count):
            problems.append("condition must compare the induction variable against the trip count")

    if loop.latch not in _reachable(module, loop):
        problems.append("body does not reach the latch")

    increment = None
    for instr in module.block(loop.latch).instructions:
        if instr.op == 'add' and loop.indvar in instr.args:
            increment = instr
            break
    if increment is None:
        problems.append("latch does not increment the induction variable")
    else:
        other = increment.args[1] if increment.args[0] == loop.indvar else increment.args[0]
        step = values.get(other, (None, None))[1]
        if step is None or step.op != 'const' or step.imm != 1:
            problems.append("latch must increment induction variable by one")
    if not _jumps_to(module, loop.latch, loop.header):
        problems.append("latch must jump to header")

    if phi is not None:
        incoming = dict(phi.incoming)
        start = values.get(incoming.get(loop.preheader), (None, None))[1]
        if start is None or start.op != 'const' or start.imm != 0:
            problems.append("induction variable must start at zero")
        if increment is not None and incoming.get(loop.latch) != increment.result:
            problems.append("induction variable must take the latch increment")

    if not _jumps_to(module, loop.exit, loop.after):
        problems.append("exit must jump to after")

    defined_in = defining_block(module, loop.trip_count)
    if defined_in is None or defined_in in loop_region(module, loop):
        problems.append("trip count must be computed before the preheader")

    if problems:
        logger.debug(f"Skeleton of {where} has {len(problems)} problem(s)")
    return [Diagnostic.error(f"{where}: {problem}") for problem in problems]


def _reachable(module: IRModule, loop: CanonicalLoopInfo) -> set[str]:
    region = set(body_region(module, loop))
    reached = set()
    for label in region:
        reached.update(module.block(label).successors)
    return reached
