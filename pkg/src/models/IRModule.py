"""Block-structured IR: instructions, terminators, basic blocks and modules.

Blocks are identified by their unique label; values by ``%n`` integers.
Modules are mutable while being built and transformed, and treated as
read-only once handed to the interpreter.
"""

from dataclasses import dataclass, field

from .Diagnostic import IRError
from .IntType import IntType

ARITH_OPS = ('add', 'sub', 'mul', 'udiv', 'urem', 'sdiv', 'srem')
UNSIGNED_CMP_OPS = ('icmp-eq', 'icmp-ne', 'icmp-ult', 'icmp-ule', 'icmp-ugt', 'icmp-uge')
SIGNED_CMP_OPS = ('icmp-slt', 'icmp-sle', 'icmp-sgt', 'icmp-sge')
CMP_OPS = UNSIGNED_CMP_OPS + SIGNED_CMP_OPS
VALUE_OPS = ARITH_OPS + CMP_OPS + ('const', 'select', 'cast', 'phi', 'load')
EFFECT_OPS = ('store', 'call-body')
TERMINATOR_KINDS = ('jump', 'branch', 'halt')


@dataclass
class Instruction:
    """One non-terminator instruction.

    Attributes:
        op (str): Opcode
        result (int | None): Defined value id, None for store and call-body
        type (IntType | None): Result type
        args (tuple[int]): Value operands
        imm (int | None): Immediate of ``const``
        var (str | None): Variable of ``load`` / ``store``
        incoming (tuple[tuple[str, int]]): ``(block, value)`` pairs of ``phi``
        thread (int | None): Thread-id value of ``call-body``
    """

    op: str
    result: int | None = None
    type: IntType | None = None
    args: tuple[int, ...] = ()
    imm: int | None = None
    var: str | None = None
    incoming: tuple[tuple[str, int], ...] = ()
    thread: int | None = None

    def used_values(self) -> list[int]:
        used = list(self.args) + [value for _, value in self.incoming]
        if self.thread is not None:
            used.append(self.thread)
        return used


@dataclass
class Terminator:
    kind: str
    targets: tuple[str, ...] = ()
    cond: int | None = None

    def __post_init__(self):
        if self.kind not in TERMINATOR_KINDS:
            raise ValueError(f"Unknown terminator: {self.kind}")


@dataclass
class BasicBlock:
    label: str
    instructions: list[Instruction] = field(default_factory=list)
    terminator: Terminator | None = None

    @property
    def successors(self) -> tuple[str, ...]:
        return self.terminator.targets if self.terminator else ()

    @property
    def phis(self) -> list[Instruction]:
        return [i for i in self.instructions if i.op == 'phi']


class IRModule:
    """An ordered list of basic blocks; the first block is the entry."""

    def __init__(self):
        self.blocks: list[BasicBlock] = []
        self._by_label: dict[str, BasicBlock] = {}
        self._next_value = 0

    @property
    def entry(self) -> str:
        if not self.blocks:
            raise IRError.at("module has no blocks")
        return self.blocks[0].label

    def add_block(self, label: str) -> BasicBlock:
        """Append a block, uniquifying the label with a numeric suffix."""
        unique, counter = label, 1
        while unique in self._by_label:
            unique = f"{label}{counter}"
            counter += 1
        block = BasicBlock(unique)
        self.blocks.append(block)
        self._by_label[unique] = block
        return block

    def block(self, label: str) -> BasicBlock:
        try:
            return self._by_label[label]
        except KeyError:
            raise IRError.at(f"unknown block '{label}'") from None

    def has_block(self, label: str) -> bool:
        return label in self._by_label

    def remove_blocks(self, labels) -> None:
        doomed = set(labels)
        self.blocks = [b for b in self.blocks if b.label not in doomed]
        for label in doomed:
            self._by_label.pop(label, None)

    def new_value(self) -> int:
        value = self._next_value
        self._next_value += 1
        return value

    def reserve_values(self, upto: int) -> None:
        self._next_value = max(self._next_value, upto + 1)

    @property
    def values(self) -> dict[int, tuple[str, Instruction]]:
        """Definition table: value id -> (defining block, instruction)."""
        table = {}
        for block in self.blocks:
            for instr in block.instructions:
                if instr.result is not None:
                    table[instr.result] = (block.label, instr)
        return table

    def check_well_formed(self) -> None:
        """Raise IRError unless every block is terminated and every reference resolves."""
        values = self.values
        for block in self.blocks:
            if block.terminator is None:
                raise IRError.at(f"block '{block.label}' has no terminator")
            seen_other = False
            for instr in block.instructions:
                if instr.op == 'phi':
                    if seen_other:
                        raise IRError.at(f"phi after non-phi instruction in block '{block.label}'")
                    for pred, _ in instr.incoming:
                        if pred not in self._by_label:
                            raise IRError.at(f"phi in '{block.label}' names unknown block '{pred}'")
                else:
                    seen_other = True
                for used in instr.used_values():
                    if used not in values:
                        raise IRError.at(f"use of undefined value %{used} in block '{block.label}'")
            for target in block.successors:
                if target not in self._by_label:
                    raise IRError.at(f"block '{block.label}' branches to unknown block '{target}'")
            cond = block.terminator.cond
            if cond is not None and cond not in values:
                raise IRError.at(f"branch on undefined value %{cond} in block '{block.label}'")

    def __eq__(self, other) -> bool:
        if not isinstance(other, IRModule):
            return NotImplemented
        return self.blocks == other.blocks

    __hash__ = None

    def __repr__(self) -> str:
        return f"IRModule(blocks={len(self.blocks)})"
