"""Line-oriented text form of IR modules.

    block entry:
      %0 = const u32 4
      %1 = icmp-ult i32 %2, %0
      %3 = phi u32 [loop.preheader, %4], [loop.latch, %5]
      %6 = load i32 @n
      store @i, %6
      call-body %6 thread %2
      branch %1, loop.body, loop.exit

``print_ir`` and ``parse_ir`` round-trip exactly.
"""

import logging
import re

from ..models.Diagnostic import IRParseError
from ..models.IRModule import ARITH_OPS, CMP_OPS, Instruction, IRModule, Terminator
from ..models.IntType import IntType

logger = logging.getLogger(__name__)

BLOCK_RE = re.compile(r'^block\s+([^\s:]+):$')
VALUE_RE = re.compile(r'^%(\d+)\s*=\s*(\S+)\s+(\S+)\s*(.*)$')
PHI_INCOMING_RE = re.compile(r'\[\s*([^\s,\]]+)\s*,\s*%(\d+)\s*\]')


def _value(v: int) -> str:
    return f"%{v}"


def format_instruction(instr: Instruction) -> str:
    if instr.op == 'store':
        return f"store @{instr.var}, {_value(instr.args[0])}"
    if instr.op == 'call-body':
        text = 'call-body'
        if instr.args:
            text += ' ' + ', '.join(_value(a) for a in instr.args)
        if instr.thread is not None:
            text += f" thread {_value(instr.thread)}"
        return text
    head = f"{_value(instr.result)} = {instr.op} {instr.type.ir_name}"
    if instr.op == 'const':
        return f"{head} {instr.imm}"
    if instr.op == 'load':
        return f"{head} @{instr.var}"
    if instr.op == 'phi':
        return f"{head} " + ', '.join(f"[{label}, {_value(v)}]" for label, v in instr.incoming)
    return f"{head} " + ', '.join(_value(a) for a in instr.args)


def format_terminator(terminator: Terminator) -> str:
    if terminator.kind == 'jump':
        return f"jump {terminator.targets[0]}"
    if terminator.kind == 'branch':
        return f"branch {_value(terminator.cond)}, {terminator.targets[0]}, {terminator.targets[1]}"
    return 'halt'


def print_ir(module: IRModule) -> str:
    """Render a module, one ``block <label>:`` header per block."""
    lines = []
    for block in module.blocks:
        lines.append(f"block {block.label}:")
        lines.extend(f"  {format_instruction(i)}" for i in block.instructions)
        if block.terminator is not None:
            lines.append(f"  {format_terminator(block.terminator)}")
    return '\n'.join(lines) + '\n'


class _IRParser:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.module = IRModule()
        self.block = None
        self.block_line = 0
        self.lineno = 0
        self.max_value = -1

    def error(self, message: str) -> IRParseError:
        return IRParseError.at(f"line {self.lineno}: {message}")

    def value(self, token: str) -> int:
        token = token.strip()
        if not re.fullmatch(r'%\d+', token):
            raise self.error(f"expected a value like %3, found '{token}'")
        value = int(token[1:])
        self.max_value = max(self.max_value, value)
        return value

    def values(self, text: str) -> tuple[int, ...]:
        text = text.strip()
        return tuple(self.value(t) for t in text.split(',')) if text else ()

    def type(self, token: str) -> IntType:
        try:
            return IntType.from_ir_name(token)
        except ValueError:
            raise self.error(f"unknown type '{token}'") from None

    def close_block(self) -> None:
        if self.block is not None and self.block.terminator is None:
            raise IRParseError.at(f"line {self.block_line}: block '{self.block.label}' has no terminator")

    def parse(self) -> IRModule:
        for self.lineno, raw in enumerate(self.lines, start=1):
            line = raw.split(';', 1)[0].strip()
            if not line:
                continue
            header = BLOCK_RE.match(line)
            if header:
                self.close_block()
                label = header.group(1)
                if self.module.has_block(label):
                    raise self.error(f"duplicate block '{label}'")
                self.block = self.module.add_block(label)
                self.block_line = self.lineno
                continue
            if self.block is None:
                raise self.error("instruction outside of a block")
            if self.block.terminator is not None:
                raise self.error(f"instruction after the terminator of block '{self.block.label}'")
            self.parse_line(line)
        if self.block is None:
            raise IRParseError.at("line 1: module has no blocks")
        self.close_block()
        self.module.reserve_values(self.max_value)
        return self.module

    def parse_line(self, line: str) -> None:
        word, _, rest = line.partition(' ')
        rest = rest.strip()
        if word == 'jump':
            self.block.terminator = Terminator('jump', (rest,))
        elif word == 'branch':
            parts = [p.strip() for p in rest.split(',')]
            if len(parts) != 3:
                raise self.error("branch needs a condition and two targets")
            self.block.terminator = Terminator('branch', (parts[1], parts[2]), self.value(parts[0]))
        elif word == 'halt':
            self.block.terminator = Terminator('halt')
        elif word == 'store':
            target, _, operand = rest.partition(',')
            if not target.startswith('@'):
                raise self.error("store needs a variable like @i")
            self.block.instructions.append(Instruction('store', args=(self.value(operand),), var=target[1:]))
        elif word == 'call-body':
            args, _, thread = rest.partition('thread')
            self.block.instructions.append(Instruction(
                'call-body', args=self.values(args), thread=self.value(thread) if thread.strip() else None,
            ))
        else:
            self.parse_value(line)

    def parse_value(self, line: str) -> None:
        match = VALUE_RE.match(line)
        if not match:
            raise self.error(f"cannot parse instruction '{line}'")
        result, op, type_name, operands = int(match.group(1)), match.group(2), match.group(3), match.group(4)
        self.max_value = max(self.max_value, result)
        type_ = self.type(type_name)
        if op == 'const':
            try:
                instr = Instruction('const', result, type_, imm=int(operands))
            except ValueError:
                raise self.error(f"const needs an integer, found '{operands}'") from None
        elif op == 'load':
            if not operands.startswith('@'):
                raise self.error("load needs a variable like @i")
            instr = Instruction('load', result, type_, var=operands[1:])
        elif op == 'phi':
            incoming = tuple((label, self.value('%' + v)) for label, v in PHI_INCOMING_RE.findall(operands))
            instr = Instruction('phi', result, type_, incoming=incoming)
        elif op in ARITH_OPS or op in CMP_OPS or op in ('select', 'cast'):
            args = self.values(operands)
            expected = 3 if op == 'select' else 1 if op == 'cast' else 2
            if len(args) != expected:
                raise self.error(f"'{op}' takes {expected} operand(s), found {len(args)}")
            instr = Instruction(op, result, type_, args=args)
        else:
            raise self.error(f"unknown opcode '{op}'")
        self.block.instructions.append(instr)


def parse_ir(text: str) -> IRModule:
    """Parse the text form back into a module.

    Raises:
        IRParseError: With the line number of the first problem; a block
            without terminator is named in the message
    """
    module = _IRParser(text).parse()
    logger.debug(f"Parsed IR module with {len(module.blocks)} block(s)")
    return module
