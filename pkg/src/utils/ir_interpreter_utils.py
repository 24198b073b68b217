"""Interpreter for IR modules."""

import logging

from ..config import DEFAULT_STEP_LIMIT
from ..models.Diagnostic import InterpreterError, MalformedPhiError, StepLimitExceeded, UnboundVariableError
from ..models.IRModule import ARITH_OPS, CMP_OPS, IRModule
from ..models.IntType import IntType
from ..models.Trace import Trace, TraceEvent
from .eval_utils import apply_ir_binop, apply_ir_compare

logger = logging.getLogger(__name__)


class IRInterpreter:
    """Runs a module from its entry block, recording ``call-body`` events.

    Variables live in a flat store keyed by name; SSA values in a table
    keyed by value id. Every executed instruction and terminator counts
    as one step.
    """

    def __init__(self, module: IRModule, env: dict[str, int] | None = None, step_limit: int = DEFAULT_STEP_LIMIT):
        self.module = module
        self.store: dict[str, int] = dict(env or {})
        self.values: dict[int, int] = {}
        self.types: dict[int, IntType] = {v: instr.type for v, (_, instr) in module.values.items()}
        self.step_limit = step_limit
        self.steps = 0
        self.trace = Trace()

    def _step(self) -> None:
        self.steps += 1
        if self.steps > self.step_limit:
            raise StepLimitExceeded.at(f"step limit of {self.step_limit} exceeded")

    def _get(self, value: int) -> int:
        try:
            return self.values[value]
        except KeyError:
            raise InterpreterError.at(f"read of value %{value} before its definition") from None

    def _enter(self, label: str, previous: str | None) -> None:
        block = self.module.block(label)
        phis = block.phis
        if not phis:
            return
        incoming = []
        for phi in phis:
            sources = dict(phi.incoming)
            if previous not in sources:
                raise MalformedPhiError.at(
                    f"phi %{phi.result} in block '{label}' has no incoming value for predecessor '{previous}'"
                )
            incoming.append((phi, self._get(sources[previous])))
        for phi, value in incoming:
            self._step()
            self.values[phi.result] = phi.type.wrap(value)

    def _execute(self, instr) -> None:
        op = instr.op
        if op == 'phi':
            return
        self._step()
        if op == 'const':
            self.values[instr.result] = instr.imm
        elif op in ARITH_OPS:
            a, b = (self._get(v) for v in instr.args)
            self.values[instr.result] = apply_ir_binop(op, a, b, instr.type)
        elif op in CMP_OPS:
            a, b = (self._get(v) for v in instr.args)
            self.values[instr.result] = apply_ir_compare(op, a, b, self.types[instr.args[0]])
        elif op == 'select':
            cond, a, b = (self._get(v) for v in instr.args)
            self.values[instr.result] = instr.type.wrap(a if cond else b)
        elif op == 'cast':
            self.values[instr.result] = instr.type.wrap(self._get(instr.args[0]))
        elif op == 'load':
            if instr.var not in self.store:
                raise UnboundVariableError.at(f"read of unbound variable '{instr.var}'")
            self.values[instr.result] = instr.type.wrap(self.store[instr.var])
        elif op == 'store':
            self.store[instr.var] = self._get(instr.args[0])
        elif op == 'call-body':
            args = tuple((self._get(a), self.types[a]) for a in instr.args)
            thread = self._get(instr.thread) if instr.thread is not None else None
            self.trace.append(TraceEvent('body', args, thread))
        else:
            raise InterpreterError.at(f"unknown opcode '{op}'")

    def run(self) -> Trace:
        label, previous = self.module.entry, None
        while True:
            self._enter(label, previous)
            block = self.module.block(label)
            for instr in block.instructions:
                self._execute(instr)
            terminator = block.terminator
            if terminator is None:
                raise InterpreterError.at(f"block '{label}' has no terminator")
            self._step()
            if terminator.kind == 'halt':
                return self.trace
            if terminator.kind == 'jump':
                target = terminator.targets[0]
            else:
                target = terminator.targets[0] if self._get(terminator.cond) else terminator.targets[1]
            label, previous = target, label


def interpret_ir(module: IRModule, env: dict[str, int] | None = None, step_limit: int = DEFAULT_STEP_LIMIT) -> Trace:
    """Execute a module and return the ``body`` trace.

    Args:
        module: Well-formed module
        env: Initial variable bindings
        step_limit: Maximum number of executed instructions

    Raises:
        StepLimitExceeded: If the budget runs out
        DivisionByZeroError: On ``udiv``/``urem``/``sdiv``/``srem`` by zero
        UnboundVariableError: On a load of an unbound variable
        MalformedPhiError: If a phi lacks an incoming value for the taken edge
    """
    try:
        trace = IRInterpreter(module, env, step_limit).run()
    except InterpreterError as e:
        logger.debug(f"IR interpretation failed: {e}")
        raise
    logger.debug(f"IR interpretation produced {len(trace)} event(s)")
    return trace
