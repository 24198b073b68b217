"""Canonical-loop meta-information: closures, canonical form and the wrapper node."""

from dataclasses import dataclass
from enum import Enum

from .Expr import Expr, VarRef
from .IntType import IntType
from .Stmt import ForStmt, Stmt


class CaptureMode(Enum):
    BY_VALUE = 'by-value'
    BY_REFERENCE = 'by-reference'


@dataclass(frozen=True)
class Capture:
    """A variable captured by a closure before the loop is entered.

    By-value captures are snapshots of ``init`` taken before the loop; by-
    reference captures read ``init`` wherever the closure is evaluated.
    """

    name: str
    mode: CaptureMode
    init: Expr

    @property
    def type(self) -> IntType:
        return self.init.type


@dataclass(frozen=True)
class Param:
    name: str
    type: IntType


@dataclass(frozen=True)
class ClosureDescriptor:
    """Language-independent form of the distance and user-value lambdas.

    Attributes:
        captures (tuple[Capture]): Captured variables, snapshot before the loop
        inputs (tuple[Param]): Runtime parameters
        output (Param): The by-reference result parameter
        body (Expr): Expression over captures and inputs assigned to ``output``
    """

    captures: tuple[Capture, ...]
    inputs: tuple[Param, ...]
    output: Param
    body: Expr

    def __post_init__(self):
        if self.body.type != self.output.type:
            raise ValueError(
                f"Closure body type {self.body.type} does not match output type {self.output.type}"
            )

    def capture(self, name: str) -> Capture:
        for capture in self.captures:
            if capture.name == name:
                return capture
        raise KeyError(name)


class Direction(Enum):
    UP = 'up'
    DOWN = 'down'


@dataclass(frozen=True)
class CanonicalForm:
    """Canonical-form decomposition of a literal for-loop.

    Attributes:
        iv (VarRef): The loop iteration variable
        lb (Expr): Start value (after the init statement)
        ub (Expr): Bound the condition compares against
        step (int): Constant, nonzero increment
        direction (Direction): UP for positive steps, DOWN for negative
        rel (str): One of ``lt``, ``le``, ``gt``, ``ge``, ``ne``
    """

    iv: VarRef
    lb: Expr
    ub: Expr
    step: int
    direction: Direction
    rel: str

    def __post_init__(self):
        if self.step == 0:
            raise ValueError("Canonical loop step must be nonzero")
        if (self.step > 0) != (self.direction is Direction.UP):
            raise ValueError(f"Step {self.step} inconsistent with direction {self.direction.value}")
        expected = {'lt': Direction.UP, 'le': Direction.UP, 'gt': Direction.DOWN, 'ge': Direction.DOWN}
        if self.rel in expected and expected[self.rel] is not self.direction:
            raise ValueError(f"Relation {self.rel} inconsistent with direction {self.direction.value}")
        if self.rel == 'ne' and abs(self.step) != 1:
            raise ValueError("'!=' loops require a unit step")

    @property
    def abs_step(self) -> int:
        return abs(self.step)


@dataclass(frozen=True, eq=False)
class OMPCanonicalLoop(Stmt):
    """Implicit wrapper turning a literal loop into an OpenMP canonical loop.

    The wrapped ``loop`` is the original node, so removing the wrapper is
    lossless.
    """

    loop: ForStmt
    distance: ClosureDescriptor
    user_value: ClosureDescriptor
    user_var: VarRef
    logical_type: IntType
    form: CanonicalForm | None = None

    def __post_init__(self):
        if self.logical_type.signed:
            raise ValueError("Logical iteration counter type must be unsigned")
        if self.distance.inputs or self.distance.output.type != self.logical_type:
            raise ValueError("Distance closure must take no inputs and produce the logical type")
        if len(self.user_value.inputs) != 1 or self.user_value.inputs[0].type != self.logical_type:
            raise ValueError("User-value closure must take one logical-type input")
        if self.user_value.output.type != self.user_var.type:
            raise ValueError("User-value closure must produce the user variable's type")

    def children(self) -> tuple:
        return (self.loop,)
