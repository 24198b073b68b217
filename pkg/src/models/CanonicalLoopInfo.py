"""CanonicalLoopInfo: handle onto a loop skeleton in an IRModule."""

from dataclasses import dataclass

from .Diagnostic import InvalidHandleError


@dataclass(eq=False)
class CanonicalLoopInfo:
    """Handle describing a materialized loop skeleton.

    Attributes:
        preheader, header, cond, body_entry, latch, exit, after (str):
            Labels of the seven skeleton blocks
        indvar (int): Value id of the induction-variable phi in the header
        trip_count (int): Value id of the unsigned trip count
        valid (bool): False once a transformation abandoned the handle
        chosen_unroll_factor (int | None): Factor picked by the compiler when
            this loop came out of a heuristic unroll
    """

    preheader: str
    header: str
    cond: str
    body_entry: str
    latch: str
    exit: str
    after: str
    indvar: int
    trip_count: int
    valid: bool = True
    chosen_unroll_factor: int | None = None

    @property
    def blocks(self) -> tuple[str, ...]:
        return (self.preheader, self.header, self.cond, self.body_entry, self.latch, self.exit, self.after)

    @property
    def name(self) -> str:
        return self.header.rsplit('.', 1)[0]

    def invalidate(self) -> None:
        self.valid = False

    def assert_valid(self) -> None:
        """Raise InvalidHandleError if this handle was abandoned."""
        if not self.valid:
            raise InvalidHandleError.at(f"use of invalidated loop handle '{self.name}'")

    def __repr__(self) -> str:
        state = 'valid' if self.valid else 'invalid'
        return f"CanonicalLoopInfo({self.name}, tc=%{self.trip_count}, iv=%{self.indvar}, {state})"
