"""UnrollDecision model: how an unroll directive was resolved by sema."""

from dataclasses import dataclass


@dataclass(frozen=True)
class UnrollDecision:
    """Resolved form of one ``#pragma omp unroll``.

    Attributes:
        mode (str): ``full``, ``partial`` or ``deferred`` (no clause and no
            consumer; unrolling is left to the backend)
        factor (int | None): Unroll factor for ``partial``
        compiler_chosen (bool): True if no factor was written in the source
        consumed (bool): True if an outer directive consumes the result
    """

    mode: str
    factor: int | None = None
    compiler_chosen: bool = False
    consumed: bool = False

    def __post_init__(self):
        if self.mode not in ('full', 'partial', 'deferred'):
            raise ValueError(f"Unknown unroll mode: {self.mode}")
        if self.mode == 'partial' and (self.factor is None or self.factor < 1):
            raise ValueError(f"Partial unroll needs a positive factor, got {self.factor}")

    def __str__(self) -> str:
        if self.mode == 'partial':
            origin = 'heuristic' if self.compiler_chosen else 'explicit'
            return f"partial({self.factor}, {origin})"
        return self.mode
