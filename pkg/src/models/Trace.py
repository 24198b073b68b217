"""Trace model: observable ``body`` calls recorded by the interpreters."""

from dataclasses import dataclass, field

from .IntType import IntType


@dataclass(frozen=True)
class TraceEvent:
    """One invocation of ``body``.

    Attributes:
        callee (str): Always ``body``
        args (tuple[tuple[int, IntType]]): Argument values with their types
        thread (int | None): Simulated thread id under worksharing
    """

    callee: str
    args: tuple[tuple[int, IntType], ...]
    thread: int | None = None

    @property
    def key(self) -> tuple:
        """Identity of the event for comparisons; ignores the thread tag."""
        return (self.callee, self.args)

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(value for value, _ in self.args)

    def __str__(self) -> str:
        prefix = f"(t{self.thread}) " if self.thread is not None else ''
        return f"{prefix}{self.callee}({', '.join(str(v) for v in self.values)})"


@dataclass
class Trace:
    events: list[TraceEvent] = field(default_factory=list)

    def append(self, event: TraceEvent) -> None:
        self.events.append(event)

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def __getitem__(self, index):
        return self.events[index]

    def values(self) -> list[tuple[int, ...]]:
        return [e.values for e in self.events]

    def threads(self) -> list[int | None]:
        return [e.thread for e in self.events]

    def to_text(self) -> str:
        """Render one event per line, ``(t<k>) body(v1, ...)``."""
        return ''.join(f"{event}\n" for event in self.events)


@dataclass(frozen=True)
class OrderContract:
    """Which relation a transformed trace must have with the reference.

    Use the constructors ``exact_order``, ``multiset_only``, ``tiled_order``
    and ``partitioned``.
    """

    kind: str
    sizes: tuple[int, ...] = ()
    trip_counts: tuple[int, ...] = ()
    threads: int = 1

    @classmethod
    def exact_order(cls) -> 'OrderContract':
        return cls('exact-order')

    @classmethod
    def multiset_only(cls) -> 'OrderContract':
        return cls('multiset-only')

    @classmethod
    def tiled_order(cls, sizes, trip_counts) -> 'OrderContract':
        if len(sizes) != len(trip_counts):
            raise ValueError("tiled-order needs one trip count per tile size")
        return cls('tiled-order', sizes=tuple(sizes), trip_counts=tuple(trip_counts))

    @classmethod
    def partitioned(cls, threads: int) -> 'OrderContract':
        if threads < 1:
            raise ValueError(f"Thread count must be positive, got {threads}")
        return cls('partitioned', threads=threads)

    def __str__(self) -> str:
        if self.kind == 'tiled-order':
            return f"tiled-order(sizes={list(self.sizes)})"
        if self.kind == 'partitioned':
            return f"partitioned(threads={self.threads})"
        return self.kind


@dataclass(frozen=True)
class EquivalenceReport:
    """Outcome of comparing two traces.

    Attributes:
        passed (bool): True if the contract holds
        contract (OrderContract): The contract that was checked
        divergence_index (int | None): First differing event position, if any
        message (str): Human-readable explanation
    """

    passed: bool
    contract: OrderContract
    divergence_index: int | None = None
    message: str = ''

    def __bool__(self) -> bool:
        return self.passed
