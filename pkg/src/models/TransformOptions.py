"""TransformOptions model for pipeline settings."""

from ..config import (
    BACKENDS,
    DEFAULT_BACKEND,
    DEFAULT_NUM_THREADS,
    DEFAULT_STEP_LIMIT,
    DEFAULT_UNROLL_STRATEGY,
    HEURISTIC_UNROLL_FACTOR,
    UNROLL_STRATEGIES,
)


class TransformOptions:
    """Settings that steer lowering, transformation and interpretation.

    Attributes:
        backend (str): ``shadow`` or ``irbuilder``
        unroll_strategy (str): Partial-unroll lowering of the shadow backend
        heuristic_factor (int): Factor chosen for unroll without clause
        num_threads (int): Size of the simulated thread team
        step_limit (int): Interpreter step budget
    """

    def __init__(
        self,
        backend: str = DEFAULT_BACKEND,
        unroll_strategy: str = DEFAULT_UNROLL_STRATEGY,
        heuristic_factor: int = HEURISTIC_UNROLL_FACTOR,
        num_threads: int = DEFAULT_NUM_THREADS,
        step_limit: int = DEFAULT_STEP_LIMIT
    ):
        """Initialize TransformOptions instance.

        Raises:
            ValueError: If any setting is outside its allowed range
        """
        if backend not in BACKENDS:
            raise ValueError(f"Unknown backend: {backend}. Use one of: {', '.join(BACKENDS)}")
        if unroll_strategy not in UNROLL_STRATEGIES:
            raise ValueError(
                f"Unknown unroll strategy: {unroll_strategy}. Use one of: {', '.join(UNROLL_STRATEGIES)}"
            )
        if heuristic_factor < 2:
            raise ValueError(f"Heuristic unroll factor must be at least 2, got {heuristic_factor}")
        if num_threads < 1:
            raise ValueError(f"Thread count must be positive, got {num_threads}")
        if step_limit < 1:
            raise ValueError(f"Step limit must be positive, got {step_limit}")

        self.backend = backend
        self.unroll_strategy = unroll_strategy
        self.heuristic_factor = heuristic_factor
        self.num_threads = num_threads
        self.step_limit = step_limit

    def to_dict(self) -> dict:
        return {
            'backend': self.backend,
            'unroll_strategy': self.unroll_strategy,
            'heuristic_factor': self.heuristic_factor,
            'num_threads': self.num_threads,
            'step_limit': self.step_limit
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'TransformOptions':
        """Create TransformOptions from a dictionary, ignoring unknown keys."""
        return cls(
            backend=data.get('backend', DEFAULT_BACKEND),
            unroll_strategy=data.get('unroll_strategy', DEFAULT_UNROLL_STRATEGY),
            heuristic_factor=int(data.get('heuristic_factor', HEURISTIC_UNROLL_FACTOR)),
            num_threads=int(data.get('num_threads', DEFAULT_NUM_THREADS)),
            step_limit=int(data.get('step_limit', DEFAULT_STEP_LIMIT))
        )

    def replace(self, **changes) -> 'TransformOptions':
        data = self.to_dict()
        data.update({k: v for k, v in changes.items() if v is not None})
        return TransformOptions.from_dict(data)

    def __repr__(self) -> str:
        return (
            f"TransformOptions(backend={self.backend}, strategy={self.unroll_strategy}, "
            f"heuristic_factor={self.heuristic_factor}, threads={self.num_threads})"
        )
