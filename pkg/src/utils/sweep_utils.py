"""Brute-force verification sweep over generated canonical loops.

Every loop shape in the grid is wrapped in every transformation, run on
the chosen backends, and compared against the untransformed program.
"""

import logging
from dataclasses import dataclass
from itertools import product
from typing import Iterator

from ..config import BACKENDS, UNROLL_STRATEGIES
from ..models.Diagnostic import LoompError
from ..models.TransformOptions import TransformOptions
from ..models.Trace import Trace
from .interpreter_utils import interpret_ast
from .pipeline_utils import analyze_source, run_backend, verify_pipeline

logger = logging.getLogger(__name__)

RELATIONS = {'lt': '<', 'le': '<=', 'gt': '>', 'ge': '>='}
SWEEP_BOUNDS = range(-20, 21)
SWEEP_STEPS = (-3, -2, -1, 1, 2, 3)
TILE_SIZES = (1, 2, 3)
UNROLL_FACTORS = (1, 2, 3)
THREAD_COUNTS = (1, 2, 4)
INNER_TRIP = 3


@dataclass(frozen=True)
class SweepCase:
    """One program of the sweep.

    Attributes:
        loop (str): Description of the loop shape, e.g. ``i=-3 lt 5 step 2``
        transform (str): Description of the transformation
        source (str): Complete program text
        strategy (str | None): Unroll strategy the case needs, if any
        threads (int): Thread team size
        nested (bool): Whether the loop holds the inner ``j`` loop
    """

    loop: str
    transform: str
    source: str
    strategy: str | None = None
    threads: int = 1
    nested: bool = False


def loop_header(var: str, lb: int, ub: int, step: int, rel: str) -> str:
    if step == 1:
        incr = f"++{var}"
    elif step == -1:
        incr = f"--{var}"
    elif step > 0:
        incr = f"{var} += {step}"
    else:
        incr = f"{var} -= {-step}"
    return f"for (int {var} = {lb}; {var} {RELATIONS[rel]} {ub}; {incr})"


def is_consistent(step: int, rel: str) -> bool:
    """True if the step moves toward the bound, as canonical form requires."""
    return (step > 0) == (rel in ('lt', 'le'))


def _program(pragmas: list[str], header: str, nested: bool) -> str:
    lines = list(pragmas) + [header + ' {']
    if nested:
        lines += [f"    for (int j = 0; j < {INNER_TRIP}; ++j) {{", "        body(i, j);", "    }"]
    else:
        lines.append("    body(i);")
    lines.append('}')
    return '\n'.join(lines) + '\n'


def transformations() -> Iterator[tuple[str, list[str], bool, str | None, int]]:
    """(name, pragma lines, needs a 2-deep nest, strategy, threads) per transformation."""
    for size in TILE_SIZES:
        yield f"tile sizes({size})", [f"#pragma omp tile sizes({size})"], False, None, 1
    for factor, strategy in product(UNROLL_FACTORS, UNROLL_STRATEGIES):
        yield (f"unroll partial({factor}) {strategy}", [f"#pragma omp unroll partial({factor})"],
               False, strategy, 1)
    yield 'unroll full', ['#pragma omp unroll full'], False, None, 1
    yield 'collapse(2)', ['#pragma omp for collapse(2)'], True, None, 1
    for threads in THREAD_COUNTS:
        yield f"for threads={threads}", ['#pragma omp for'], False, None, threads


def sweep_cases(stride: int = 1) -> Iterator[SweepCase]:
    """Enumerate the grid; ``stride`` thins the bounds for quicker runs.

    Raises:
        ValueError: If stride is not positive
    """
    if stride < 1:
        raise ValueError(f"Sweep stride must be positive, got {stride}")
    bounds = SWEEP_BOUNDS[::stride]
    for lb, ub, step, rel in product(bounds, bounds, SWEEP_STEPS, RELATIONS):
        if not is_consistent(step, rel):
            continue
        header = loop_header('i', lb, ub, step, rel)
        shape = f"i={lb} {rel} {ub} step {step}"
        for name, pragmas, nested, strategy, threads in transformations():
            yield SweepCase(shape, name, _program(pragmas, header, nested), strategy, threads, nested)


def _record(case: SweepCase, backend: str, passed: bool = False, message: str = '') -> dict:
    return {'loop': case.loop, 'transform': case.transform, 'backend': backend, 'passed': passed, 'message': message}


def run_case_on_backends(case: SweepCase, backends: list[str], base: TransformOptions | None = None,
                         references: dict[tuple[str, bool], Trace] | None = None) -> list[dict]:
    """Analyze a case once, then transform, run and verify it on each backend.

    Failures become records, not exceptions. ``references`` maps a loop shape
    and its nesting to the untransformed trace; cases of the same shape share
    the entry, and a missing one is computed and stored.
    """
    base = base or TransformOptions()
    options = base.replace(unroll_strategy=case.strategy, num_threads=case.threads)
    references = {} if references is None else references
    try:
        program, sema = analyze_source(case.source, '<sweep>', options)
        key = (case.loop, case.nested)
        if key not in references:
            references[key] = interpret_ast(program, None, options.step_limit)
    except LoompError as e:
        return [_record(case, backend, message=f"{type(e).__name__}: {e}") for backend in backends]

    records = []
    for backend in backends:
        try:
            result = run_backend(program, sema, options.replace(backend=backend))
            outcome = verify_pipeline(result, reference=references[key])
        except LoompError as e:
            records.append(_record(case, backend, message=f"{type(e).__name__}: {e}"))
            continue
        records.append(_record(case, backend, outcome.passed, outcome.summary()))
    return records


def run_case(case: SweepCase, backend: str, base: TransformOptions | None = None) -> dict:
    """Transform, run and verify one case on one backend."""
    return run_case_on_backends(case, [backend], base)[0]


def run_sweep(backends: list[str] | None = None, stride: int = 1, options: TransformOptions | None = None) -> list[dict]:
    """Run every case of the grid on each backend.

    Args:
        backends: Backends to run; both by default
        stride: Keep every ``stride``-th bound value
        options: Base options (heuristic factor, step limit)

    Returns:
        list[dict]: One record per case and backend with keys ``loop``,
        ``transform``, ``backend``, ``passed`` and ``message``
    """
    backends = backends or list(BACKENDS)
    records: list[dict] = []
    references: dict[tuple[str, bool], Trace] = {}
    for case in sweep_cases(stride):
        records.extend(run_case_on_backends(case, backends, options, references))
    failed = sum(1 for r in records if not r['passed'])
    if failed:
        logger.warning(f"Sweep finished: {failed} of {len(records)} run(s) failed")
    else:
        logger.info(f"Sweep finished: all {len(records)} run(s) passed")
    return records
