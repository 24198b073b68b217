"""Shared fixtures: the sample programs under src/data/corpus and small IR nests."""

from pathlib import Path

import pytest

from src.models import UINT, IRModule
from src.utils.irbuilder_utils import IRBuilder, create_canonical_loop

CORPUS = Path(__file__).parent.parent / 'src' / 'data' / 'corpus'

GOOD_PROGRAMS = [
    'stride3.c', 'full_over_partial.c', 'remainder.c', 'tile2d.c', 'collapse.c',
    'workshare.c', 'heuristic.c', 'parallel_for.c', 'full_range.c',
]

BAD_PROGRAMS = ['bad_depth.c', 'bad_full_runtime.c', 'bad_over_full.c', 'bad_not_canonical.c']


def read_corpus(name: str) -> str:
    return (CORPUS / name).read_text(encoding='utf-8')


@pytest.fixture
def corpus():
    """Return a reader for corpus files by name."""
    return read_corpus


@pytest.fixture
def corpus_path():
    """Return the path of a corpus file as a string."""
    return lambda name: str(CORPUS / name)


def build_loop(n: int, type_=UINT):
    """Module with one skeleton loop of ``n`` iterations calling body(iv)."""
    module = IRModule()
    builder = IRBuilder(module, module.add_block('entry'))
    trip = builder.const(n, type_)
    loop = create_canonical_loop(builder, trip, lambda body, iv: body.call_body((iv,)), 'loop')
    builder.halt()
    return module, loop


def build_nest(n_outer: int, n_inner: int, type_=UINT):
    """Module with a perfect 2-deep nest calling body(i, j)."""
    module = IRModule()
    builder = IRBuilder(module, module.add_block('entry'))
    trips = [builder.const(n_outer, type_), builder.const(n_inner, type_)]
    loops = []

    def outer_body(body, i):
        loops.append(create_canonical_loop(body, trips[1], lambda inner, j: inner.call_body((i, j)), 'j'))

    loops.insert(0, create_canonical_loop(builder, trips[0], outer_body, 'i'))
    builder.halt()
    return module, loops


def static_partition(n: int, threads: int, chunk: int | None = None) -> list[tuple[int, int]]:
    """(iteration, thread) pairs of a static schedule, threads run in id order."""
    if chunk is None:
        chunk = max(1, -(-n // threads))
    return [
        (i, t)
        for t in range(threads)
        for start in range(t * chunk, n, threads * chunk)
        for i in range(start, min(start + chunk, n))
    ]
