"""Tests for the end-to-end pipeline: run, emit, verify and compare backends."""

from unittest.mock import patch

import pytest

from src.models import OrderContract, SemaError, TransformOptions
from src.utils.dump_utils import dump_ast
from src.utils.parser_utils import parse_source
from src.utils.pipeline_utils import (
    EMIT_KINDS,
    analyze_source,
    choose_contract,
    compare_backends,
    emit,
    read_source,
    run_pipeline,
    run_transformed,
    verify_pipeline,
)

from .conftest import BAD_PROGRAMS, GOOD_PROGRAMS

BACKENDS = ['shadow', 'irbuilder']
RUNNABLE = [name for name in GOOD_PROGRAMS if name != 'full_range.c']
ENVIRONMENTS = {'remainder.c': {'N': 10}, 'heuristic.c': {'n': 7}}


@pytest.mark.parametrize('backend', BACKENDS)
def test_full_over_partial_trace(corpus, backend):
    """Test full over partial unroll calls body(7), body(10), body(13), body(16) on both backends."""
    result = run_pipeline(corpus('full_over_partial.c'), 'full_over_partial.c', TransformOptions(backend=backend))

    assert run_transformed(result).values() == [(7,), (10,), (13,), (16,)]
    assert emit(result, 'trace') == "body(7)\nbody(10)\nbody(13)\nbody(16)\n"


def test_verify_irbuilder_summary(corpus):
    """Test the IR backend reports equal traces and valid skeletons."""
    result = run_pipeline(corpus('full_over_partial.c'), 'full_over_partial.c', TransformOptions(backend='irbuilder'))

    outcome = verify_pipeline(result)

    assert outcome.passed
    assert outcome.summary() == 'verify: OK (traces equal, skeleton valid)'


def test_verify_shadow_summary(corpus):
    """Test the shadow backend re-analyzes every generated loop."""
    result = run_pipeline(corpus('tile2d.c'), 'tile2d.c')

    outcome = verify_pipeline(result)

    assert outcome.passed
    assert outcome.summary() == 'verify: OK (traces equal, generated loops canonical)'
    assert outcome.report.contract.kind == 'tiled-order'


@pytest.mark.parametrize('backend', BACKENDS)
@pytest.mark.parametrize('name', RUNNABLE)
def test_verify_corpus(corpus, name, backend):
    """Test every runnable corpus program verifies on both backends."""
    options = TransformOptions(backend=backend, num_threads=3)
    result = run_pipeline(corpus(name), name, options)

    outcome = verify_pipeline(result, ENVIRONMENTS.get(name))

    assert outcome.passed, outcome.summary()


@pytest.mark.parametrize('strategy', ['guarded-clone', 'remainder-loop', 'strip-mine-hint'])
def test_verify_strategies(corpus, strategy):
    """Test every partial-unroll strategy verifies against the reference."""
    result = run_pipeline(corpus('remainder.c'), 'remainder.c', TransformOptions(unroll_strategy=strategy))

    assert verify_pipeline(result, {'N': 10}).passed


@pytest.mark.parametrize('name', RUNNABLE)
def test_compare_backends(corpus, name):
    """Test both backends produce the same trace event for event."""
    report = compare_backends(corpus(name), name, TransformOptions(num_threads=2), ENVIRONMENTS.get(name))

    assert report.passed, report.message


COMPOSED = {
    'unroll_over_tile': "#pragma omp unroll partial(2)\n#pragma omp tile sizes(3)\nfor (int i = 0; i < 10; ++i) body(i);\n",
    'full_over_tile': "#pragma omp unroll full\n#pragma omp tile sizes(2)\nfor (int i = 0; i < 5; ++i) body(i);\n",
    'full_over_nest': "#pragma omp unroll full\nfor (int i = 0; i < 2; ++i)\n    for (int j = 0; j < 3; ++j) body(i, j);\n",
}


@pytest.mark.parametrize('name', sorted(COMPOSED))
def test_compare_backends_composed(name):
    """Test directives applied to a tiled or nested loop agree on both backends."""
    report = compare_backends(COMPOSED[name], name, TransformOptions())

    assert report.passed, report.message


@pytest.mark.parametrize('backend', BACKENDS)
@pytest.mark.parametrize('name', sorted(COMPOSED))
def test_verify_composed(name, backend):
    """Test composed directives verify against the untransformed program."""
    result = run_pipeline(COMPOSED[name], name, TransformOptions(backend=backend))

    outcome = verify_pipeline(result)

    assert outcome.passed, outcome.summary()


def test_verify_detects_wrong_trace(corpus):
    """Test a candidate trace that differs from the reference fails verification."""
    result = run_pipeline(corpus('stride3.c'), 'stride3.c')
    wrong = run_pipeline(corpus('full_over_partial.c').replace('i < 17', 'i < 14'), 'full_over_partial.c')

    with patch('src.utils.pipeline_utils.run_transformed', return_value=run_transformed(wrong)):
        outcome = verify_pipeline(result)

    assert not outcome.passed
    assert outcome.summary().startswith('verify: FAILED (traces differ under exact-order')


def test_dump_unchanged_by_pipeline(corpus):
    """Test running both backends leaves the AST dump unchanged."""
    source = corpus('full_over_partial.c')
    expected = dump_ast(parse_source(source, 'full_over_partial.c'))

    result = run_pipeline(source, 'full_over_partial.c')
    emit(result, 'ir')
    emit(result, 'source')

    assert emit(result, 'ast') == expected


def test_emit_kinds(corpus):
    """Test every artifact renders and unknown kinds are refused."""
    result = run_pipeline(corpus('tile2d.c'), 'tile2d.c')

    outputs = {kind: emit(result, kind) for kind in EMIT_KINDS}

    assert outputs['ast'].startswith("TranslationUnitDecl 'tile2d.c'")
    assert '[transformed]' in outputs['transformed-ast']
    assert outputs['ir'].startswith('block entry:')
    assert 'tile.f0.i' in outputs['source']
    assert outputs['trace'].count('body(') == 20
    with pytest.raises(ValueError):
        emit(result, 'bitcode')


@pytest.mark.parametrize('name', BAD_PROGRAMS)
def test_bad_programs_stop_at_sema(corpus, name):
    """Test erroneous corpus programs are rejected before any backend runs."""
    with pytest.raises(SemaError):
        run_pipeline(corpus(name), name)


def test_choose_contract(corpus):
    """Test the contract follows the directives of the program."""
    def contract(name, threads=1):
        program, sema = analyze_source(corpus(name), name)
        return choose_contract(program, sema, TransformOptions(num_threads=threads))

    assert contract('full_over_partial.c') == OrderContract.exact_order()
    assert contract('workshare.c') == OrderContract.exact_order()
    assert contract('workshare.c', threads=4) == OrderContract.partitioned(4)
    assert contract('tile2d.c') == OrderContract.tiled_order([2, 2], [5, 4])
    assert contract('parallel_for.c', threads=2) == OrderContract.multiset_only()


def test_read_source(tmp_path, corpus_path):
    """Test reading inputs and failing on a missing file."""
    assert 'body(i)' in read_source(corpus_path('stride3.c'))

    with pytest.raises(OSError):
        read_source(str(tmp_path / 'missing.c'))
