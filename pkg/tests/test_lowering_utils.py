"""Tests for lowering programs to IR (the irbuilder backend)."""

import math

import pytest

from src.models import INT, UINT, OrderContract, TransformError, TransformOptions
from src.utils.equivalence_utils import check_equivalence
from src.utils.interpreter_utils import interpret_ast
from src.utils.ir_interpreter_utils import interpret_ir
from src.utils.ir_transform_utils import constant_value
from src.utils.ir_verify_utils import verify_skeleton
from src.utils.lowering_utils import compare_opcode, lower_program
from src.utils.parser_utils import parse_source
from src.utils.sema_utils import analyze_program


def lower(source, **options):
    program = parse_source(source)
    sema = analyze_program(program)
    return program, lower_program(program, TransformOptions(**options), sema)


def test_compare_opcode():
    """Test comparisons pick signed or unsigned opcodes from the operand type."""
    assert compare_opcode('<', INT) == 'icmp-slt'
    assert compare_opcode('>=', UINT) == 'icmp-uge'
    assert compare_opcode('==', INT) == 'icmp-eq'
    assert compare_opcode('!=', UINT) == 'icmp-ne'


def test_plain_program(corpus):
    """Test a literal loop outside directives lowers to plain control flow."""
    program = parse_source(corpus('stride3.c'))

    lowered = lower_program(program)

    assert lowered.handles == []
    assert any(b.label == 'for.cond' for b in lowered.module.blocks)
    assert interpret_ir(lowered.module).values() == [(7,), (10,), (13,), (16,)]


def test_full_over_partial_fully_unrolled(corpus):
    """Test full over partial unroll leaves no handle and the same calls."""
    _, lowered = lower(corpus('full_over_partial.c'))

    assert lowered.handles == []
    assert sorted(str(d) for d in lowered.decisions.values()) == ['full', 'partial(2, explicit)']
    assert interpret_ir(lowered.module).values() == [(7,), (10,), (13,), (16,)]


def test_tile2d_handles(corpus):
    """Test tiling a 2-deep nest yields four valid skeletons."""
    program, lowered = lower(corpus('tile2d.c'))

    assert len(lowered.handles) == 4
    assert all(verify_skeleton(lowered.module, h) == [] for h in lowered.handles)
    reference = interpret_ast(program)
    report = check_equivalence(reference, interpret_ir(lowered.module), OrderContract.tiled_order([2, 2], [5, 4]))
    assert report.passed, report.message


@pytest.mark.parametrize('n', [0, 1, 7, 10])
def test_remainder_runtime_bound(corpus, n):
    """Test a runtime trip count is read from the environment."""
    _, lowered = lower(corpus('remainder.c'))

    assert interpret_ir(lowered.module, {'N': n}).values() == [(i,) for i in range(n)]


def test_collapse_and_workshare(corpus):
    """Test collapse(2) over four threads partitions the nest."""
    program, lowered = lower(corpus('collapse.c'), num_threads=4)

    trace = interpret_ir(lowered.module)

    assert check_equivalence(interpret_ast(program), trace, OrderContract.partitioned(4))
    assert set(trace.threads()) <= {0, 1, 2, 3}


def test_workshare_chunked(corpus):
    """Test the IR worksharing loop deals chunks like the shadow backend."""
    _, lowered = lower(corpus('workshare.c'), num_threads=4)

    trace = interpret_ir(lowered.module)

    assert trace.threads() == [0, 0, 0, 0, 1, 1, 2, 2, 3, 3]


@pytest.mark.parametrize('n', range(1, 17))
def test_deferred_unroll_becomes_heuristic(n):
    """Test an unroll without clause gets the heuristic factor on this backend."""
    _, lowered = lower(f"#pragma omp unroll\nfor (int i = 0; i < {n}; ++i) body(i);")

    handle = lowered.handles[0]
    assert handle.chosen_unroll_factor == 2
    assert constant_value(lowered.module, handle.trip_count) == math.ceil(n / 2)
    assert interpret_ir(lowered.module).values() == [(i,) for i in range(n)]


def test_heuristic_factor_option(corpus):
    """Test the heuristic factor comes from the options."""
    program = parse_source(corpus('heuristic.c'))

    lowered = lower_program(program, TransformOptions(heuristic_factor=4))

    decision = next(iter(lowered.decisions.values()))
    assert decision.factor == 4
    assert sorted(interpret_ir(lowered.module, {'n': 9}).values()) == [(i,) for i in range(9)]


def test_parallel_for_over_tile(corpus):
    """Test parallel for consumes the floor loop of a tile."""
    _, lowered = lower(corpus('parallel_for.c'), num_threads=2)

    trace = interpret_ir(lowered.module)

    assert sorted(trace.values()) == [(i,) for i in range(10)]
    assert set(trace.threads()) == {0, 1}


def test_module_is_well_formed(corpus):
    """Test every lowered module passes the well-formedness check."""
    _, lowered = lower(corpus('full_over_partial.c'))

    lowered.module.check_well_formed()
    assert lowered.module.entry == 'entry'


def test_full_unroll_runtime_trip_count_without_sema():
    """Test the backend refuses a runtime full unroll and points at the directive."""
    program = parse_source("int n;\n#pragma omp unroll full\nfor (int i = 0; i < n; ++i) body(i);", 'rt.c')

    with pytest.raises(TransformError) as exc_info:
        lower_program(program)

    assert exc_info.value.diagnostic.loc.line == 2
    assert 'compile-time constant' in str(exc_info.value)
