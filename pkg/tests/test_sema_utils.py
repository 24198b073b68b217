"""Tests for semantic analysis: canonical loops, nest depth and directive validation."""

import math

import pytest

from src.models import Directive, LoopNestDepthError, SemaError, Severity, UINT
from src.utils.eval_utils import evaluate_closure
from src.utils.parser_utils import parse_source
from src.utils.sema_utils import (
    FULL_NOT_CONSTANT,
    INSUFFICIENT_DEPTH,
    NO_LOOP_AFTER_FULL,
    NOT_CANONICAL,
    NOT_POSITIVE,
    analyze_canonical_loop,
    analyze_program,
    constant_trip_count,
    nest_depth_after,
    static_trip_count,
    validate_directive,
)


def first_loop(source: str):
    return parse_source(source).stmts[-1]


def no_variables(ref):
    raise AssertionError(f"unexpected read of {ref.name}")


def distance(source: str, env: dict | None = None) -> int:
    canonical = analyze_canonical_loop(first_loop(source))
    env = env or {}
    return evaluate_closure(canonical.distance, lambda ref: env[ref.name])


def user_values(source: str, count: int) -> list[int]:
    canonical = analyze_canonical_loop(first_loop(source))
    return [evaluate_closure(canonical.user_value, no_variables, k) for k in range(count)]


def test_distance_non_unit_step(corpus):
    """Test the trip count of i = 7; i < 17; i += 3."""
    assert distance(corpus('stride3.c')) == 4


def test_distance_full_signed_range(corpus):
    """Test the full 32-bit range saturates at 0xfffffffe without overflow."""
    canonical = analyze_canonical_loop(first_loop(corpus('full_range.c')))

    assert canonical.logical_type == UINT
    assert evaluate_closure(canonical.distance, no_variables) == 4294967294
    assert constant_trip_count(canonical) == 0xfffffffe


@pytest.mark.parametrize('header,expected', [
    ("for (int i = 0; i < 10; ++i)", 10),
    ("for (int i = 0; i <= 10; ++i)", 11),
    ("for (int i = 10; i > 0; --i)", 10),
    ("for (int i = 10; i >= 0; i -= 3)", 4),
    ("for (int i = 5; i < 5; ++i)", 0),
    ("for (int i = 5; i > 7; --i)", 0),
    ("for (int i = 0; i != 6; ++i)", 6),
    ("for (int i = 3; i != 0; i = i - 1)", 3),
    ("for (int i = 5; i != 0; ++i)", 0),
    ("for (int i = 0; i != 5; --i)", 0),
    ("for (uint u = 4294967290u; u < 4294967295u; u += 2)", 3),
    ("for (int i = -20; i < 20; i += 3)", 14),
])
def test_distance_shapes(header, expected):
    """Test trip counts across relations, directions and steps."""
    assert distance(f"{header} body(0);") == expected


def test_distance_runtime_bound():
    """Test a runtime upper bound is read when the closure runs."""
    source = "for (int i = 0; i < n; i += 4) body(i);"

    assert distance(source, {'n': 10}) == 3
    assert distance(source, {'n': -5}) == 0


def test_user_value_closure():
    """Test logical iterations map back to the user variable."""
    assert user_values("for (int i = 7; i < 17; i += 3) body(i);", 4) == [7, 10, 13, 16]
    assert user_values("for (int i = 10; i > 4; i -= 2) body(i);", 3) == [10, 8, 6]


def test_inconsistent_direction():
    """Test a step away from the bound is rejected with a note."""
    with pytest.raises(SemaError) as exc_info:
        analyze_canonical_loop(first_loop("for (int i = 0; i < 10; --i) body(i);"))

    diagnostic = exc_info.value.diagnostic
    assert diagnostic.message == NOT_CANONICAL
    assert diagnostic.notes[0].message == "inconsistent direction: the step moves away from the loop bound"


def test_induction_variable_modified(corpus):
    """Test a body that writes the induction variable is rejected."""
    program = parse_source(corpus('bad_not_canonical.c'), 'bad_not_canonical.c')

    with pytest.raises(SemaError) as exc_info:
        analyze_program(program)

    diagnostic = exc_info.value.diagnostic
    assert diagnostic.message == NOT_CANONICAL
    assert diagnostic.notes[0].message == "induction variable modified in body"
    assert diagnostic.notes[0].loc.line == 5


@pytest.mark.parametrize('source', [
    "for (int i = 0; i < 10; i += 0) body(i);",
    "for (int i = 0; i < 10; i += k) body(i);",
    "for (int i = 0; i * 2 < 10; ++i) body(i);",
    "for (int i = 0; i != 10; i += 2) body(i);",
    "for (; i < 10; ++i) body(i);",
])
def test_not_canonical_shapes(source):
    """Test loop shapes outside canonical form."""
    with pytest.raises(SemaError) as exc_info:
        analyze_canonical_loop(first_loop(source))

    assert exc_info.value.diagnostic.message == NOT_CANONICAL
    assert exc_info.value.diagnostic.notes


def test_canonical_loop_wraps_original():
    """Test the wrapper keeps the very loop it analyzed."""
    loop = first_loop("for (int i = 0; i < 4; ++i) body(i);")

    canonical = analyze_canonical_loop(loop)

    assert canonical.loop is loop
    assert canonical.user_var.name == 'i'


def test_nest_depth_after_tile(corpus):
    """Test tiling doubles the depth of the nest it consumes."""
    program = parse_source(corpus('tile2d.c'))

    assert nest_depth_after(program.stmts[0]) == 4


def test_nest_depth_after_unroll():
    """Test partial unroll leaves one loop and full unroll none."""
    partial = first_loop("#pragma omp unroll partial(2)\nfor (int i = 0; i < 8; ++i) body(i);")
    full = first_loop("#pragma omp unroll full\nfor (int i = 0; i < 8; ++i) body(i);")
    plain = first_loop("for (int i = 0; i < 8; ++i) for (int j = 0; j < 8; ++j) body(i, j);")

    assert nest_depth_after(partial) == 1
    assert nest_depth_after(full) == 0
    assert nest_depth_after(plain) == 2


def test_nest_depth_after_raises(corpus):
    """Test a shallow nest under a directive raises during the depth walk."""
    with pytest.raises(LoopNestDepthError):
        nest_depth_after(parse_source(corpus('bad_depth.c')).stmts[0])


def test_insufficient_depth(corpus):
    """Test tile sizes(2, 2) on a 1-deep nest."""
    directive = parse_source(corpus('bad_depth.c'), 'bad_depth.c').stmts[0]

    diagnostics = validate_directive(directive)

    assert len(diagnostics) == 1
    assert diagnostics[0].message == INSUFFICIENT_DEPTH
    assert diagnostics[0].notes[0].message == "'#pragma omp tile' requires 2 nested loop(s) but 1 are available"


def test_insufficient_depth_note_chain():
    """Test a depth error over an inner directive names that directive."""
    program = parse_source(
        "#pragma omp tile sizes(2, 2)\n"
        "#pragma omp unroll partial(2)\n"
        "for (int i = 0; i < 8; ++i)\n"
        "    for (int j = 0; j < 8; ++j)\n"
        "        body(i, j);\n"
    )

    with pytest.raises(SemaError) as exc_info:
        analyze_program(program)

    notes = [n.message for n in exc_info.value.diagnostic.notes]
    assert exc_info.value.diagnostic.message == INSUFFICIENT_DEPTH
    assert "loop nest generated by '#pragma omp unroll' here" in notes
    assert exc_info.value.diagnostic.notes[-1].loc.line == 2


def test_directive_over_full_unroll(corpus):
    """Test a directive that needs the loop a full unroll removed."""
    program = parse_source(corpus('bad_over_full.c'), 'bad_over_full.c')

    with pytest.raises(SemaError) as exc_info:
        analyze_program(program)

    diagnostic = exc_info.value.diagnostic
    assert diagnostic.message == NO_LOOP_AFTER_FULL
    assert diagnostic.notes[0].message == "'full' clause specified here removes the loop"
    assert diagnostic.notes[0].loc.line == 3


def test_full_unroll_runtime_trip_count(corpus):
    """Test full unroll needs a compile-time trip count."""
    program = parse_source(corpus('bad_full_runtime.c'), 'bad_full_runtime.c')

    with pytest.raises(SemaError) as exc_info:
        analyze_program(program)

    diagnostic = exc_info.value.diagnostic
    assert diagnostic.message == FULL_NOT_CONSTANT
    assert diagnostic.notes[0].message == "loop with a runtime trip count is here"
    assert all(n.severity is Severity.NOTE for n in diagnostic.notes)


@pytest.mark.parametrize('pragma', [
    "#pragma omp unroll partial(0)",
    "#pragma omp tile sizes(-1)",
    "#pragma omp unroll partial(k)",
    "#pragma omp for collapse(0)",
])
def test_clause_argument_not_positive(pragma):
    """Test clause arguments must be positive constants."""
    directive = first_loop(f"{pragma}\nfor (int i = 0; i < 8; ++i) body(i);")

    messages = [d.message for d in validate_directive(directive)]

    assert NOT_POSITIVE in messages


def test_clause_multiplicity():
    """Test duplicated and conflicting clauses."""
    unroll = first_loop("#pragma omp unroll full partial(2)\nfor (int i = 0; i < 8; ++i) body(i);")
    tile = first_loop("#pragma omp tile sizes(2) sizes(2)\nfor (int i = 0; i < 8; ++i) body(i);")

    assert "at most one of 'full' and 'partial'" in validate_directive(unroll)[0].message
    assert "exactly one 'sizes' clause" in validate_directive(tile)[0].message


def test_non_rectangular_nest():
    """Test inner bounds depending on the outer variable are rejected."""
    program = parse_source(
        "#pragma omp tile sizes(2, 2)\n"
        "for (int i = 0; i < 8; ++i)\n"
        "    for (int j = 0; j < i; ++j)\n"
        "        body(i, j);\n"
    )

    with pytest.raises(SemaError) as exc_info:
        analyze_program(program)

    assert exc_info.value.diagnostic.message == NOT_CANONICAL
    assert "outer iteration variable 'i'" in exc_info.value.diagnostic.notes[0].message


def test_analyze_program_collects_every_error():
    """Test independent errors are all reported."""
    program = parse_source(
        "#pragma omp unroll partial(0)\nfor (int i = 0; i < 8; ++i) body(i);\n"
        "#pragma omp tile sizes(2, 2)\nfor (int k = 0; k < 8; ++k) body(k);\n"
    )

    with pytest.raises(SemaError) as exc_info:
        analyze_program(program)

    messages = [d.message for d in exc_info.value.diagnostics]
    assert NOT_POSITIVE in messages
    assert INSUFFICIENT_DEPTH in messages


def test_unroll_decisions(corpus):
    """Test explicit, full, deferred and heuristic unroll decisions."""
    result = analyze_program(parse_source(corpus('full_over_partial.c')))

    decisions = sorted(str(d) for d in result.decisions.values())
    assert decisions == ['full', 'partial(2, explicit)']
    assert len(result.consumed) == 1

    deferred = analyze_program(parse_source("#pragma omp unroll\nfor (int i = 0; i < 8; ++i) body(i);"))
    assert [d.mode for d in deferred.decisions.values()] == ['deferred']

    heuristic = analyze_program(parse_source(corpus('heuristic.c')))
    decision = next(iter(heuristic.decisions.values()))
    assert decision.mode == 'partial'
    assert decision.factor == 2
    assert decision.compiler_chosen
    assert decision.consumed


def test_heuristic_factor_option(corpus):
    """Test the heuristic factor comes from the caller."""
    result = analyze_program(parse_source(corpus('heuristic.c')), heuristic_factor=4)

    assert next(iter(result.decisions.values())).factor == 4


@pytest.mark.parametrize('n', range(1, 17))
def test_heuristic_outer_trip_count(n):
    """Test a consumed unroll without clause leaves ceil(n / 2) outer iterations."""
    program = parse_source(f"#pragma omp for\n#pragma omp unroll\nfor (int i = 0; i < {n}; ++i) body(i);")
    result = analyze_program(program)
    unroll = program.stmts[0].associated

    assert isinstance(unroll, Directive)
    assert static_trip_count(unroll, result) == math.ceil(n / 2)


def test_canonical_loops_recorded(corpus):
    """Test every literal loop of a directive's nest is wrapped."""
    program = parse_source(corpus('tile2d.c'))

    result = analyze_program(program)

    assert len(result.canonical_loops) == 2
    assert result.program is program


RELATIONS = {'lt': '<', 'le': '<=', 'gt': '>', 'ge': '>='}
ORACLE_BOUNDS = range(-50, 51)


def enumerate_loop(lb: int, ub: int, relation: str, step: int) -> list[int]:
    """Values the user variable takes, by running the loop directly."""
    compare = {'lt': int.__lt__, 'le': int.__le__, 'gt': int.__gt__, 'ge': int.__ge__}[relation]
    values, i = [], lb
    while compare(i, ub):
        values.append(i)
        i += step
    return values


def oracle_shapes():
    for relation in RELATIONS:
        for magnitude in range(1, 6):
            yield relation, magnitude if relation in ('lt', 'le') else -magnitude


def check_against_enumeration(relation: str, step: int, bounds) -> None:
    increment = f"i += {step}" if step > 0 else f"i -= {-step}"
    canonical = analyze_canonical_loop(
        first_loop(f"int lb;\nint ub;\nfor (int i = lb; i {RELATIONS[relation]} ub; {increment}) body(i);")
    )
    for lb in bounds:
        for ub in bounds:
            env = {'lb': lb, 'ub': ub}
            expected = enumerate_loop(lb, ub, relation, step)

            def lookup(ref):
                return env[ref.name]

            assert evaluate_closure(canonical.distance, lookup) == len(expected), (lb, ub)
            assert [evaluate_closure(canonical.user_value, lookup, k) for k in range(len(expected))] == expected


@pytest.mark.parametrize('relation,step', list(oracle_shapes()))
def test_closures_match_enumeration(relation, step):
    """Test distance and user value agree with running the loop on a coarse grid of bounds."""
    check_against_enumeration(relation, step, ORACLE_BOUNDS[::7])


@pytest.mark.slow
@pytest.mark.parametrize('relation,step', list(oracle_shapes()))
def test_closures_match_enumeration_every_bound(relation, step):
    """Test distance and user value for every pair of bounds in [-50, 50]."""
    check_against_enumeration(relation, step, ORACLE_BOUNDS)
