"""Tests for AST dumps and structural comparison."""

import pytest

from src.utils.dump_utils import NULL_CHILD, TRANSFORMED_MARKER, dump_ast, structural_equal
from src.utils.parser_utils import parse_source
from src.utils.sema_utils import analyze_canonical_loop
from src.utils.shadow_utils import transform_program

from .conftest import GOOD_PROGRAMS


def test_dump_simple_loop():
    """Test the exact dump of a small loop."""
    program = parse_source("for (int i = 0; i < 4; ++i) body(i);")

    expected = (
        "TranslationUnitDecl '<input>'\n"
        "`-ForStmt\n"
        "  |-DeclStmt\n"
        "  | `-VarDecl i 'int' cinit\n"
        "  |   `-IntegerLiteral 'int' 0\n"
        "  |-BinaryOperator 'int' '<'\n"
        "  | |-DeclRefExpr 'int' lvalue Var 'i'\n"
        "  | `-IntegerLiteral 'int' 4\n"
        "  |-UnaryOperator 'int' prefix '++'\n"
        "  | `-DeclRefExpr 'int' lvalue Var 'i'\n"
        "  `-CallExpr 'void' 'body'\n"
        "    `-DeclRefExpr 'int' lvalue Var 'i'\n"
    )
    assert dump_ast(program) == expected


def test_dump_stride3(corpus):
    """Test the literal loop with a non-unit step."""
    text = dump_ast(parse_source(corpus('stride3.c'), 'stride3.c'))
    lines = text.splitlines()

    assert lines[0] == "TranslationUnitDecl 'stride3.c'"
    assert lines[1] == '`-ForStmt'
    assert "  |-CompoundAssignOperator 'int' '+='" in lines
    assert any(line.endswith("IntegerLiteral 'int' 7") for line in lines)
    assert any(line.endswith("CallExpr 'void' 'body'") for line in lines)


def test_dump_directives_and_clauses(corpus):
    """Test directive and clause node names."""
    text = dump_ast(parse_source(corpus('full_over_partial.c')))

    assert text.count('OMPUnrollDirective') == 2
    assert 'OMPFullClause' in text
    assert 'OMPPartialClause' in text
    assert TRANSFORMED_MARKER not in text

    workshare = dump_ast(parse_source(corpus('workshare.c')))
    assert '`-OMPForDirective' in workshare
    assert 'OMPScheduleClause static' in workshare


def test_dump_transformed_subtree(corpus):
    """Test shadow statements are shown under a marker only on request."""
    program = parse_source(corpus('full_over_partial.c'))
    table = transform_program(program)

    plain = dump_ast(program, shadow_table=table)
    assert TRANSFORMED_MARKER not in plain

    lines = dump_ast(program, include_shadow=True, shadow_table=table).splitlines()
    markers = [k for k, line in enumerate(lines) if line.endswith(TRANSFORMED_MARKER)]
    assert markers
    assert any(lines[k + 1].endswith('ForStmt') for k in markers)


def test_dump_loop_hint():
    """Test the implicit hint left by strip-mine partial unrolling."""
    program = parse_source("#pragma omp unroll partial(2)\nfor (int i = 0; i < 9; ++i) body(i);")
    table = transform_program(program)

    text = dump_ast(program, include_shadow=True, shadow_table=table)

    assert 'AttributedStmt' in text
    assert 'LoopHintAttr Implicit loop UnrollCount Numeric' in text


def test_dump_null_child():
    """Test a missing for-init prints as a null child."""
    text = dump_ast(parse_source("int i = 0;\nfor (; i < 3; ++i) body(i);"))

    assert NULL_CHILD in text


def test_dump_node_ids():
    """Test optional node ids number lines in order."""
    lines = dump_ast(parse_source("body(1);"), node_ids=True).splitlines()

    assert lines[0].endswith('#1')
    assert lines[1].endswith('#2')


def test_dump_canonical_loop_wrapper():
    """Test the wrapper dumps the loop, both closures and the user variable."""
    loop = parse_source("for (int i = 7; i < 17; i += 3) body(i);").stmts[0]
    text = dump_ast(analyze_canonical_loop(loop))

    assert text.startswith('OMPCanonicalLoop\n')
    assert 'CapturedStmt distance' in text
    assert 'CapturedStmt loop-value' in text
    assert "DeclRefExpr 'int' lvalue Var 'i'" in text.splitlines()[-1]


def test_structural_equal_ignores_locations():
    """Test layout and comments do not affect structural equality."""
    a = parse_source("for (int i = 0; i < 4; ++i) body(i);", 'a.c')
    b = parse_source("// same loop\nfor (int i = 0;\n     i < 4;\n     ++i)\n  body(i);", 'b.c')
    c = parse_source("for (int i = 0; i < 5; ++i) body(i);")

    assert structural_equal(a, b)
    assert not structural_equal(a, c)


@pytest.mark.parametrize('name', GOOD_PROGRAMS)
def test_dump_is_deterministic(corpus, name):
    """Test two parses of the same file dump identically."""
    source = corpus(name)

    assert dump_ast(parse_source(source, name)) == dump_ast(parse_source(source, name))
