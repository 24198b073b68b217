"""Tests for tree walking and rewriting."""

from src.models import CallBody, Directive, VarRef
from src.models.Expr import literal
from src.utils.dump_utils import dump_ast
from src.utils.parser_utils import parse_source
from src.utils.rewrite_utils import (
    assigned_names,
    directives_in,
    substitute,
    tag_threads,
    unwrap_canonical,
    var_refs,
    walk,
)
from src.utils.sema_utils import analyze_canonical_loop


def first_stmt(source):
    return parse_source(source).stmts[0]


def test_substitute_leaves_input_untouched():
    """Test substitution builds a new tree and shares unchanged subtrees."""
    loop = first_stmt("for (int i = 0; i < 4; ++i) body(i + n);")
    before = dump_ast(loop)

    rewritten = substitute(loop, {'n': literal(3)})

    assert var_refs(rewritten) == {'i'}
    assert var_refs(loop) == {'i', 'n'}
    assert dump_ast(loop) == before
    assert rewritten.init is loop.init


def test_substitute_empty_mapping():
    """Test an empty mapping returns the node itself."""
    loop = first_stmt("for (int i = 0; i < 4; ++i) body(i);")

    assert substitute(loop, {}) is loop


def test_tag_threads():
    """Test every body call gets the thread expression."""
    loop = first_stmt("for (int i = 0; i < 4; ++i) { body(i); body(0); }")

    tagged = tag_threads(loop, VarRef('t'))

    calls = [n for n in walk(tagged) if isinstance(n, CallBody)]
    assert len(calls) == 2
    assert all(c.thread == VarRef('t') for c in calls)
    assert all(n.thread is None for n in walk(loop) if isinstance(n, CallBody))


def test_assigned_names():
    """Test assignments and increments are both writes."""
    loop = first_stmt("for (int i = 0; i < 4; ++i) { x = i; body(x); }")

    assert set(assigned_names(loop)) == {'i', 'x'}


def test_directives_in(corpus):
    """Test stacked directives are found outermost first."""
    directives = directives_in(parse_source(corpus('full_over_partial.c')))

    assert len(directives) == 2
    assert all(isinstance(d, Directive) for d in directives)
    assert directives[1] in list(walk(directives[0]))


def test_unwrap_canonical():
    """Test removing the canonical-loop wrapper gives back the literal loop."""
    loop = first_stmt("for (int i = 7; i < 17; i += 3) body(i);")
    wrapped = analyze_canonical_loop(loop)

    assert dump_ast(unwrap_canonical(wrapped)) == dump_ast(loop)
    assert unwrap_canonical(loop) is loop
