"""Tests for the IR text form."""

import pytest

from src.models import IRParseError
from src.utils.ir_interpreter_utils import interpret_ir
from src.utils.ir_text_utils import parse_ir, print_ir
from src.utils.ir_transform_utils import tile_loops
from src.utils.lowering_utils import lower_program
from src.utils.parser_utils import parse_source

from .conftest import GOOD_PROGRAMS, build_loop, build_nest

SMALL_MODULE = """\
block entry:
  %0 = const u32 2
  jump loop.preheader
block loop.preheader:
  %1 = const u32 0
  jump loop.header
block loop.header:
  %2 = phi u32 [loop.preheader, %1], [loop.latch, %5]
  jump loop.cond
block loop.cond:
  %3 = icmp-ult i32 %2, %0
  branch %3, loop.body, loop.exit
block loop.body:
  call-body %2
  jump loop.latch
block loop.latch:
  %4 = const u32 1
  %5 = add u32 %2, %4
  jump loop.header
block loop.exit:
  jump loop.after
block loop.after:
  halt
"""


def test_print_skeleton():
    """Test the printed form of a fresh skeleton."""
    module, _ = build_loop(2)

    assert print_ir(module) == SMALL_MODULE


def test_parse_and_run():
    """Test a parsed module runs."""
    module = parse_ir(SMALL_MODULE)

    assert interpret_ir(module).values() == [(0,), (1,)]


def test_round_trip_transformed_nest():
    """Test printing and parsing a tiled nest gives an equal module."""
    module, loops = build_nest(3, 5)
    tile_loops(module, loops, [2, 2])

    assert parse_ir(print_ir(module)) == module


@pytest.mark.parametrize('name', GOOD_PROGRAMS)
def test_round_trip_lowered_programs(corpus, name):
    """Test lowered corpus programs survive the text form."""
    module = lower_program(parse_source(corpus(name), name)).module

    assert print_ir(parse_ir(print_ir(module))) == print_ir(module)


def test_parsed_module_allocates_fresh_values():
    """Test new values after parsing do not collide with parsed ones."""
    module = parse_ir(SMALL_MODULE)

    assert module.new_value() == 6


def test_comments_and_blank_lines():
    """Test ';' comments and blank lines are ignored."""
    module = parse_ir("; entry only\n\nblock entry:   \n  halt ; done\n")

    assert [b.label for b in module.blocks] == ['entry']


def test_missing_terminator_names_block():
    """Test a block without terminator is named with its line."""
    with pytest.raises(IRParseError) as exc_info:
        parse_ir("block entry:\n  %0 = const u32 1\nblock next:\n  halt\n")

    assert str(exc_info.value) == "line 1: block 'entry' has no terminator"


@pytest.mark.parametrize('text,message', [
    ("  halt\n", "instruction outside of a block"),
    ("block a:\n  %0 = frob u32 1\n  halt\n", "unknown opcode 'frob'"),
    ("block a:\n  %0 = const u16 1\n  halt\n", "unknown type 'u16'"),
    ("block a:\n  %0 = add u32 %1\n  halt\n", "'add' takes 2 operand(s), found 1"),
    ("block a:\n  halt\n  halt\n", "instruction after the terminator of block 'a'"),
    ("block a:\n  halt\nblock a:\n  halt\n", "duplicate block 'a'"),
    ("", "module has no blocks"),
])
def test_parse_errors(text, message):
    """Test malformed text is rejected with a line number."""
    with pytest.raises(IRParseError) as exc_info:
        parse_ir(text)

    assert message in str(exc_info.value)
    assert str(exc_info.value).startswith('line ')
