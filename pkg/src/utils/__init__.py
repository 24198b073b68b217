"""Utils package for loomp."""

from .lexer_utils import tokenize
from .parser_utils import parse_program, parse_source
from .dump_utils import dump_ast, structural_equal
from .printer_utils import print_source
from .diagnostic_utils import provenance_notes, render_diagnostic, render_diagnostics

from .sema_utils import (
    analyze_canonical_loop,
    analyze_program,
    build_distance,
    build_user_value,
    nest_depth_after,
    validate_directive
)

from .shadow_utils import (
    ShadowTable,
    get_transformed_stmt,
    shadow_collapse,
    shadow_tile,
    shadow_unroll_full,
    shadow_unroll_partial,
    shadow_workshare,
    transform_program
)

from .irbuilder_utils import IRBuilder, create_canonical_loop
from .ir_transform_utils import collapse_loops, create_workshare_loop, tile_loops, unroll_loop
from .ir_verify_utils import verify_skeleton
from .ir_text_utils import parse_ir, print_ir
from .lowering_utils import lower_program

from .interpreter_utils import interpret_ast
from .ir_interpreter_utils import interpret_ir
from .equivalence_utils import check_equivalence, tiled_order

from .pipeline_utils import compare_backends, emit, run_pipeline, verify_pipeline
from .sweep_utils import run_sweep
from .report_utils import generate_report

from .config_utils import (
    get_option,
    list_options,
    load_config,
    options_from_config
)

__all__ = [
    'tokenize',
    'parse_program',
    'parse_source',
    'dump_ast',
    'structural_equal',
    'print_source',
    'provenance_notes',
    'render_diagnostic',
    'render_diagnostics',
    'analyze_canonical_loop',
    'analyze_program',
    'build_distance',
    'build_user_value',
    'nest_depth_after',
    'validate_directive',
    'ShadowTable',
    'get_transformed_stmt',
    'shadow_collapse',
    'shadow_tile',
    'shadow_unroll_full',
    'shadow_unroll_partial',
    'shadow_workshare',
    'transform_program',
    'IRBuilder',
    'create_canonical_loop',
    'collapse_loops',
    'create_workshare_loop',
    'tile_loops',
    'unroll_loop',
    'verify_skeleton',
    'parse_ir',
    'print_ir',
    'lower_program',
    'interpret_ast',
    'interpret_ir',
    'check_equivalence',
    'tiled_order',
    'compare_backends',
    'emit',
    'run_pipeline',
    'verify_pipeline',
    'run_sweep',
    'generate_report',
    'get_option',
    'list_options',
    'load_config',
    'options_from_config',
]
