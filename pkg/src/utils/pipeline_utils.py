"""Pipeline stages shared by the CLI, the sweep and the tests.

parse -> sema -> backend (shadow table or lowered IR) -> emit / run / verify.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path

from ..models.Diagnostic import Diagnostic, SemaError
from ..models.Stmt import Directive, DirectiveKind, ForStmt, Program, SizesClause
from ..models.Trace import EquivalenceReport, OrderContract, Trace
from ..models.TransformOptions import TransformOptions
from .dump_utils import dump_ast
from .equivalence_utils import check_equivalence
from .interpreter_utils import interpret_ast
from .ir_interpreter_utils import interpret_ir
from .ir_text_utils import print_ir
from .ir_verify_utils import verify_skeleton
from .lowering_utils import LoweredProgram, lower_program
from .parser_utils import parse_source
from .printer_utils import print_source
from .rewrite_utils import directives_in, walk
from .sema_utils import SemaResult, analyze_canonical_loop, analyze_program, clause_constant, nest_levels, static_trip_count
from .shadow_utils import ShadowTable, transform_program

logger = logging.getLogger(__name__)

EMIT_KINDS = ('ast', 'transformed-ast', 'ir', 'source', 'trace')


@dataclass
class PipelineResult:
    """Everything the pipeline produced for one input.

    Attributes:
        program (Program): The syntactic tree, never modified
        sema (SemaResult): Decisions and canonical loops
        options (TransformOptions): Options the backend ran with
        shadow_table (ShadowTable | None): Shadow backend output
        lowered (LoweredProgram | None): IR backend output
    """

    program: Program
    sema: SemaResult
    options: TransformOptions
    shadow_table: ShadowTable | None = None
    lowered: LoweredProgram | None = None


@dataclass
class VerifyOutcome:
    """Result of ``verify_pipeline``.

    Attributes:
        passed (bool): True if every check held
        report (EquivalenceReport | None): Trace comparison, if it ran
        checks (list[str]): Names of the checks that ran
        problems (list[Diagnostic]): Skeleton and re-analysis findings
    """

    passed: bool
    report: EquivalenceReport | None = None
    checks: list[str] = field(default_factory=list)
    problems: list[Diagnostic] = field(default_factory=list)

    def summary(self) -> str:
        if self.passed:
            return f"verify: OK ({', '.join(self.checks)})"
        reasons = []
        if self.report is not None and not self.report.passed:
            reasons.append(f"traces differ under {self.report.contract}: {self.report.message}")
        reasons.extend(p.message for p in self.problems)
        return f"verify: FAILED ({'; '.join(reasons)})"


def read_source(path: str) -> str:
    """Read an input file as UTF-8 text, logging failures."""
    try:
        return Path(path).read_text(encoding='utf-8')
    except OSError as e:
        logger.error(f"Cannot read {path}: {e}")
        raise


def analyze_source(source: str, filename: str = '<input>', options: TransformOptions | None = None
                   ) -> tuple[Program, SemaResult]:
    """Parse and analyze; stops before any transformation."""
    options = options or TransformOptions()
    program = parse_source(source, filename)
    sema = analyze_program(program, options.heuristic_factor)
    return program, sema


def run_backend(program: Program, sema: SemaResult, options: TransformOptions) -> PipelineResult:
    """Run the configured backend over an analyzed program."""
    result = PipelineResult(program, sema, options)
    logger.info(f"Running {options.backend} backend on {program.filename}")
    if options.backend == 'shadow':
        result.shadow_table = transform_program(program, options)
    else:
        result.lowered = lower_program(program, options, sema)
    return result


def run_pipeline(source: str, filename: str = '<input>', options: TransformOptions | None = None) -> PipelineResult:
    """parse -> sema -> backend.

    Raises:
        LoompError: From whichever stage failed first
    """
    options = options or TransformOptions()
    program, sema = analyze_source(source, filename, options)
    return run_backend(program, sema, options)


def ensure_shadow(result: PipelineResult) -> ShadowTable:
    if result.shadow_table is None:
        result.shadow_table = transform_program(result.program, result.options)
    return result.shadow_table


def ensure_lowered(result: PipelineResult) -> LoweredProgram:
    if result.lowered is None:
        result.lowered = lower_program(result.program, result.options, result.sema)
    return result.lowered


def run_transformed(result: PipelineResult, env: dict[str, int] | None = None) -> Trace:
    """Execute the backend's output: the shadow table or the IR module."""
    if result.options.backend == 'shadow':
        return interpret_ast(result.program, env, result.options.step_limit, ensure_shadow(result))
    return interpret_ir(ensure_lowered(result).module, env, result.options.step_limit)


def emit(result: PipelineResult, kind: str, env: dict[str, int] | None = None) -> str:
    """Render one artifact of a pipeline run.

    ``transformed-ast`` and ``source`` use the shadow table and ``ir`` the
    lowered module, whichever backend was chosen; ``trace`` runs the
    chosen backend's output.

    Raises:
        ValueError: If ``kind`` is unknown
    """
    if kind == 'ast':
        return dump_ast(result.program)
    if kind == 'transformed-ast':
        return dump_ast(result.program, include_shadow=True, shadow_table=ensure_shadow(result))
    if kind == 'source':
        return print_source(result.program, ensure_shadow(result))
    if kind == 'ir':
        return print_ir(ensure_lowered(result).module)
    if kind == 'trace':
        return run_transformed(result, env).to_text()
    raise ValueError(f"Unknown emit kind: {kind}. Use one of: {', '.join(EMIT_KINDS)}")


# Verification


def _tiled_contract(program: Program, sema: SemaResult) -> OrderContract | None:
    directives = directives_in(program)
    if len(directives) != 1 or directives[0].kind is not DirectiveKind.TILE:
        return None
    tile = directives[0]
    levels = nest_levels(tile)
    if not all(isinstance(level, ForStmt) for level in levels):
        return None
    trips = [static_trip_count(level, sema) for level in levels]
    if any(t is None for t in trips):
        return None
    sizes = [clause_constant(s) for s in tile.clause(SizesClause).sizes]
    return OrderContract.tiled_order(sizes, trips)


def choose_contract(program: Program, sema: SemaResult, options: TransformOptions) -> OrderContract:
    """Strongest order relation the program's directives promise.

    Unroll and collapse keep the logical order. A single thread runs a
    worksharing loop in order; several threads only keep the order within
    each thread. Tiling reorders into the tiled enumeration, which can be
    checked directly when it is the only directive over a nest with
    constant trip counts; otherwise only the multiset is compared.
    """
    kinds = {d.kind for d in directives_in(program)}
    if DirectiveKind.TILE in kinds:
        return _tiled_contract(program, sema) or OrderContract.multiset_only()
    if DirectiveKind.WORKSHARE_FOR in kinds and options.num_threads > 1:
        return OrderContract.partitioned(options.num_threads)
    return OrderContract.exact_order()


def check_generated_loops(table: ShadowTable) -> list[Diagnostic]:
    """Re-run canonical-loop analysis on every generated loop."""
    problems = []
    for _, stmt in table.items():
        for node in walk(stmt):
            if isinstance(node, ForStmt) and node.provenance is not None:
                try:
                    analyze_canonical_loop(node)
                except SemaError as e:
                    problems.append(e.diagnostic)
    return problems


def verify_pipeline(result: PipelineResult, env: dict[str, int] | None = None,
                    reference: Trace | None = None) -> VerifyOutcome:
    """Compare the transformed program against the untransformed one.

    Runs the reference with directives ignored unless a trace of it is
    passed in as ``reference``, runs the backend's output,
    and checks the traces under ``choose_contract``. The IR backend also
    verifies every surviving loop skeleton; the shadow backend re-analyzes
    every generated loop and checks the input tree was left untouched.

    Raises:
        InterpreterError: If either program fails to run
    """
    before = dump_ast(result.program)
    if reference is None:
        reference = interpret_ast(result.program, env, result.options.step_limit)
    candidate = run_transformed(result, env)
    contract = choose_contract(result.program, result.sema, result.options)
    if contract.kind == 'tiled-order':
        total = 1
        for n in contract.trip_counts:
            total *= n
        if total != len(reference):
            logger.info(f"Body does not run once per iteration ({len(reference)} event(s), {total} iteration(s)); "
                        f"comparing multisets only")
            contract = OrderContract.multiset_only()
    report = check_equivalence(reference, candidate, contract)
    outcome = VerifyOutcome(report.passed, report, ['traces equal'])

    if result.options.backend == 'irbuilder':
        lowered = ensure_lowered(result)
        for handle in lowered.handles:
            outcome.problems.extend(verify_skeleton(lowered.module, handle))
        outcome.checks.append('skeleton valid')
    else:
        outcome.problems.extend(check_generated_loops(ensure_shadow(result)))
        outcome.checks.append('generated loops canonical')
    if dump_ast(result.program) != before:
        outcome.problems.append(Diagnostic.error("transformation modified the input tree", result.program.loc))
    outcome.passed = outcome.passed and not outcome.problems
    log = logger.info if outcome.passed else logger.warning
    log(f"Verification of {result.program.filename} under {contract}: {outcome.summary()}")
    return outcome


def compare_backends(source: str, filename: str = '<input>', options: TransformOptions | None = None,
                     env: dict[str, int] | None = None) -> EquivalenceReport:
    """Run both backends on one input and compare their traces event for event."""
    options = options or TransformOptions()
    program, sema = analyze_source(source, filename, options)
    shadow = run_backend(program, sema, options.replace(backend='shadow'))
    ir = run_backend(program, sema, options.replace(backend='irbuilder'))
    return check_equivalence(run_transformed(shadow, env), run_transformed(ir, env), OrderContract.exact_order())
