"""Statement, directive and clause nodes of the mini-language AST."""

from dataclasses import dataclass
from enum import Enum

from .Expr import Expr, Node, VarRef
from .IntType import IntType
from .SourceLocation import SourceLocation


@dataclass(frozen=True, eq=False)
class Stmt(Node):
    """Base of statement nodes."""


@dataclass(frozen=True, eq=False)
class VarDecl(Stmt):
    name: str
    type: IntType
    init: Expr | None = None
    decl_id: int | None = None

    def children(self) -> tuple:
        return (self.init,) if self.init is not None else ()


@dataclass(frozen=True, eq=False)
class Assign(Stmt):
    """``target op value`` with op one of ``=``, ``+=``, ``-=``."""

    target: VarRef
    op: str
    value: Expr

    def children(self) -> tuple:
        return (self.target, self.value)


@dataclass(frozen=True, eq=False)
class IncDec(Stmt):
    """``++x``, ``x++``, ``--x`` or ``x--`` used as a statement."""

    target: VarRef
    op: str
    prefix: bool = True

    @property
    def delta(self) -> int:
        return 1 if self.op == '++' else -1

    def children(self) -> tuple:
        return (self.target,)


@dataclass(frozen=True, eq=False)
class CallBody(Stmt):
    """Observable call of the intrinsic ``body``.

    ``thread`` is set only on calls executed by a simulated thread team.
    """

    args: tuple[Expr, ...]
    thread: Expr | None = None

    def children(self) -> tuple:
        return self.args + ((self.thread,) if self.thread is not None else ())


@dataclass(frozen=True, eq=False)
class IfStmt(Stmt):
    cond: Expr
    then: Stmt
    otherwise: Stmt | None = None

    def children(self) -> tuple:
        return (self.cond, self.then) + ((self.otherwise,) if self.otherwise is not None else ())


@dataclass(frozen=True, eq=False)
class Compound(Stmt):
    stmts: tuple[Stmt, ...] = ()

    def children(self) -> tuple:
        return self.stmts


@dataclass(frozen=True)
class Provenance:
    """Which directive generated a loop.

    Attributes:
        directive (str): Directive spelling, e.g. ``#pragma omp unroll``
        loc (SourceLocation): Location of the directive
        parent (Provenance | None): Provenance of the loop it was derived from
    """

    directive: str
    loc: SourceLocation
    parent: 'Provenance | None' = None

    def chain(self) -> list['Provenance']:
        """This provenance followed by its ancestors, innermost first."""
        result, current = [], self
        while current is not None:
            result.append(current)
            current = current.parent
        return result


@dataclass(frozen=True, eq=False)
class ForStmt(Stmt):
    """A literal or generated for-loop.

    ``provenance`` is None for loops written in the source file.
    """

    init: Stmt | None
    cond: Expr
    incr: Stmt
    body: Stmt
    provenance: Provenance | None = None

    def children(self) -> tuple:
        return ((self.init,) if self.init is not None else ()) + (self.cond, self.incr, self.body)


# Clauses


@dataclass(frozen=True, eq=False)
class Clause(Node):
    name = ''

    @property
    def dump_name(self) -> str:
        return f"OMP{self.name.capitalize()}Clause"


@dataclass(frozen=True, eq=False)
class FullClause(Clause):
    name = 'full'


@dataclass(frozen=True, eq=False)
class PartialClause(Clause):
    """``partial`` with optional factor (absent factor means compiler-chosen)."""

    name = 'partial'
    factor: Expr | None = None

    def children(self) -> tuple:
        return (self.factor,) if self.factor is not None else ()


@dataclass(frozen=True, eq=False)
class SizesClause(Clause):
    name = 'sizes'
    sizes: tuple[Expr, ...] = ()

    def children(self) -> tuple:
        return self.sizes


@dataclass(frozen=True, eq=False)
class ScheduleClause(Clause):
    name = 'schedule'
    kind: str = 'static'
    chunk: Expr | None = None

    def children(self) -> tuple:
        return (self.chunk,) if self.chunk is not None else ()


@dataclass(frozen=True, eq=False)
class CollapseClause(Clause):
    name = 'collapse'
    depth: Expr | None = None

    def children(self) -> tuple:
        return (self.depth,) if self.depth is not None else ()


class DirectiveKind(Enum):
    UNROLL = 'unroll'
    TILE = 'tile'
    WORKSHARE_FOR = 'for'


@dataclass(frozen=True, eq=False)
class Directive(Stmt):
    """A ``#pragma omp`` directive and the statement it is associated with.

    Attributes:
        kind (DirectiveKind): Which directive
        clauses (tuple): Clauses in source order
        associated (Stmt): The following statement or stacked directive
        parallel (bool): True for the combined ``parallel for`` spelling
    """

    kind: DirectiveKind
    clauses: tuple[Clause, ...]
    associated: Stmt
    parallel: bool = False

    def clause(self, clause_type: type) -> Clause | None:
        """First clause of the given class, or None."""
        for clause in self.clauses:
            if isinstance(clause, clause_type):
                return clause
        return None

    def clauses_of(self, clause_type: type) -> list:
        return [c for c in self.clauses if isinstance(c, clause_type)]

    @property
    def spelling(self) -> str:
        """Source spelling without clauses, e.g. ``#pragma omp parallel for``."""
        name = 'parallel for' if self.parallel else self.kind.value
        return f"#pragma omp {name}"

    @property
    def dump_name(self) -> str:
        if self.kind is DirectiveKind.WORKSHARE_FOR:
            return 'OMPParallelForDirective' if self.parallel else 'OMPForDirective'
        return f"OMP{self.kind.value.capitalize()}Directive"

    def children(self) -> tuple:
        return self.clauses + (self.associated,)


@dataclass(frozen=True)
class LoopHintAttr:
    """Loop hint attached by the strip-mine lowering of partial unrolling.

    Attributes:
        kind (str): Always ``unroll-count``
        value (int): Requested unroll count, at least 2
        implicit (bool): True when attached by a transformation rather
            than written as ``#pragma clang loop``
    """

    kind: str
    value: int
    implicit: bool = True

    def __post_init__(self):
        if self.kind != 'unroll-count':
            raise ValueError(f"Unknown loop hint kind: {self.kind}")
        if self.value < 2:
            raise ValueError(f"Unroll count hint must be at least 2, got {self.value}")


@dataclass(frozen=True, eq=False)
class AttributedStmt(Stmt):
    attrs: tuple[LoopHintAttr, ...]
    stmt: Stmt

    def children(self) -> tuple:
        return (self.stmt,)


@dataclass(frozen=True, eq=False)
class Program(Stmt):
    """Root of a parsed file.

    Attributes:
        stmts (tuple): Top-level statements in order
        decls (tuple): Every variable declaration of the file, in order
        filename (str): Name of the parsed file
    """

    stmts: tuple[Stmt, ...]
    decls: tuple[VarDecl, ...] = ()
    filename: str = '<input>'

    def children(self) -> tuple:
        return self.stmts
