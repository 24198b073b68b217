"""Models package for loomp."""

from .SourceLocation import BUILTIN_LOC, SourceLocation
from .Token import Token, TokenKind
from .IntType import INT, LONG, UINT, ULONG, IntType
from .Expr import Binary, Cast, Conditional, Expr, IntLiteral, Node, Unary, VarRef
from .Stmt import (
    Assign,
    AttributedStmt,
    CallBody,
    CollapseClause,
    Compound,
    Directive,
    DirectiveKind,
    ForStmt,
    FullClause,
    IfStmt,
    IncDec,
    LoopHintAttr,
    PartialClause,
    Program,
    Provenance,
    ScheduleClause,
    SizesClause,
    Stmt,
    VarDecl,
)
from .CanonicalLoop import CanonicalForm, Capture, CaptureMode, ClosureDescriptor, Direction, OMPCanonicalLoop, Param
from .Diagnostic import (
    Diagnostic,
    DivisionByZeroError,
    ImperfectNestError,
    InterpreterError,
    InvalidHandleError,
    IRError,
    IRParseError,
    LexError,
    LoompError,
    LoopNestDepthError,
    MalformedPhiError,
    ParseError,
    SemaError,
    Severity,
    StepLimitExceeded,
    TransformError,
    UnboundVariableError,
)
from .IRModule import BasicBlock, Instruction, IRModule, Terminator
from .CanonicalLoopInfo import CanonicalLoopInfo
from .Trace import EquivalenceReport, OrderContract, Trace, TraceEvent
from .TransformOptions import TransformOptions
from .UnrollDecision import UnrollDecision

__all__ = [
    'BUILTIN_LOC', 'SourceLocation',
    'Token', 'TokenKind',
    'INT', 'LONG', 'UINT', 'ULONG', 'IntType',
    'Binary', 'Cast', 'Conditional', 'Expr', 'IntLiteral', 'Node', 'Unary', 'VarRef',
    'Assign', 'AttributedStmt', 'CallBody', 'CollapseClause', 'Compound', 'Directive', 'DirectiveKind',
    'ForStmt', 'FullClause', 'IfStmt', 'IncDec', 'LoopHintAttr', 'PartialClause', 'Program', 'Provenance',
    'ScheduleClause', 'SizesClause', 'Stmt', 'VarDecl',
    'CanonicalForm', 'Capture', 'CaptureMode', 'ClosureDescriptor', 'Direction', 'OMPCanonicalLoop', 'Param',
    'Diagnostic', 'Severity', 'LoompError', 'LexError', 'ParseError', 'SemaError', 'LoopNestDepthError',
    'TransformError', 'IRError', 'InvalidHandleError', 'ImperfectNestError', 'IRParseError',
    'InterpreterError', 'StepLimitExceeded', 'DivisionByZeroError', 'UnboundVariableError', 'MalformedPhiError',
    'BasicBlock', 'Instruction', 'IRModule', 'Terminator',
    'CanonicalLoopInfo',
    'EquivalenceReport', 'OrderContract', 'Trace', 'TraceEvent',
    'TransformOptions',
    'UnrollDecision',
]
