"""AST dump in the style of ``clang -Xclang -ast-dump`` and structural equality."""

import dataclasses
import logging

from ..models.CanonicalLoop import ClosureDescriptor, OMPCanonicalLoop
from ..models.Expr import Binary, Cast, Conditional, IntLiteral, Node, Unary, VarRef
from ..models.Stmt import (
    Assign,
    AttributedStmt,
    CallBody,
    Clause,
    Compound,
    Directive,
    ForStmt,
    IfStmt,
    IncDec,
    Program,
    ScheduleClause,
    VarDecl,
)

logger = logging.getLogger(__name__)

NULL_CHILD = '<<<NULL>>>'
TRANSFORMED_MARKER = '[transformed]'

# Fields that never take part in structural comparison
IGNORED_FIELDS = {'loc', 'decl_id', 'provenance', 'filename'}


class DumpNode:
    """One rendered line plus its children, built before indentation."""

    def __init__(self, label: str, children=None):
        self.label = label
        self.children: list[DumpNode] = children or []


def _closure_node(title: str, closure: ClosureDescriptor, builder: 'DumpBuilder') -> DumpNode:
    children = [
        DumpNode(f"Capture '{c.name}' {c.mode.value} '{c.type.c_name}'", [builder.build(c.init)])
        for c in closure.captures
    ]
    children += [DumpNode(f"ParmVarDecl '{p.name}' '{p.type.c_name}'") for p in closure.inputs]
    children.append(DumpNode(f"ParmVarDecl '{closure.output.name}' '{closure.output.type.c_name} &'"))
    children.append(builder.build(closure.body))
    return DumpNode(f"CapturedStmt {title}", children)


class DumpBuilder:
    def __init__(self, include_shadow: bool, shadow_table=None, node_ids: bool = False):
        self.include_shadow = include_shadow
        self.shadow_table = shadow_table
        self.node_ids = node_ids
        self.counter = 0

    def label(self, text: str) -> str:
        self.counter += 1
        return f"{text} #{self.counter}" if self.node_ids else text

    def build(self, node) -> DumpNode:
        if node is None:
            return DumpNode(NULL_CHILD)
        label = self.label(self.describe(node))
        return DumpNode(label, self.children(node))

    def describe(self, node) -> str:
        if isinstance(node, Program):
            return f"TranslationUnitDecl '{node.filename}'"
        if isinstance(node, IntLiteral):
            return f"IntegerLiteral '{node.type.c_name}' {node.value}"
        if isinstance(node, VarRef):
            return f"DeclRefExpr '{node.type.c_name}' lvalue Var '{node.name}'"
        if isinstance(node, Cast):
            kind = 'ImplicitCastExpr' if node.implicit else 'CStyleCastExpr'
            return f"{kind} '{node.type.c_name}' <IntegralCast>"
        if isinstance(node, Unary):
            return f"UnaryOperator '{node.type.c_name}' prefix '{node.op}'"
        if isinstance(node, Binary):
            return f"BinaryOperator '{node.type.c_name}' '{node.op}'"
        if isinstance(node, Conditional):
            return f"ConditionalOperator '{node.type.c_name}'"
        if isinstance(node, VarDecl):
            return 'DeclStmt'
        if isinstance(node, Assign):
            kind = 'BinaryOperator' if node.op == '=' else 'CompoundAssignOperator'
            return f"{kind} '{node.target.type.c_name}' '{node.op}'"
        if isinstance(node, IncDec):
            fix = 'prefix' if node.prefix else 'postfix'
            return f"UnaryOperator '{node.target.type.c_name}' {fix} '{node.op}'"
        if isinstance(node, CallBody):
            return "CallExpr 'void' 'body'"
        if isinstance(node, IfStmt):
            return 'IfStmt has_else' if node.otherwise is not None else 'IfStmt'
        if isinstance(node, Compound):
            return 'CompoundStmt'
        if isinstance(node, ForStmt):
            return 'ForStmt'
        if isinstance(node, Directive):
            return node.dump_name
        if isinstance(node, ScheduleClause):
            return f"{node.dump_name} {node.kind}"
        if isinstance(node, Clause):
            return node.dump_name
        if isinstance(node, AttributedStmt):
            return 'AttributedStmt'
        if isinstance(node, OMPCanonicalLoop):
            return 'OMPCanonicalLoop'
        raise TypeError(f"Cannot dump {type(node).__name__}")

    def children(self, node) -> list[DumpNode]:
        if isinstance(node, VarDecl):
            cinit = ' cinit' if node.init is not None else ''
            decl = DumpNode(self.label(f"VarDecl {node.name} '{node.type.c_name}'{cinit}"))
            if node.init is not None:
                decl.children.append(self.build(node.init))
            return [decl]
        if isinstance(node, ForStmt):
            return [self.build(node.init), self.build(node.cond), self.build(node.incr), self.build(node.body)]
        if isinstance(node, CallBody):
            result = [self.build(arg) for arg in node.args]
            if node.thread is not None:
                result.append(DumpNode(self.label('OMPThreadIdExpr'), [self.build(node.thread)]))
            return result
        if isinstance(node, AttributedStmt):
            result = []
            for attr in node.attrs:
                implicit = ' Implicit' if attr.implicit else ''
                hint = DumpNode(self.label(f"LoopHintAttr{implicit} loop UnrollCount Numeric"))
                hint.children.append(DumpNode(self.label(f"IntegerLiteral 'int' {attr.value}")))
                result.append(hint)
            return result + [self.build(node.stmt)]
        if isinstance(node, OMPCanonicalLoop):
            user = node.user_var
            return [
                self.build(node.loop),
                _closure_node('distance', node.distance, self),
                _closure_node('loop-value', node.user_value, self),
                DumpNode(self.label(f"DeclRefExpr '{user.type.c_name}' lvalue Var '{user.name}'")),
            ]
        result = [self.build(child) for child in node.children()]
        if isinstance(node, Directive) and self.include_shadow and self.shadow_table is not None:
            transformed = self.shadow_table.get(node)
            if transformed is not None:
                result.append(DumpNode(TRANSFORMED_MARKER, [self.build(transformed)]))
        return result


def _render(node: DumpNode, prefix: str, lines: list[str]) -> None:
    for index, child in enumerate(node.children):
        last = index == len(node.children) - 1
        lines.append(f"{prefix}{'`-' if last else '|-'}{child.label}")
        _render(child, prefix + ('  ' if last else '| '), lines)


def dump_ast(node: Node, include_shadow: bool = False, shadow_table=None, node_ids: bool = False) -> str:
    """Render a tree one node per line with ``|-`` and `` `- `` child markers.

    Args:
        node: Statement, expression or Program to dump
        include_shadow: Print transformed statements of directives under a
            ``[transformed]`` marker (requires ``shadow_table``)
        shadow_table: Side table of transformed statements
        node_ids: Append sequential ``#n`` ids to node lines

    Returns:
        str: The dump, ending with a newline
    """
    root = DumpBuilder(include_shadow, shadow_table, node_ids).build(node)
    lines = [root.label]
    _render(root, '', lines)
    return '\n'.join(lines) + '\n'


def structural_equal(a, b) -> bool:
    """True iff two trees are isomorphic ignoring locations and node identity."""
    if a is b:
        return True
    if isinstance(a, tuple) or isinstance(b, tuple):
        return (isinstance(a, tuple) and isinstance(b, tuple) and len(a) == len(b)
                and all(structural_equal(x, y) for x, y in zip(a, b)))
    if isinstance(a, Node) or isinstance(b, Node):
        if type(a) is not type(b):
            return False
        return all(
            structural_equal(getattr(a, f.name), getattr(b, f.name))
            for f in dataclasses.fields(a)
            if f.name not in IGNORED_FIELDS
        )
    if dataclasses.is_dataclass(a) and dataclasses.is_dataclass(b) and type(a) is type(b):
        return all(
            structural_equal(getattr(a, f.name), getattr(b, f.name))
            for f in dataclasses.fields(a)
            if f.name not in IGNORED_FIELDS
        )
    return a == b
