"""Tree walking and rewriting over the immutable AST.

Rewrites never touch the input tree: a transformer returns new nodes for
changed subtrees and shares the unchanged ones.
"""

import dataclasses
import logging
from typing import Iterator

from ..models.CanonicalLoop import OMPCanonicalLoop
from ..models.Expr import Cast, Expr, Node, VarRef, convert
from ..models.Stmt import Assign, CallBody, Directive, IncDec, Stmt, VarDecl

logger = logging.getLogger(__name__)

# Fields that hold metadata rather than children
META_FIELDS = ('loc', 'provenance', 'type', 'decl_id', 'form')


class NodeTransformer:
    """Walks a tree and rebuilds the nodes a ``visit_<Class>`` method changes.

    A visitor method returns the replacement node; returning the node it was
    given keeps it. Nodes without a visitor method are rebuilt only if one
    of their children changed.
    """

    def visit(self, node):
        if isinstance(node, tuple):
            return tuple(self.visit(item) for item in node)
        if not isinstance(node, Node):
            return node
        method = getattr(self, f"visit_{type(node).__name__}", self.generic_visit)
        return method(node)

    def generic_visit(self, node: Node) -> Node:
        changes = {}
        for f in dataclasses.fields(node):
            if f.name in META_FIELDS:
                continue
            old_value = getattr(node, f.name)
            if isinstance(old_value, (Node, tuple)):
                new_value = self.visit(old_value)
                if new_value is not old_value and new_value != old_value:
                    changes[f.name] = new_value
        if not changes:
            return node
        return dataclasses.replace(node, **changes)


class Substituter(NodeTransformer):
    """Replace variable references by expressions, keyed by name."""

    def __init__(self, mapping: dict[str, Expr]):
        self.mapping = mapping

    def visit_VarRef(self, node: VarRef) -> Expr:
        if node.name in self.mapping:
            return convert(self.mapping[node.name], node.type)
        return node


class ThreadTagger(NodeTransformer):
    """Attach a thread-id expression to every ``body`` call."""

    def __init__(self, thread: Expr):
        self.thread = thread

    def visit_CallBody(self, node: CallBody) -> CallBody:
        return dataclasses.replace(node, args=self.visit(node.args), thread=self.thread)


def substitute(node: Node, mapping: dict[str, Expr]) -> Node:
    """Return ``node`` with every reference to a mapped name replaced."""
    if not mapping:
        return node
    return Substituter(mapping).visit(node)


def tag_threads(stmt: Stmt, thread: Expr) -> Stmt:
    return ThreadTagger(thread).visit(stmt)


def walk(node) -> Iterator[Node]:
    """Pre-order traversal of ``node`` and all syntactic descendants."""
    stack = [node]
    while stack:
        current = stack.pop()
        if current is None:
            continue
        yield current
        stack.extend(reversed(current.children()))


def var_refs(node: Node) -> set[str]:
    """Names of all variables an expression or statement reads or writes."""
    return {n.name for n in walk(node) if isinstance(n, VarRef)}


def assigned_names(stmt: Stmt) -> dict[str, Stmt]:
    """Variables written anywhere in ``stmt``, mapped to the first writer."""
    written: dict[str, Stmt] = {}
    for node in walk(stmt):
        if isinstance(node, (Assign, IncDec)):
            written.setdefault(node.target.name, node)
    return written


def declared_names(stmt: Stmt) -> set[str]:
    return {n.name for n in walk(stmt) if isinstance(n, VarDecl)}


def directives_in(node: Node) -> list[Directive]:
    return [n for n in walk(node) if isinstance(n, Directive)]


def strip_implicit_casts(expr: Expr) -> Expr:
    while isinstance(expr, Cast) and expr.implicit:
        expr = expr.operand
    return expr


def unwrap_canonical(stmt: Stmt) -> Stmt:
    """Remove an OMPCanonicalLoop wrapper, returning the literal loop."""
    return stmt.loop if isinstance(stmt, OMPCanonicalLoop) else stmt
