"""Abstract syntax of the restricted SPARQL dialect."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from ..rdf.terms import Iri, Term


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self) -> str:
        return f"?{self.name}"


@dataclass(frozen=True, slots=True)
class PredicatePath:
    iri: Iri


@dataclass(frozen=True, slots=True)
class SequencePath:
    left: "PathExpr"
    right: "PathExpr"


@dataclass(frozen=True, slots=True)
class ZeroOrMorePath:
    inner: "PathExpr"


PathExpr = Union[PredicatePath, SequencePath, ZeroOrMorePath]
PatternTerm = Union[Term, Var]


@dataclass(frozen=True, slots=True)
class TriplePattern:
    subject: PatternTerm
    predicate: Union[Iri, Var, SequencePath, ZeroOrMorePath]
    object: PatternTerm


# Expressions


@dataclass(frozen=True, slots=True)
class VarExpr:
    var: Var


@dataclass(frozen=True, slots=True)
class ConstExpr:
    term: Term


@dataclass(frozen=True, slots=True)
class BinaryExpr:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True, slots=True)
class NotExpr:
    operand: "Expr"


@dataclass(frozen=True, slots=True)
class CallExpr:
    name: str
    args: tuple["Expr", ...]


Expr = Union[VarExpr, ConstExpr, BinaryExpr, NotExpr, CallExpr]


# Group pattern elements


@dataclass(frozen=True, slots=True)
class GroupPattern:
    elements: tuple["Element", ...]


@dataclass(frozen=True, slots=True)
class OptionalPattern:
    group: GroupPattern


@dataclass(frozen=True, slots=True)
class UnionPattern:
    left: GroupPattern
    right: GroupPattern


@dataclass(frozen=True, slots=True)
class Filter:
    expr: Expr


@dataclass(frozen=True, slots=True)
class ExistsFilter:
    group: GroupPattern
    negated: bool = True


@dataclass(frozen=True, slots=True)
class Bind:
    expr: Expr
    var: Var


@dataclass(frozen=True, slots=True)
class SubSelect:
    query: "Query"


Element = Union[TriplePattern, OptionalPattern, UnionPattern, Filter, ExistsFilter, Bind, SubSelect, GroupPattern]


@dataclass(frozen=True, slots=True)
class CountAggregate:
    var: Var
    alias: Var


@dataclass(frozen=True, slots=True)
class Query:
    projected: tuple[Var, ...]
    pattern: GroupPattern
    aggregate: CountAggregate | None = None
    group_by: tuple[Var, ...] = ()
    pre_bindable: frozenset[str] = field(default_factory=frozenset)
    text: str = ""

    def variables(self) -> frozenset[str]:
        return frozenset(v.name for v in _walk_vars(self.pattern)) | {v.name for v in self.projected}

    @property
    def projected_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.projected)


def _walk_vars(node):
    if isinstance(node, Var):
        yield node
    elif isinstance(node, (GroupPattern,)):
        for element in node.elements:
            yield from _walk_vars(element)
    elif isinstance(node, TriplePattern):
        for part in (node.subject, node.predicate, node.object):
            yield from _walk_vars(part)
    elif isinstance(node, (OptionalPattern, ExistsFilter)):
        yield from _walk_vars(node.group)
    elif isinstance(node, UnionPattern):
        yield from _walk_vars(node.left)
        yield from _walk_vars(node.right)
    elif isinstance(node, Filter):
        yield from _walk_vars(node.expr)
    elif isinstance(node, Bind):
        yield from _walk_vars(node.expr)
        yield node.var
    elif isinstance(node, SubSelect):
        yield from node.query.projected
    elif isinstance(node, VarExpr):
        yield node.var
    elif isinstance(node, BinaryExpr):
        yield from _walk_vars(node.left)
        yield from _walk_vars(node.right)
    elif isinstance(node, NotExpr):
        yield from _walk_vars(node.operand)
    elif isinstance(node, CallExpr):
        for arg in node.args:
            yield from _walk_vars(arg)
