"""Left-to-right evaluation of parsed queries over a frozen graph.

Pre-bound variables seed the solution sequence before any pattern is matched.
Filters (including EXISTS) apply once their group has been fully joined.
Expression errors never escape: a failing FILTER drops the solution and a
failing BIND leaves its variable unbound.
"""

from __future__ import annotations

import re
from collections import deque
from typing import Iterable

from ..rdf.graph import Graph
from ..rdf.terms import (
    RDF,
    XSD,
    BlankNode,
    Iri,
    Literal,
    Term,
    boolean_literal,
    integer_literal,
    numeric_value,
    string_literal,
)
from .ast import (
    Bind,
    BinaryExpr,
    CallExpr,
    ConstExpr,
    ExistsFilter,
    Expr,
    Filter,
    GroupPattern,
    NotExpr,
    OptionalPattern,
    PathExpr,
    PredicatePath,
    Query,
    SequencePath,
    SubSelect,
    TriplePattern,
    UnionPattern,
    Var,
    VarExpr,
    ZeroOrMorePath,
)

Solution = dict[str, Term]


class ErrorValue:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ERROR"


ERROR = ErrorValue()

_STRING_TYPES = (XSD.string, RDF.langString)
_REGEX_FLAGS = {"i": re.IGNORECASE, "s": re.DOTALL, "m": re.MULTILINE, "x": re.VERBOSE}


def _compatible_extend(solution: Solution, var: Var, term: Term) -> Solution | None:
    bound = solution.get(var.name)
    if bound is None:
        extended = dict(solution)
        extended[var.name] = term
        return extended
    return solution if bound == term else None


def _merge(left: Solution, right: Solution) -> Solution | None:
    for name, term in right.items():
        if name in left and left[name] != term:
            return None
    merged = dict(left)
    merged.update(right)
    return merged


def _path_targets(data: Graph, start: Term, path: PathExpr) -> list[Term]:
    """Path endpoints as a multiset; sequence steps keep duplicates, closures do not."""
    if isinstance(path, PredicatePath):
        return data.objects(start, path.iri)
    if isinstance(path, SequencePath):
        return [end for middle in _path_targets(data, start, path.left) for end in _path_targets(data, middle, path.right)]
    if isinstance(path, ZeroOrMorePath):
        seen = {start: None}
        frontier = deque([start])
        while frontier:
            node = frontier.popleft()
            for nxt in _path_targets(data, node, path.inner):
                if nxt not in seen:
                    seen[nxt] = None
                    frontier.append(nxt)
        return list(seen)
    raise TypeError(f"Not a path expression: {path!r}")


def eval_path(data: Graph, start: Term, path: PathExpr) -> set[Term]:
    return set(_path_targets(data, start, path))


def _is_zero_length_capable(path: PathExpr) -> bool:
    if isinstance(path, ZeroOrMorePath):
        return True
    if isinstance(path, SequencePath):
        return _is_zero_length_capable(path.left) and _is_zero_length_capable(path.right)
    return False


def effective_boolean(value) -> bool | ErrorValue:
    if value is ERROR or not isinstance(value, Literal):
        return ERROR
    if value.datatype == XSD.boolean:
        if value.lexical in ("true", "1"):
            return True
        if value.lexical in ("false", "0"):
            return False
        return ERROR
    number = numeric_value(value)
    if number is not None:
        return number != 0
    if value.datatype in _STRING_TYPES:
        return bool(value.lexical)
    return ERROR


def _is_string(term) -> bool:
    return isinstance(term, Literal) and term.datatype in _STRING_TYPES


def _compare(op: str, left, right):
    if left is ERROR or right is ERROR:
        return ERROR
    lnum, rnum = numeric_value(left), numeric_value(right)
    if lnum is not None and rnum is not None:
        a, b = lnum, rnum
    elif op in ("=", "!="):
        equal = left == right
        return boolean_literal(equal if op == "=" else not equal)
    elif _is_string(left) and _is_string(right):
        a, b = left.lexical, right.lexical
    else:
        return ERROR
    result = {
        "=": a == b,
        "!=": a != b,
        "<": a < b,
        ">": a > b,
        "<=": a <= b,
        ">=": a >= b,
    }[op]
    return boolean_literal(result)


def _compile_regex(pattern, flags) -> re.Pattern | None:
    if not isinstance(pattern, Literal):
        return None
    bits = 0
    if flags is not None:
        if not isinstance(flags, Literal):
            return None
        for flag in flags.lexical:
            if flag not in _REGEX_FLAGS:
                return None
            bits |= _REGEX_FLAGS[flag]
    try:
        return re.compile(pattern.lexical, bits)
    except re.error:
        return None


def eval_expr(expr: Expr, solution: Solution, data: Graph | None = None):
    """Value of ``expr`` under ``solution``: a term, or ERROR."""
    if isinstance(expr, VarExpr):
        return solution.get(expr.var.name, ERROR)
    if isinstance(expr, ConstExpr):
        return expr.term
    if isinstance(expr, NotExpr):
        value = effective_boolean(eval_expr(expr.operand, solution, data))
        return ERROR if value is ERROR else boolean_literal(not value)
    if isinstance(expr, BinaryExpr):
        if expr.op in ("||", "&&"):
            left = effective_boolean(eval_expr(expr.left, solution, data))
            right = effective_boolean(eval_expr(expr.right, solution, data))
            if expr.op == "||":
                if left is True or right is True:
                    return boolean_literal(True)
                if left is False and right is False:
                    return boolean_literal(False)
                return ERROR
            if left is False or right is False:
                return boolean_literal(False)
            if left is True and right is True:
                return boolean_literal(True)
            return ERROR
        return _compare(expr.op, eval_expr(expr.left, solution, data), eval_expr(expr.right, solution, data))
    if isinstance(expr, CallExpr):
        return _call(expr, solution, data)
    raise TypeError(f"Not an expression: {expr!r}")


def _call(expr: CallExpr, solution: Solution, data: Graph | None):
    name = expr.name
    if name == "BOUND":
        return boolean_literal(expr.args[0].var.name in solution)
    if name == "IF":
        condition = effective_boolean(eval_expr(expr.args[0], solution, data))
        if condition is ERROR:
            return ERROR
        return eval_expr(expr.args[1] if condition else expr.args[2], solution, data)

    args = [eval_expr(arg, solution, data) for arg in expr.args]
    if any(arg is ERROR for arg in args):
        return ERROR
    first = args[0]
    if name == "ISLITERAL":
        return boolean_literal(isinstance(first, Literal))
    if name == "ISIRI":
        return boolean_literal(isinstance(first, Iri))
    if name == "ISBLANK":
        return boolean_literal(isinstance(first, BlankNode))
    if name == "STR":
        if isinstance(first, Iri):
            return string_literal(first.value)
        if isinstance(first, Literal):
            return string_literal(first.lexical)
        return ERROR
    if name == "DATATYPE":
        return first.datatype if isinstance(first, Literal) else ERROR
    if name == "STRSTARTS":
        if not (isinstance(first, Literal) and isinstance(args[1], Literal)):
            return ERROR
        return boolean_literal(first.lexical.startswith(args[1].lexical))
    if name == "REGEX":
        pattern = _compile_regex(args[1], args[2] if len(args) > 2 else None)
        if pattern is None or not isinstance(first, Literal):
            return ERROR
        return boolean_literal(pattern.search(first.lexical) is not None)
    if name == "REPLACE":
        pattern = _compile_regex(args[1], args[3] if len(args) > 3 else None)
        if pattern is None or not isinstance(first, Literal) or not isinstance(args[2], Literal):
            return ERROR
        replacement = re.sub(r"\$(\d)", r"\\\1", args[2].lexical)
        try:
            replaced = pattern.sub(replacement, first.lexical)
        except re.error:
            return ERROR
        return string_literal(replaced, first.language)
    return ERROR


class QueryEvaluator:
    """One evaluation of one query; sub-select results are memoized per instance."""

    def __init__(self, data: Graph, pre_bindings: Solution | None = None):
        self.data = data
        self.pre_bindings = dict(pre_bindings or {})
        self._nodes: list[Term] | None = None
        self._subselects: dict[int, list[Solution]] = {}

    def select(self, query: Query) -> list[Solution]:
        variables = query.variables()
        seed = {name: term for name, term in self.pre_bindings.items() if name in variables}
        solutions = self.group(query.pattern, [seed])
        if query.aggregate is not None:
            solutions = self._aggregate(query, solutions)
        names = query.projected_names
        return [{name: s[name] for name in names if name in s} for s in solutions]

    def _aggregate(self, query: Query, solutions: list[Solution]) -> list[Solution]:
        groups: dict[tuple, list[Solution]] = {}
        for solution in solutions:
            key = tuple(solution.get(var.name) for var in query.group_by)
            groups.setdefault(key, []).append(solution)
        rows = []
        counted = query.aggregate.var.name
        for key, members in groups.items():
            row = {var.name: term for var, term in zip(query.group_by, key) if term is not None}
            row[query.aggregate.alias.name] = integer_literal(sum(1 for m in members if counted in m))
            rows.append(row)
        return rows

    def group(self, pattern: GroupPattern, solutions: list[Solution]) -> list[Solution]:
        deferred = []
        for element in pattern.elements:
            if not solutions:
                break
            if isinstance(element, TriplePattern):
                solutions = [ext for s in solutions for ext in self._match(element, s)]
            elif isinstance(element, OptionalPattern):
                extended = []
                for s in solutions:
                    extended.extend(self.group(element.group, [s]) or [s])
                solutions = extended
            elif isinstance(element, UnionPattern):
                combined = []
                for s in solutions:
                    combined.extend(self.group(element.left, [s]))
                    combined.extend(self.group(element.right, [s]))
                solutions = combined
            elif isinstance(element, GroupPattern):
                solutions = self.group(element, solutions)
            elif isinstance(element, (Filter, ExistsFilter)):
                deferred.append(element)
            elif isinstance(element, Bind):
                solutions = list(self._bind(element, solutions))
            elif isinstance(element, SubSelect):
                rows = self._subselect(element.query)
                solutions = [m for s in solutions for r in rows if (m := _merge(s, r)) is not None]
            else:
                raise TypeError(f"Unknown pattern element: {element!r}")
        for condition in deferred:
            solutions = [s for s in solutions if self._passes(condition, s)]
        return solutions

    def _passes(self, condition, solution: Solution) -> bool:
        if isinstance(condition, ExistsFilter):
            found = bool(self.group(condition.group, [solution]))
            return not found if condition.negated else found
        return effective_boolean(eval_expr(condition.expr, solution, self.data)) is True

    def _bind(self, element: Bind, solutions: list[Solution]) -> Iterable[Solution]:
        for s in solutions:
            value = eval_expr(element.expr, s, self.data)
            if value is ERROR:
                yield s
                continue
            extended = _compatible_extend(s, element.var, value)
            if extended is not None:
                yield extended

    def _subselect(self, query: Query) -> list[Solution]:
        key = id(query)
        if key not in self._subselects:
            self._subselects[key] = QueryEvaluator(self.data, self.pre_bindings).select(query)
        return self._subselects[key]

    def _all_nodes(self) -> list[Term]:
        if self._nodes is None:
            self._nodes = self.data.nodes()
        return self._nodes

    @staticmethod
    def _resolve(part, solution: Solution):
        if isinstance(part, Var):
            return solution.get(part.name)
        return part

    def _match(self, pattern: TriplePattern, solution: Solution) -> Iterable[Solution]:
        subject = self._resolve(pattern.subject, solution)
        obj = self._resolve(pattern.object, solution)
        predicate = pattern.predicate
        if isinstance(predicate, (SequencePath, ZeroOrMorePath)):
            yield from self._match_path(pattern, predicate, subject, obj, solution)
            return
        bound_predicate = self._resolve(predicate, solution)
        if isinstance(subject, Literal) or (bound_predicate is not None and not isinstance(bound_predicate, Iri)):
            return
        for triple in self.data.match(subject, bound_predicate, obj):
            current = solution
            for part, term in ((pattern.subject, triple.subject), (predicate, triple.predicate), (pattern.object, triple.object)):
                if isinstance(part, Var):
                    current = _compatible_extend(current, part, term)
                    if current is None:
                        break
            if current is not None:
                yield current

    def _match_path(self, pattern, path, subject, obj, solution) -> Iterable[Solution]:
        if subject is not None:
            starts = [subject]
        else:
            starts = list(self._all_nodes())
            if obj is not None and _is_zero_length_capable(path) and not self.data.has_node(obj):
                starts.append(obj)
        for start in starts:
            for end in _path_targets(self.data, start, path):
                if obj is not None and end != obj:
                    continue
                current = solution
                if isinstance(pattern.subject, Var):
                    current = _compatible_extend(current, pattern.subject, start)
                if current is not None and isinstance(pattern.object, Var):
                    current = _compatible_extend(current, pattern.object, end)
                if current is not None:
                    yield current


def evaluate(query: Query, data: Graph, pre_bindings: Solution | None = None) -> list[Solution]:
    return QueryEvaluator(data, pre_bindings).select(query)
