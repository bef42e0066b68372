"""Recursive-descent parser for the constraint query dialect.

The dialect is closed: anything outside it raises UnsupportedFeatureError
instead of being skipped. Prefixed names resolve against the prefix map of the
shapes file the query was read from.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import QuerySyntaxError, UnboundPrefixError, UnsupportedFeatureError
from ..rdf.graph import PrefixMap
from ..rdf.terms import RDF_TYPE, XSD, Iri, Literal, string_literal, unescape_string
from .ast import (
    Bind,
    BinaryExpr,
    CallExpr,
    ConstExpr,
    CountAggregate,
    ExistsFilter,
    Expr,
    Filter,
    GroupPattern,
    NotExpr,
    OptionalPattern,
    PredicatePath,
    Query,
    SequencePath,
    SubSelect,
    TriplePattern,
    UnionPattern,
    Var,
    VarExpr,
    ZeroOrMorePath,
    _walk_vars,
)

_TOKEN_RE = re.compile(
    r"""
    (?P<WS>\s+)
  | (?P<COMMENT>\#[^\n]*)
  | (?P<IRIREF><[^<>"{}|^`\\\s]*>)
  | (?P<STRING>"(?:[^"\\\n]|\\.)*"|'(?:[^'\\\n]|\\.)*')
  | (?P<VAR>[?$][A-Za-z_][A-Za-z0-9_]*)
  | (?P<LANGTAG>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
  | (?P<DTMARK>\^\^)
  | (?P<DECIMAL>[0-9]*\.[0-9]+)
  | (?P<INTEGER>[0-9]+)
  | (?P<PNAME>[A-Za-z](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?:(?:[A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?)?
       |:(?:[A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?)?)
  | (?P<NAME>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<OP>&&|\|\||!=|<=|>=|[=<>!+^|?-])
  | (?P<PUNCT>[{}().;,*/])
    """,
    re.VERBOSE,
)

UNSUPPORTED_KEYWORDS = {
    "SERVICE", "MINUS", "GRAPH", "VALUES", "ORDER", "LIMIT", "OFFSET", "DISTINCT",
    "REDUCED", "CONSTRUCT", "ASK", "DESCRIBE", "HAVING", "FROM", "PREFIX", "BASE",
    "INSERT", "DELETE", "LOAD", "CLEAR",
}
BUILTINS = {
    "BOUND": (1, 1),
    "IF": (3, 3),
    "STR": (1, 1),
    "STRSTARTS": (2, 2),
    "ISLITERAL": (1, 1),
    "ISIRI": (1, 1),
    "ISURI": (1, 1),
    "ISBLANK": (1, 1),
    "DATATYPE": (1, 1),
    "REGEX": (2, 3),
    "REPLACE": (3, 4),
}
RELATIONAL = {"=", "!=", "<", ">", "<=", ">="}


@dataclass(frozen=True, slots=True)
class _Token:
    kind: str
    text: str
    pos: int

    @property
    def upper(self) -> str:
        return self.text.upper()


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise QuerySyntaxError(f"Unexpected character {text[pos]!r}", pos)
        if match.lastgroup not in ("WS", "COMMENT"):
            tokens.append(_Token(match.lastgroup, match.group(), pos))
        pos = match.end()
    return tokens


class QueryParser:
    def __init__(self, text: str, prefixes: PrefixMap):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.prefixes = prefixes
        self.dollar_vars: set[str] = set()

    # token helpers

    def _peek(self, offset: int = 0) -> _Token:
        index = self.pos + offset
        if index >= len(self.tokens):
            return _Token("EOF", "", len(self.text))
        return self.tokens[index]

    def _next(self) -> _Token:
        token = self._peek()
        if token.kind == "EOF":
            raise QuerySyntaxError("Unexpected end of query", token.pos)
        self.pos += 1
        return token

    def _expect(self, text: str) -> _Token:
        token = self._peek()
        if token.upper != text.upper():
            raise QuerySyntaxError(f"Expected '{text}' but found {token.text!r}", token.pos)
        return self._next()

    def _is_keyword(self, word: str, offset: int = 0) -> bool:
        token = self._peek(offset)
        return token.kind == "NAME" and token.upper == word

    def _check_unsupported(self, token: _Token) -> None:
        if token.kind == "NAME" and token.upper in UNSUPPORTED_KEYWORDS:
            raise UnsupportedFeatureError(token.upper, token.pos)

    # grammar

    def parse(self) -> Query:
        self._check_unsupported(self._peek())
        query = self._select(top_level=True)
        trailing = self._peek()
        if trailing.kind != "EOF":
            self._check_unsupported(trailing)
            raise QuerySyntaxError(f"Unexpected trailing input {trailing.text!r}", trailing.pos)
        return query

    def _select(self, top_level: bool) -> Query:
        start = self._peek().pos
        self._expect("SELECT")
        self._check_unsupported(self._peek())
        projected: list[Var] = []
        aggregate = None
        while True:
            token = self._peek()
            if token.kind == "VAR":
                projected.append(self._var())
            elif token.text == "(":
                if aggregate is not None:
                    raise UnsupportedFeatureError("multiple aggregates", token.pos)
                aggregate = self._count_projection()
                projected.append(aggregate.alias)
            elif token.text == "*":
                raise UnsupportedFeatureError("SELECT *", token.pos)
            else:
                break
        if not projected:
            raise QuerySyntaxError("SELECT needs at least one projected variable", self._peek().pos)
        if self._is_keyword("WHERE"):
            self._next()
        pattern = self._group()
        group_by: list[Var] = []
        if self._is_keyword("GROUP"):
            self._next()
            self._expect("BY")
            while self._peek().kind == "VAR":
                group_by.append(self._var())
            if not group_by:
                raise QuerySyntaxError("GROUP BY needs variables", self._peek().pos)
        self._check_unsupported(self._peek())
        if aggregate is not None or group_by:
            if top_level:
                raise UnsupportedFeatureError("aggregation outside a sub-select", start)
            if aggregate is None or not group_by:
                raise UnsupportedFeatureError("GROUP BY without a single COUNT aggregate", start)
        pattern_vars = {v.name for v in _walk_vars(pattern)}
        for var in projected:
            if aggregate is not None and var == aggregate.alias:
                continue
            if var.name not in pattern_vars:
                raise QuerySyntaxError(f"Projected variable {var} is not bound by the pattern", start)
        end = self._peek().pos
        return Query(
            projected=tuple(projected),
            pattern=pattern,
            aggregate=aggregate,
            group_by=tuple(group_by),
            pre_bindable=frozenset(self.dollar_vars),
            text=self.text[start:end] if not top_level else self.text,
        )

    def _count_projection(self) -> CountAggregate:
        self._expect("(")
        token = self._next()
        if token.upper != "COUNT":
            raise UnsupportedFeatureError(f"projection expression {token.text}", token.pos)
        self._expect("(")
        if self._peek().text == "*" or self._is_keyword("DISTINCT"):
            raise UnsupportedFeatureError(f"COUNT({self._peek().text})", self._peek().pos)
        var = self._var()
        self._expect(")")
        self._expect("AS")
        alias = self._var()
        self._expect(")")
        return CountAggregate(var, alias)

    def _var(self) -> Var:
        token = self._next()
        if token.kind != "VAR":
            raise QuerySyntaxError(f"Expected variable but found {token.text!r}", token.pos)
        name = token.text[1:]
        if token.text.startswith("$"):
            self.dollar_vars.add(name)
        return Var(name)

    def _group(self) -> GroupPattern:
        self._expect("{")
        if self._is_keyword("SELECT"):
            query = self._select(top_level=False)
            self._expect("}")
            return GroupPattern((SubSelect(query),))
        elements = []
        while self._peek().text != "}":
            token = self._peek()
            if token.kind == "EOF":
                raise QuerySyntaxError("Unterminated group pattern", token.pos)
            self._check_unsupported(token)
            if token.text == "{":
                group = self._group()
                if self._is_keyword("UNION"):
                    while self._is_keyword("UNION"):
                        self._next()
                        group = GroupPattern((UnionPattern(group, self._group()),))
                    elements.extend(group.elements)
                else:
                    elements.append(group)
            elif self._is_keyword("OPTIONAL"):
                self._next()
                elements.append(OptionalPattern(self._group()))
            elif self._is_keyword("FILTER"):
                self._next()
                elements.append(self._filter())
            elif self._is_keyword("BIND"):
                self._next()
                self._expect("(")
                expr = self._expression()
                self._expect("AS")
                var = self._var()
                self._expect(")")
                elements.append(Bind(expr, var))
            elif token.text == ".":
                self._next()
            else:
                elements.extend(self._triples_block())
        self._expect("}")
        return GroupPattern(tuple(elements))

    def _filter(self):
        if self._is_keyword("NOT") and self._is_keyword("EXISTS", 1):
            self._next()
            self._next()
            return ExistsFilter(self._group(), negated=True)
        if self._is_keyword("EXISTS"):
            self._next()
            return ExistsFilter(self._group(), negated=False)
        if self._peek().text == "(":
            self._next()
            expr = self._expression()
            self._expect(")")
            return Filter(expr)
        if self._peek().kind == "NAME":
            return Filter(self._call())
        raise QuerySyntaxError("Expected filter expression", self._peek().pos)

    def _triples_block(self) -> list[TriplePattern]:
        subject = self._node()
        patterns = []
        while True:
            predicate = self._verb()
            while True:
                patterns.append(TriplePattern(subject, predicate, self._node()))
                if self._peek().text != ",":
                    break
                self._next()
            if self._peek().text != ";":
                break
            while self._peek().text == ";":
                self._next()
            if self._peek().text in (".", "}"):
                break
        return patterns

    def _verb(self):
        token = self._peek()
        if token.kind == "VAR":
            return self._var()
        path = self._path_sequence()
        if isinstance(path, PredicatePath):
            return path.iri
        return path

    def _path_sequence(self):
        path = self._path_element()
        while self._peek().text == "/":
            self._next()
            path = SequencePath(path, self._path_element())
        return path

    def _path_element(self):
        token = self._peek()
        if token.text in ("^", "!"):
            raise UnsupportedFeatureError(f"property path operator {token.text}", token.pos)
        if token.text == "(":
            self._next()
            path = self._path_sequence()
            self._expect(")")
        elif token.kind == "NAME" and token.text == "a":
            self._next()
            path = PredicatePath(RDF_TYPE)
        elif token.kind in ("IRIREF", "PNAME"):
            path = PredicatePath(self._iri(self._next()))
        else:
            raise QuerySyntaxError(f"Expected predicate but found {token.text!r}", token.pos)
        modifier = self._peek()
        if modifier.text == "*":
            self._next()
            return ZeroOrMorePath(path)
        if modifier.text in ("+", "?", "|"):
            raise UnsupportedFeatureError(f"property path operator {modifier.text}", modifier.pos)
        return path

    def _iri(self, token: _Token) -> Iri:
        if token.kind == "IRIREF":
            return Iri(token.text[1:-1])
        try:
            return self.prefixes.expand(token.text)
        except UnboundPrefixError:
            raise QuerySyntaxError(f"Unbound prefix in {token.text}", token.pos) from None

    def _node(self):
        token = self._peek()
        if token.kind == "VAR":
            return self._var()
        if token.kind in ("IRIREF", "PNAME"):
            return self._iri(self._next())
        if token.kind == "NAME" and token.text == "a":
            raise QuerySyntaxError("'a' is only valid in predicate position", token.pos)
        return self._literal()

    def _literal(self) -> Literal:
        token = self._next()
        if token.text in ("+", "-") and token.kind == "OP":
            number = self._peek()
            if number.kind not in ("INTEGER", "DECIMAL") or number.pos != token.pos + 1:
                raise QuerySyntaxError(f"Expected term but found {token.text!r}", token.pos)
            self._next()
            datatype = XSD.integer if number.kind == "INTEGER" else XSD.decimal
            return Literal(token.text + number.text, datatype)
        if token.kind == "STRING":
            lexical = unescape_string(token.text[1:-1])
            if self._peek().kind == "LANGTAG":
                return string_literal(lexical, self._next().text[1:])
            if self._peek().kind == "DTMARK":
                self._next()
                return Literal(lexical, self._iri(self._next()))
            return string_literal(lexical)
        if token.kind == "INTEGER":
            return Literal(token.text, XSD.integer)
        if token.kind == "DECIMAL":
            return Literal(token.text, XSD.decimal)
        if token.kind == "NAME" and token.text in ("true", "false"):
            return Literal(token.text, XSD.boolean)
        raise QuerySyntaxError(f"Expected term but found {token.text!r}", token.pos)

    # expressions

    def _expression(self) -> Expr:
        expr = self._and_expression()
        while self._peek().text == "||":
            self._next()
            expr = BinaryExpr("||", expr, self._and_expression())
        return expr

    def _and_expression(self) -> Expr:
        expr = self._relational()
        while self._peek().text == "&&":
            self._next()
            expr = BinaryExpr("&&", expr, self._relational())
        return expr

    def _relational(self) -> Expr:
        expr = self._unary()
        if self._peek().text in RELATIONAL:
            op = self._next().text
            expr = BinaryExpr(op, expr, self._unary())
        return expr

    def _unary(self) -> Expr:
        token = self._peek()
        if token.text == "!":
            self._next()
            return NotExpr(self._unary())
        if token.text in ("+", "-") and token.kind == "OP":
            if self._signed_number_ahead():
                return ConstExpr(self._literal())
            raise UnsupportedFeatureError("arithmetic", token.pos)
        return self._primary()

    def _signed_number_ahead(self) -> bool:
        sign, number = self._peek(), self._peek(1)
        return number.kind in ("INTEGER", "DECIMAL") and number.pos == sign.pos + 1

    def _primary(self) -> Expr:
        token = self._peek()
        if token.text == "(":
            self._next()
            expr = self._expression()
            self._expect(")")
            return expr
        if token.kind == "VAR":
            return VarExpr(self._var())
        if token.kind in ("IRIREF", "PNAME"):
            return ConstExpr(self._iri(self._next()))
        if token.kind == "NAME" and token.text not in ("true", "false"):
            if token.upper == "EXISTS" or token.upper == "NOT":
                raise UnsupportedFeatureError("EXISTS inside an expression", token.pos)
            return self._call()
        return ConstExpr(self._literal())

    def _call(self) -> CallExpr:
        token = self._next()
        name = token.upper
        if name not in BUILTINS:
            raise UnsupportedFeatureError(f"function {token.text}", token.pos)
        self._expect("(")
        args: list[Expr] = []
        if self._peek().text != ")":
            args.append(self._expression())
            while self._peek().text == ",":
                self._next()
                args.append(self._expression())
        self._expect(")")
        low, high = BUILTINS[name]
        if not low <= len(args) <= high:
            raise QuerySyntaxError(f"{name} takes {low}..{high} arguments, got {len(args)}", token.pos)
        if name == "BOUND" and not isinstance(args[0], VarExpr):
            raise QuerySyntaxError("BOUND expects a variable", token.pos)
        if name == "ISURI":
            name = "ISIRI"
        return CallExpr(name, tuple(args))


def parse_query(text: str, prefixes: PrefixMap | None = None) -> Query:
    return QueryParser(text, prefixes or PrefixMap()).parse()
