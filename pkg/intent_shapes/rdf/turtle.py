"""Turtle reader and deterministic writer for the subset documented in docs/turtle-subset.md."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from pathlib import Path

from ..errors import TurtleSyntaxError, UnboundPrefixError
from .graph import Graph, PrefixMap, collection_triples
from .terms import (
    RDF_TYPE,
    XSD,
    BlankNode,
    Iri,
    Literal,
    Term,
    escape_string,
    string_literal,
    term_sort_key,
    unescape_string,
)

_TOKEN_SPEC = [
    ("WS", r"[ \t\r\n]+"),
    ("COMMENT", r"#[^\n]*"),
    ("LONG_STRING", r'"""(?:[^"\\]|\\.|"(?!""))*"""'),
    ("STRING", r'"(?:[^"\\\n]|\\.)*"|\'(?:[^\'\\\n]|\\.)*\''),
    ("IRIREF", r"<[^<>\"{}|^`\\\s]*>"),
    ("PREFIX_DIRECTIVE", r"@prefix\b"),
    ("BASE_DIRECTIVE", r"@base\b"),
    ("LANGTAG", r"@[A-Za-z]+(?:-[A-Za-z0-9]+)*"),
    ("DATATYPE_MARK", r"\^\^"),
    ("EXPONENT_NUMBER", r"[+-]?(?:[0-9]+\.[0-9]*|\.?[0-9]+)[eE][+-]?[0-9]+"),
    ("DECIMAL", r"[+-]?[0-9]*\.[0-9]+"),
    ("INTEGER", r"[+-]?[0-9]+"),
    ("BLANK_LABEL", r"_:[A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?"),
    ("PNAME", r"[A-Za-z](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?:(?:[A-Za-z0-9_%](?:[A-Za-z0-9_.\-%]*[A-Za-z0-9_\-%])?)?|:(?:[A-Za-z0-9_%](?:[A-Za-z0-9_.\-%]*[A-Za-z0-9_\-%])?)?"),
    ("KEYWORD", r"[A-Za-z]+"),
    ("PUNCT", r"[.;,\[\]()]"),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPEC))


@dataclass(frozen=True, slots=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise TurtleSyntaxError("Unexpected character", line, pos - line_start + 1, text[pos])
        kind = match.lastgroup
        value = match.group()
        if kind == "EXPONENT_NUMBER":
            raise TurtleSyntaxError("Numeric exponents are outside the supported subset", line, pos - line_start + 1, value)
        if kind not in ("WS", "COMMENT"):
            tokens.append(Token(kind, value, line, pos - line_start + 1))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rfind("\n") + 1
        pos = match.end()
    return tokens


class TurtleParser:
    def __init__(self, text: str, base: str | None = None, bnode_prefix: str = ""):
        self.tokens = tokenize(text)
        self.pos = 0
        self.base = base
        self.bnode_prefix = bnode_prefix
        self.graph = Graph()
        self.prefixes = PrefixMap()
        self._anon = itertools.count()

    def parse(self) -> tuple[Graph, PrefixMap]:
        while not self._at_end():
            token = self._peek()
            if token.kind == "PREFIX_DIRECTIVE" or (token.kind == "KEYWORD" and token.text.upper() == "PREFIX"):
                self._prefix_directive(sparql_style=token.kind == "KEYWORD")
            elif token.kind == "BASE_DIRECTIVE" or (token.kind == "KEYWORD" and token.text.upper() == "BASE"):
                self._base_directive(sparql_style=token.kind == "KEYWORD")
            else:
                self._triples()
                self._expect(".")
        return self.graph, self.prefixes

    def _at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def _peek(self) -> Token:
        if self._at_end():
            last = self.tokens[-1] if self.tokens else Token("EOF", "", 1, 1)
            return Token("EOF", "", last.line, last.column + len(last.text))
        return self.tokens[self.pos]

    def _next(self) -> Token:
        token = self._peek()
        if token.kind == "EOF":
            raise TurtleSyntaxError("Unexpected end of input", token.line, token.column)
        self.pos += 1
        return token

    def _error(self, message: str, token: Token | None = None) -> TurtleSyntaxError:
        token = token or self._peek()
        return TurtleSyntaxError(message, token.line, token.column, token.text)

    def _expect(self, text: str) -> Token:
        token = self._peek()
        if token.text != text:
            raise self._error(f"Expected '{text}'", token)
        return self._next()

    def _prefix_directive(self, sparql_style: bool) -> None:
        self._next()
        label = self._next()
        if label.kind != "PNAME" or not label.text.endswith(":"):
            raise self._error("Expected prefix label", label)
        iri = self._next()
        if iri.kind != "IRIREF":
            raise self._error("Expected namespace IRI", iri)
        self.prefixes.bind(label.text[:-1], self._resolve(iri.text[1:-1]))
        if not sparql_style:
            self._expect(".")

    def _base_directive(self, sparql_style: bool) -> None:
        self._next()
        iri = self._next()
        if iri.kind != "IRIREF":
            raise self._error("Expected base IRI", iri)
        self.base = iri.text[1:-1]
        if not sparql_style:
            self._expect(".")

    def _resolve(self, value: str) -> str:
        if self.base and not re.match(r"^[A-Za-z][A-Za-z0-9+.\-]*:", value):
            return self.base + value
        return value

    def _fresh(self) -> BlankNode:
        return BlankNode(f"{self.bnode_prefix}anon{next(self._anon)}")

    def _triples(self) -> None:
        token = self._peek()
        if token.text == "[":
            subject = self._blank_node_property_list()
            if self._peek().text != ".":
                self._predicate_object_list(subject)
            return
        subject = self._subject()
        self._predicate_object_list(subject)

    def _subject(self) -> Term:
        token = self._peek()
        if token.text == "(":
            return self._collection()
        if token.kind in ("IRIREF", "PNAME", "BLANK_LABEL"):
            return self._iri_or_blank(self._next())
        raise self._error("Expected subject")

    def _iri_or_blank(self, token: Token) -> Term:
        if token.kind == "IRIREF":
            return Iri(self._resolve(token.text[1:-1]))
        if token.kind == "PNAME":
            try:
                return self.prefixes.expand(token.text)
            except UnboundPrefixError as exc:
                raise UnboundPrefixError(exc.prefix, token.line, token.column) from None
        return BlankNode(self.bnode_prefix + token.text[2:])

    def _predicate_object_list(self, subject: Term) -> None:
        while True:
            predicate = self._verb()
            self._object_list(subject, predicate)
            if self._peek().text != ";":
                return
            while self._peek().text == ";":
                self._next()
            if self._peek().text in (".", "]") or self._at_end():
                return

    def _verb(self) -> Iri:
        token = self._next()
        if token.kind == "KEYWORD" and token.text == "a":
            return RDF_TYPE
        if token.kind in ("IRIREF", "PNAME"):
            return self._iri_or_blank(token)
        raise self._error("Expected predicate", token)

    def _object_list(self, subject: Term, predicate: Iri) -> None:
        while True:
            obj = self._object()
            self.graph.add_triple(subject, predicate, obj)
            if self._peek().text != ",":
                return
            self._next()

    def _object(self) -> Term:
        token = self._peek()
        if token.text == "[":
            return self._blank_node_property_list()
        if token.text == "(":
            return self._collection()
        if token.kind in ("IRIREF", "PNAME", "BLANK_LABEL"):
            return self._iri_or_blank(self._next())
        return self._literal()

    def _blank_node_property_list(self) -> BlankNode:
        self._expect("[")
        node = self._fresh()
        if self._peek().text != "]":
            self._predicate_object_list(node)
        self._expect("]")
        return node

    def _collection(self) -> Term:
        self._expect("(")
        items: list[Term] = []
        while self._peek().text != ")":
            if self._peek().kind == "EOF":
                raise self._error("Unterminated collection")
            items.append(self._object())
        self._expect(")")
        return collection_triples(self.graph, items, self._fresh)

    def _literal(self) -> Literal:
        token = self._next()
        if token.kind in ("STRING", "LONG_STRING"):
            quote = 3 if token.kind == "LONG_STRING" else 1
            lexical = unescape_string(token.text[quote:-quote])
            nxt = self._peek()
            if nxt.kind == "LANGTAG":
                self._next()
                return string_literal(lexical, nxt.text[1:])
            if nxt.kind == "DATATYPE_MARK":
                self._next()
                dt_token = self._next()
                if dt_token.kind not in ("IRIREF", "PNAME"):
                    raise self._error("Expected datatype IRI", dt_token)
                return Literal(lexical, self._iri_or_blank(dt_token))
            return string_literal(lexical)
        if token.kind == "INTEGER":
            return Literal(token.text, XSD.integer)
        if token.kind == "DECIMAL":
            return Literal(token.text, XSD.decimal)
        if token.kind == "KEYWORD" and token.text in ("true", "false"):
            return Literal(token.text, XSD.boolean)
        raise self._error("Expected object", token)


def parse_turtle(text: str, base: str | None = None, *, bnode_prefix: str = "") -> tuple[Graph, PrefixMap]:
    """Parse Turtle text into a frozen graph and the prefixes it declared.

    ``bnode_prefix`` keeps blank node labels of different documents apart
    when their graphs are merged.
    """
    graph, prefixes = TurtleParser(text, base, bnode_prefix).parse()
    return graph.freeze(), prefixes


def parse_turtle_file(path: str | Path, *, bnode_prefix: str = "") -> tuple[Graph, PrefixMap]:
    path = Path(path)
    return parse_turtle(path.read_text(encoding="utf-8"), bnode_prefix=bnode_prefix)


_BARE_LITERALS = {
    XSD.integer: re.compile(r"^[+-]?[0-9]+$"),
    XSD.decimal: re.compile(r"^[+-]?[0-9]*\.[0-9]+$"),
    XSD.boolean: re.compile(r"^(true|false)$"),
}


def format_term(term: Term, prefixes: PrefixMap) -> str:
    if isinstance(term, Iri):
        name = prefixes.compact(term)
        return name if name is not None else str(term)
    if isinstance(term, BlankNode):
        return str(term)
    if term.language:
        return f'"{escape_string(term.lexical)}"@{term.language}'
    if term.datatype == XSD.string:
        return f'"{escape_string(term.lexical)}"'
    bare = _BARE_LITERALS.get(term.datatype)
    if bare is not None and bare.match(term.lexical):
        return term.lexical
    return f'"{escape_string(term.lexical)}"^^{format_term(term.datatype, prefixes)}'


def serialize_turtle(graph: Graph, prefixes: PrefixMap) -> str:
    """Deterministic Turtle: sorted subjects (IRIs first), rdf:type first among predicates."""
    from .isomorphism import canonical_labels

    labels = canonical_labels(graph)

    def relabel(term: Term) -> Term:
        if isinstance(term, BlankNode):
            return BlankNode(labels[term])
        return term

    by_subject: dict[Term, dict[Iri, list[Term]]] = {}
    for triple in graph:
        subject = relabel(triple.subject)
        by_subject.setdefault(subject, {}).setdefault(triple.predicate, []).append(relabel(triple.object))

    lines = [f"@prefix {label}: <{namespace}> ." for label, namespace in sorted(prefixes.bindings.items())]
    if lines:
        lines.append("")
    for subject in sorted(by_subject, key=term_sort_key):
        predicates = sorted(by_subject[subject], key=lambda p: (p != RDF_TYPE, p.value))
        parts = []
        for predicate in predicates:
            verb = "a" if predicate == RDF_TYPE else format_term(predicate, prefixes)
            objects = sorted(by_subject[subject][predicate], key=term_sort_key)
            parts.append(f"{verb} " + ", ".join(format_term(o, prefixes) for o in objects))
        lines.append(f"{format_term(subject, prefixes)} " + " ;\n    ".join(parts) + " .")
    return "\n".join(lines) + "\n"
