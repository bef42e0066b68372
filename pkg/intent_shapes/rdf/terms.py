"""RDF term model: IRIs, blank nodes, typed literals and namespace helpers."""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from typing import Union


@dataclass(frozen=True, slots=True)
class Iri:
    value: str

    def __post_init__(self):
        if not self.value or any(ch.isspace() for ch in self.value):
            raise ValueError(f"Invalid IRI: {self.value!r}")

    def __str__(self) -> str:
        return f"<{self.value}>"


@dataclass(frozen=True, slots=True)
class BlankNode:
    label: str

    def __str__(self) -> str:
        return f"_:{self.label}"


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    datatype: Iri
    language: str | None = None

    def __str__(self) -> str:
        text = f'"{escape_string(self.lexical)}"'
        if self.language:
            return f"{text}@{self.language}"
        return f"{text}^^{self.datatype}"


Term = Union[Iri, BlankNode, Literal]


class Namespace:
    """Attribute access to IRIs below a base, e.g. ``RDF.type``."""

    def __init__(self, base: str):
        self.base = base

    def __getattr__(self, name: str) -> Iri:
        if name.startswith("__"):
            raise AttributeError(name)
        return Iri(self.base + name)

    def __getitem__(self, name: str) -> Iri:
        return Iri(self.base + name)

    def __contains__(self, term) -> bool:
        return isinstance(term, Iri) and term.value.startswith(self.base)

    def __repr__(self) -> str:
        return f"Namespace({self.base!r})"


RDF = Namespace("http://www.w3.org/1999/02/22-rdf-syntax-ns#")
RDFS = Namespace("http://www.w3.org/2000/01/rdf-schema#")
XSD = Namespace("http://www.w3.org/2001/XMLSchema#")
OWL = Namespace("http://www.w3.org/2002/07/owl#")
SH = Namespace("http://www.w3.org/ns/shacl#")

RDF_NIL = RDF.nil
RDF_FIRST = RDF.first
RDF_REST = RDF.rest
RDF_TYPE = RDF.type

NUMERIC_DATATYPES = frozenset(
    XSD[name]
    for name in (
        "integer", "decimal", "int", "long", "short", "byte",
        "nonNegativeInteger", "positiveInteger", "negativeInteger",
        "nonPositiveInteger", "unsignedInt", "unsignedLong",
    )
)

_INTEGER_RE = re.compile(r"^[+-]?[0-9]+$")
_DECIMAL_RE = re.compile(r"^[+-]?[0-9]*\.[0-9]+$")


def string_literal(value: str, language: str | None = None) -> Literal:
    if language:
        return Literal(value, RDF.langString, language.lower())
    return Literal(value, XSD.string)


def integer_literal(value: int) -> Literal:
    return Literal(str(value), XSD.integer)


def boolean_literal(value: bool) -> Literal:
    return Literal("true" if value else "false", XSD.boolean)


def numeric_value(term) -> Decimal | None:
    """Value-space number of an integer/decimal literal, None for anything else."""
    if not isinstance(term, Literal) or term.datatype not in NUMERIC_DATATYPES:
        return None
    lexical = term.lexical.strip()
    if not (_INTEGER_RE.match(lexical) or _DECIMAL_RE.match(lexical)):
        return None
    try:
        return Decimal(lexical)
    except InvalidOperation:
        return None


def is_integer_literal(term) -> bool:
    return (
        isinstance(term, Literal)
        and term.datatype in NUMERIC_DATATYPES
        and bool(_INTEGER_RE.match(term.lexical.strip()))
    )


def term_sort_key(term) -> tuple:
    """Canonical order: IRIs, then blank nodes, then literals."""
    if isinstance(term, Iri):
        return (0, term.value, "", "")
    if isinstance(term, BlankNode):
        return (1, term.label, "", "")
    if isinstance(term, Literal):
        return (2, term.lexical, term.datatype.value, term.language or "")
    return (3, "", "", "")


_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}
_UNESCAPES = {"\\": "\\", '"': '"', "'": "'", "n": "\n", "r": "\r", "t": "\t", "b": "\b", "f": "\f"}


def escape_string(value: str) -> str:
    return "".join(_ESCAPES.get(ch, ch) for ch in value)


def unescape_string(value: str) -> str:
    out = []
    i = 0
    while i < len(value):
        ch = value[i]
        if ch == "\\" and i + 1 < len(value):
            nxt = value[i + 1]
            if nxt in _UNESCAPES:
                out.append(_UNESCAPES[nxt])
                i += 2
                continue
            if nxt in "uU":
                width = 4 if nxt == "u" else 8
                out.append(chr(int(value[i + 2 : i + 2 + width], 16)))
                i += 2 + width
                continue
        out.append(ch)
        i += 1
    return "".join(out)


_N3_TERM_RE = re.compile(
    r'^(?:<(?P<iri>[^>]*)>'
    r'|_:(?P<bnode>\S+)'
    r'|"(?P<lex>(?:[^"\\]|\\.)*)"(?:@(?P<lang>[A-Za-z0-9-]+)|\^\^<(?P<dt>[^>]*)>)?)$',
    re.DOTALL,
)


def term_from_n3(text: str) -> Term:
    """Inverse of ``str(term)``; used to read JSON reports back."""
    match = _N3_TERM_RE.match(text.strip())
    if not match:
        raise ValueError(f"Not an N-Triples term: {text!r}")
    if match.group("iri") is not None:
        return Iri(match.group("iri"))
    if match.group("bnode") is not None:
        return BlankNode(match.group("bnode"))
    lexical = unescape_string(match.group("lex"))
    if match.group("lang"):
        return string_literal(lexical, match.group("lang"))
    if match.group("dt"):
        return Literal(lexical, Iri(match.group("dt")))
    return string_literal(lexical)
