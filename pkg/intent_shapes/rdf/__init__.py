from .graph import (
    ClassHierarchy,
    Graph,
    PrefixMap,
    Triple,
    compact,
    list_to_sequence,
    types_of,
)
from .isomorphism import canonical_labels, isomorphic
from .terms import OWL, RDF, RDFS, SH, XSD, BlankNode, Iri, Literal, Namespace, Term
from .turtle import parse_turtle, parse_turtle_file, serialize_turtle

__all__ = [
    "OWL",
    "RDF",
    "RDFS",
    "SH",
    "XSD",
    "BlankNode",
    "ClassHierarchy",
    "Graph",
    "Iri",
    "Literal",
    "Namespace",
    "PrefixMap",
    "Term",
    "Triple",
    "canonical_labels",
    "compact",
    "isomorphic",
    "list_to_sequence",
    "match_triples",
    "parse_turtle",
    "parse_turtle_file",
    "serialize_turtle",
    "types_of",
]


def match_triples(graph: Graph, s=None, p=None, o=None) -> list[Triple]:
    return graph.match(s, p, o)
