"""Indexed triple graph, prefix maps, RDF list traversal and subclass closure."""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from ..errors import IntentShapesError, MalformedListError, UnboundPrefixError
from .terms import RDF, RDF_FIRST, RDF_NIL, RDF_REST, RDF_TYPE, RDFS, BlankNode, Iri, Literal, Term


@dataclass(frozen=True, slots=True)
class Triple:
    subject: Term
    predicate: Iri
    object: Term

    def __post_init__(self):
        if isinstance(self.subject, Literal):
            raise ValueError(f"Literal in subject position: {self.subject}")
        if not isinstance(self.predicate, Iri):
            raise ValueError(f"Predicate must be an IRI: {self.predicate}")

    def __iter__(self):
        return iter((self.subject, self.predicate, self.object))


class FrozenGraphError(IntentShapesError):
    pass


class Graph:
    """Insertion-ordered set of triples with subject/predicate/object indexes.

    Graphs are built single-threaded and frozen before validation; a frozen
    graph is safe to share between worker threads.
    """

    def __init__(self, triples: Iterable[Triple] = ()):
        self._triples: dict[Triple, None] = {}
        self._by_subject: dict[Term, list[Triple]] = defaultdict(list)
        self._by_predicate: dict[Term, list[Triple]] = defaultdict(list)
        self._by_object: dict[Term, list[Triple]] = defaultdict(list)
        self._frozen = False
        for triple in triples:
            self.add(triple)

    def add(self, triple: Triple) -> None:
        if self._frozen:
            raise FrozenGraphError("Graph is frozen")
        if triple in self._triples:
            return
        self._triples[triple] = None
        self._by_subject[triple.subject].append(triple)
        self._by_predicate[triple.predicate].append(triple)
        self._by_object[triple.object].append(triple)

    def add_triple(self, subject: Term, predicate: Iri, obj: Term) -> None:
        self.add(Triple(subject, predicate, obj))

    def freeze(self) -> "Graph":
        self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, triple: Triple) -> bool:
        return triple in self._triples

    def match(self, s: Term | None = None, p: Term | None = None, o: Term | None = None) -> list[Triple]:
        candidates = None
        for index, key in ((self._by_subject, s), (self._by_predicate, p), (self._by_object, o)):
            if key is None:
                continue
            bucket = index.get(key, ())
            if candidates is None or len(bucket) < len(candidates):
                candidates = bucket
        if candidates is None:
            return list(self._triples)
        return [
            t
            for t in candidates
            if (s is None or t.subject == s) and (p is None or t.predicate == p) and (o is None or t.object == o)
        ]

    def objects(self, subject: Term, predicate: Term) -> list[Term]:
        return [t.object for t in self.match(subject, predicate, None)]

    def subjects(self, predicate: Term, obj: Term) -> list[Term]:
        return [t.subject for t in self.match(None, predicate, obj)]

    def value(self, subject: Term, predicate: Term) -> Term | None:
        found = self.objects(subject, predicate)
        return found[0] if found else None

    def nodes(self) -> list[Term]:
        """Subjects and objects in first-seen order."""
        seen: dict[Term, None] = {}
        for triple in self._triples:
            seen.setdefault(triple.subject, None)
            seen.setdefault(triple.object, None)
        return list(seen)

    def subject_nodes(self) -> list[Term]:
        return list(self._by_subject)

    def has_node(self, term: Term) -> bool:
        return bool(self._by_subject.get(term)) or bool(self._by_object.get(term))

    @classmethod
    def merge(cls, *graphs: "Graph") -> "Graph":
        merged = cls()
        for graph in graphs:
            for triple in graph:
                merged.add(triple)
        return merged.freeze()


_LOCAL_NAME_RE = re.compile(r"^[A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?$")


class PrefixMap:
    def __init__(self, bindings: dict[str, str] | None = None):
        self.bindings: dict[str, str] = dict(bindings or {})

    def bind(self, prefix: str, namespace: str) -> None:
        self.bindings[prefix] = namespace

    def expand(self, pname: str) -> Iri:
        prefix, _, local = pname.partition(":")
        if prefix not in self.bindings:
            raise UnboundPrefixError(prefix)
        return Iri(self.bindings[prefix] + local)

    def compact(self, iri: Iri) -> str | None:
        """Prefixed name for ``iri`` or None when no binding yields a safe local name."""
        best = None
        for prefix, namespace in sorted(self.bindings.items()):
            if not iri.value.startswith(namespace):
                continue
            local = iri.value[len(namespace):]
            if local and not _LOCAL_NAME_RE.match(local):
                continue
            if best is None or len(namespace) > len(best[1]):
                best = (prefix, namespace)
        if best is None:
            return None
        return f"{best[0]}:{iri.value[len(best[1]):]}"

    def merged(self, other: "PrefixMap") -> "PrefixMap":
        """Bindings of both maps; on a label clash ``self`` wins."""
        combined = dict(other.bindings)
        combined.update(self.bindings)
        return PrefixMap(combined)

    def __contains__(self, prefix: str) -> bool:
        return prefix in self.bindings

    def __len__(self) -> int:
        return len(self.bindings)

    def __eq__(self, other) -> bool:
        return isinstance(other, PrefixMap) and self.bindings == other.bindings

    def __repr__(self) -> str:
        return f"PrefixMap({self.bindings!r})"


def compact(term: Term, prefixes: PrefixMap | None = None) -> str:
    """Human-facing form of a term as used in validation messages."""
    if isinstance(term, Iri):
        if prefixes is not None:
            name = prefixes.compact(term)
            if name is not None:
                return name
        return term.value
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    return term.lexical


def list_to_sequence(graph: Graph, head: Term) -> list[Term]:
    items: list[Term] = []
    visited: set[Term] = set()
    node = head
    while node != RDF_NIL:
        if node in visited:
            raise MalformedListError(head, f"cycle through {node}")
        visited.add(node)
        firsts = graph.objects(node, RDF_FIRST)
        rests = graph.objects(node, RDF_REST)
        if len(firsts) != 1:
            raise MalformedListError(head, f"{node} has {len(firsts)} rdf:first values")
        if len(rests) != 1:
            raise MalformedListError(head, f"{node} has {len(rests)} rdf:rest values")
        items.append(firsts[0])
        node = rests[0]
    return items


class ClassHierarchy:
    """Reflexive-transitive rdfs:subClassOf closure over a set of graphs."""

    def __init__(self, *graphs: Graph):
        self._parents: dict[Term, list[Term]] = defaultdict(list)
        for graph in graphs:
            for triple in graph.match(None, RDFS.subClassOf, None):
                if triple.object not in self._parents[triple.subject]:
                    self._parents[triple.subject].append(triple.object)
        self._cache: dict[Term, frozenset[Term]] = {}

    def superclasses(self, cls: Term) -> frozenset[Term]:
        cached = self._cache.get(cls)
        if cached is not None:
            return cached
        seen = {cls}
        frontier = [cls]
        while frontier:
            nxt = []
            for node in frontier:
                for parent in self._parents.get(node, ()):
                    if parent not in seen:
                        seen.add(parent)
                        nxt.append(parent)
            frontier = nxt
        result = frozenset(seen)
        self._cache[cls] = result
        return result


@lru_cache(maxsize=64)
def class_hierarchy(graph: Graph, ontology: Graph) -> ClassHierarchy:
    return ClassHierarchy(ontology, graph)


def types_of(graph: Graph, node: Term, ontology: Graph) -> set[Term]:
    """Asserted types of ``node`` closed under subclass axioms; no domain/range inference."""
    hierarchy = class_hierarchy(graph, ontology)
    asserted = graph.objects(node, RDF_TYPE)
    if graph is not ontology:
        asserted += ontology.objects(node, RDF_TYPE)
    closure: set[Term] = set()
    for cls in asserted:
        closure |= hierarchy.superclasses(cls)
    return closure


def collection_triples(graph: Graph, items: list[Term], make_node) -> Term:
    """Add an rdf:first/rdf:rest chain for ``items`` and return its head."""
    if not items:
        return RDF_NIL
    cells = [make_node() for _ in items]
    for index, (cell, item) in enumerate(zip(cells, items)):
        graph.add_triple(cell, RDF_FIRST, item)
        graph.add_triple(cell, RDF_REST, cells[index + 1] if index + 1 < len(cells) else RDF_NIL)
    return cells[0]


__all__ = [
    "ClassHierarchy",
    "Graph",
    "PrefixMap",
    "RDF",
    "Triple",
    "class_hierarchy",
    "collection_triples",
    "compact",
    "list_to_sequence",
    "types_of",
]
