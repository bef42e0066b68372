"""Fixture ontology loading and the vocabulary catalog built from it.

Each baseline module file contributes one ``ModuleVocabulary``. Extension
files are merged into the ontology graph but never counted as modules.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from ..errors import MalformedListError
from ..rdf.graph import ClassHierarchy, Graph, PrefixMap, list_to_sequence, types_of
from ..rdf.terms import OWL, RDF, RDF_TYPE, RDFS, Iri, Term, integer_literal, is_integer_literal
from ..rdf.turtle import parse_turtle_file
from .namespaces import FUN, POLYMORPHIC_RESULT, module_namespace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FunctionSignature:
    id: Iri
    result_type: Term
    argument_types: tuple[Term, ...]
    arity_min: int
    arity_max: int | None = None

    @property
    def polymorphic(self) -> bool:
        return self.result_type == POLYMORPHIC_RESULT

    def accepts_count(self, count: int) -> bool:
        if count < self.arity_min:
            return False
        return self.arity_max is None or count <= self.arity_max


@dataclass
class ModuleVocabulary:
    name: str
    namespace: str
    classes: frozenset[Iri] = frozenset()
    properties: frozenset[Iri] = frozenset()
    functions: dict[Iri, FunctionSignature] = field(default_factory=dict)
    source: Path | None = None


def _int(value: Term | None) -> int | None:
    return int(value.lexical) if value is not None and is_integer_literal(value) else None


def derive_arity(graph: Graph) -> int:
    """Add arityMin/arityMax = len(argumentTypes) to functions declaring neither."""
    if graph.frozen:
        raise ValueError("derive_arity needs a graph that is still being built")
    hierarchy = ClassHierarchy(graph)
    derived = 0
    for triple in list(graph.match(None, RDF_TYPE, None)):
        function = triple.subject
        if FUN.Function not in hierarchy.superclasses(triple.object):
            continue
        if graph.objects(function, FUN.arityMin) or graph.objects(function, FUN.arityMax):
            continue
        head = graph.value(function, FUN.argumentTypes)
        if head is None:
            continue
        count = integer_literal(len(list_to_sequence(graph, head)))
        graph.add_triple(function, FUN.arityMin, count)
        graph.add_triple(function, FUN.arityMax, count)
        derived += 1
    return derived


def load_ontology(paths, *, derive: bool = True) -> tuple[Graph, PrefixMap]:
    """Parse and merge ontology files into one frozen graph."""
    graph = Graph()
    prefixes = PrefixMap()
    for path in paths:
        parsed, file_prefixes = parse_turtle_file(path, bnode_prefix=f"{Path(path).stem}_")
        for triple in parsed:
            graph.add(triple)
        prefixes = prefixes.merged(file_prefixes)
    if derive:
        count = derive_arity(graph)
        logger.debug("Derived arity for %d functions", count)
    return graph.freeze(), prefixes


@lru_cache(maxsize=1024)
def function_signature(ontology: Graph, function: Term) -> FunctionSignature | None:
    """Signature of ``function`` as declared in ``ontology``; None if it is not a function."""
    if FUN.Function not in types_of(ontology, function, ontology):
        return None
    head = ontology.value(function, FUN.argumentTypes)
    try:
        arguments = tuple(list_to_sequence(ontology, head)) if head is not None else ()
    except MalformedListError:
        arguments = ()
    arity_min = _int(ontology.value(function, FUN.arityMin))
    return FunctionSignature(
        id=function,
        result_type=ontology.value(function, FUN.resultType) or POLYMORPHIC_RESULT,
        argument_types=arguments,
        arity_min=arity_min if arity_min is not None else len(arguments),
        arity_max=_int(ontology.value(function, FUN.arityMax)),
    )


def _declared(graph: Graph, classes: tuple[Iri, ...], namespace: str) -> frozenset[Iri]:
    found = set()
    for cls in classes:
        for node in graph.subjects(RDF_TYPE, cls):
            if isinstance(node, Iri) and node.value.startswith(namespace):
                found.add(node)
    return frozenset(found)


class VocabularyCatalog:
    """Declared classes, properties and functions per fixture module."""

    def __init__(self, modules: dict[str, ModuleVocabulary], ontology: Graph):
        self.modules = modules
        self.ontology = ontology

    @classmethod
    def from_files(cls, module_paths, extension_paths=()) -> "VocabularyCatalog":
        module_paths = [Path(p) for p in module_paths]
        ontology, _ = load_ontology([*module_paths, *extension_paths])
        modules = {}
        for path in module_paths:
            graph, _ = parse_turtle_file(path, bnode_prefix=f"{path.stem}_")
            namespace = module_namespace(path.stem)
            functions = {}
            for node in _declared(graph, (FUN.Function,), namespace):
                signature = function_signature(ontology, node)
                if signature is not None:
                    functions[node] = signature
            modules[path.stem] = ModuleVocabulary(
                name=path.stem,
                namespace=namespace,
                classes=_declared(graph, (RDFS.Class, OWL.Class), namespace),
                properties=_declared(graph, (RDF.Property,), namespace),
                functions=functions,
                source=path,
            )
        logger.debug("Catalog loaded %d modules", len(modules))
        return cls(modules, ontology)

    def namespaces(self) -> dict[str, str]:
        return {name: module.namespace for name, module in self.modules.items()}

    def classes(self) -> frozenset[Iri]:
        return frozenset().union(*(m.classes for m in self.modules.values()))

    def properties(self) -> frozenset[Iri]:
        return frozenset().union(*(m.properties for m in self.modules.values()))

    def functions(self) -> dict[Iri, FunctionSignature]:
        merged: dict[Iri, FunctionSignature] = {}
        for module in self.modules.values():
            merged.update(module.functions)
        return merged

    def signature(self, function: Term) -> FunctionSignature | None:
        return function_signature(self.ontology, function)

    def module_of(self, term: Term) -> str | None:
        if not isinstance(term, Iri):
            return None
        for name, module in self.modules.items():
            if term.value.startswith(module.namespace):
                return name
        return None

    def is_declared_property(self, term: Term) -> bool:
        """Declared ``a rdf:Property`` directly or through a subclass such as fun:Function."""
        return RDF.Property in types_of(self.ontology, term, self.ontology)
