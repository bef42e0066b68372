"""Compile a shapes graph into NodeShape/PropertyShape objects.

Constraint components and SPARQL target types are compiled first so node
shapes can instantiate them. A shape naming an ``sh:`` predicate outside the
supported vocabulary fails the load rather than being ignored.
"""

from __future__ import annotations

import itertools
import logging
import re
from pathlib import Path

from ..errors import MalformedListError, MissingParameterError, QuerySyntaxError, ShapeLoadError
from ..rdf.graph import Graph, PrefixMap, compact, list_to_sequence
from ..rdf.turtle import parse_turtle_file
from ..rdf.terms import OWL, RDF_TYPE, RDFS, SH, Iri, Literal, Term, is_integer_literal, numeric_value
from ..sparql.ast import Query
from ..sparql.parser import parse_query
from .model import (
    AndConstraint,
    ClassConstraint,
    ConstraintComponent,
    DatatypeConstraint,
    HasValueConstraint,
    InConstraint,
    MaxCountConstraint,
    MinCountConstraint,
    MinInclusiveConstraint,
    NodeKindConstraint,
    NodeShape,
    OrConstraint,
    Parameter,
    PatternConstraint,
    PropertyShape,
    Severity,
    ShapesGraph,
    SparqlConstraint,
    SparqlTarget,
    SparqlTargetType,
    SparqlTargetTypeInstance,
    TargetClass,
    TargetNode,
    TargetObjectsOf,
    TargetSubjectsOf,
)

logger = logging.getLogger(__name__)

NODE_KINDS = frozenset(
    SH[name] for name in ("IRI", "BlankNode", "Literal", "BlankNodeOrIRI", "BlankNodeOrLiteral", "IRIOrLiteral")
)
TARGET_PREDICATES = frozenset(
    SH[name] for name in ("targetClass", "targetNode", "targetSubjectsOf", "targetObjectsOf", "target")
)
CONSTRAINT_PREDICATES = frozenset(
    SH[name]
    for name in (
        "class", "datatype", "nodeKind", "minCount", "maxCount", "in", "pattern", "flags",
        "hasValue", "minInclusive", "or", "and",
    )
)
ANNOTATION_PREDICATES = frozenset(
    SH[name] for name in ("message", "severity", "name", "description", "order", "group")
)
NODE_SHAPE_PREDICATES = TARGET_PREDICATES | CONSTRAINT_PREDICATES | ANNOTATION_PREDICATES | {SH.property, SH.sparql}
PROPERTY_SHAPE_PREDICATES = CONSTRAINT_PREDICATES | ANNOTATION_PREDICATES | {SH.path}


def _has_backreference(pattern: str) -> bool:
    """True for ``\\1``-style or ``(?P=name)`` references outside character classes."""
    in_class = False
    index = 0
    while index < len(pattern):
        char = pattern[index]
        if char == "\\":
            following = pattern[index + 1 : index + 2]
            if not in_class and (following.isdigit() and following != "0" or following == "k"):
                return True
            index += 2
            continue
        if in_class:
            if char == "]":
                in_class = False
        elif char == "[":
            in_class = True
            if pattern[index + 1 : index + 2] == "^":
                index += 1
            if pattern[index + 1 : index + 2] == "]":
                index += 1
        elif pattern.startswith("(?P=", index):
            return True
        index += 1
    return False


def _label(term: Term, prefixes: PrefixMap) -> str:
    return compact(term, prefixes) if isinstance(term, Iri) else str(term)


class ShapesLoader:
    def __init__(self, graph: Graph, prefixes: PrefixMap):
        self.graph = graph
        self.prefixes = prefixes
        self.result = ShapesGraph(prefixes=prefixes, graph=graph)
        self._in_progress: set[Term] = set()

    # helpers

    def _fail(self, node: Term, message: str) -> ShapeLoadError:
        return ShapeLoadError(_label(node, self.prefixes), message)

    def _single(self, node: Term, predicate: Iri) -> Term | None:
        values = self.graph.objects(node, predicate)
        if len(values) > 1:
            raise self._fail(node, f"expects at most one {compact(predicate, self.prefixes)} value")
        return values[0] if values else None

    def _list(self, node: Term, head: Term, predicate: Iri) -> list[Term]:
        try:
            return list_to_sequence(self.graph, head)
        except MalformedListError as exc:
            raise self._fail(node, f"{compact(predicate, self.prefixes)}: {exc.reason}") from exc

    def _query(self, node: Term, owner: Term) -> Query:
        select = self._single(node, SH.select)
        if not isinstance(select, Literal):
            raise self._fail(owner, "sh:select must be a string literal")
        try:
            query = parse_query(select.lexical, self.prefixes)
        except QuerySyntaxError as exc:
            raise self._fail(owner, f"invalid query: {exc}") from exc
        # focus nodes are read from the projected ?this
        if "this" not in query.projected_names:
            raise self._fail(owner, "sh:select must project $this")
        return query

    def _message(self, node: Term) -> str | None:
        message = self._single(node, SH.message)
        return message.lexical if isinstance(message, Literal) else None

    def _parameters(self, node: Term) -> tuple[Parameter, ...]:
        parameters = []
        for param in self.graph.objects(node, SH.parameter):
            path = self._single(param, SH.path)
            if not isinstance(path, Iri):
                raise self._fail(node, "sh:parameter needs an IRI sh:path")
            optional = self._single(param, SH.optional)
            local = re.split(r"[#/]", path.value)[-1]
            parameters.append(Parameter(local, path, isinstance(optional, Literal) and optional.lexical == "true"))
        parameters.sort(key=lambda p: p.name)
        return tuple(parameters)

    # top level

    def load(self) -> ShapesGraph:
        for node in self.graph.subjects(RDF_TYPE, SH.ConstraintComponent):
            self._component(node)
        for node in self.graph.subjects(RDF_TYPE, SH.SPARQLTargetType):
            parameters = self._parameters(node)
            self.result.target_types[node] = SparqlTargetType(node, parameters, self._query(node, node))
        for node in self._shape_nodes():
            self._node_shape(node)
        logger.debug(
            "Loaded %d node shapes, %d components, %d target types",
            len(self.result.node_shapes),
            len(self.result.components),
            len(self.result.target_types),
        )
        return self.result

    def _component(self, node: Term) -> None:
        validator = self._single(node, SH.validator) or self._single(node, SH.nodeValidator)
        if validator is None:
            raise self._fail(node, "constraint component without sh:validator")
        message = self._message(validator) or self._message(node)
        self.result.components[node] = ConstraintComponent(
            node, self._parameters(node), self._query(validator, node), message
        )

    def _shape_nodes(self) -> list[Term]:
        nodes: dict[Term, None] = {}
        for node in self.graph.subjects(RDF_TYPE, SH.NodeShape):
            nodes.setdefault(node, None)
        for predicate in TARGET_PREDICATES:
            for triple in self.graph.match(None, predicate, None):
                nodes.setdefault(triple.subject, None)
        return list(nodes)

    def _node_shape(self, node: Term) -> NodeShape:
        existing = self.result.node_shapes.get(node)
        if existing is not None:
            return existing
        if node in self._in_progress:
            raise self._fail(node, "cyclic sh:or/sh:and reference")
        self._in_progress.add(node)
        try:
            shape = self._compile_node_shape(node)
        finally:
            self._in_progress.discard(node)
        self.result.node_shapes[node] = shape
        return shape

    def _check_vocabulary(self, node: Term, allowed: frozenset[Iri]) -> None:
        for triple in self.graph.match(node, None, None):
            if triple.predicate in SH and triple.predicate not in allowed:
                raise self._fail(node, f"unknown constraint parameter {compact(triple.predicate, self.prefixes)}")

    def _severity(self, node: Term) -> Severity:
        value = self._single(node, SH.severity)
        if value is None:
            return Severity.VIOLATION
        try:
            return Severity.from_iri(value)
        except ValueError:
            raise self._fail(node, f"unknown severity {value}") from None

    def _compile_node_shape(self, node: Term) -> NodeShape:
        self._check_vocabulary(node, NODE_SHAPE_PREDICATES)
        shape = NodeShape(node, severity=self._severity(node))
        shape.messages = [m.lexical for m in self.graph.objects(node, SH.message) if isinstance(m, Literal)]
        types = set(self.graph.objects(node, RDF_TYPE))
        if types & {RDFS.Class, OWL.Class} and SH.NodeShape in types:
            shape.targets.append(TargetClass(node))
        shape.targets.extend(self._targets(node))
        shape.constraints = self._core_constraints(node)
        for ps in self.graph.objects(node, SH.property):
            shape.property_shapes.append(self._property_shape(ps))
        for sparql in self.graph.objects(node, SH.sparql):
            shape.sparql_constraints.append(
                SparqlConstraint(node, self._query(sparql, node), self._message(sparql), sparql)
            )
        shape.sparql_constraints.extend(self._component_instances(node))
        return shape

    def _targets(self, node: Term) -> list:
        targets = []
        for cls in self.graph.objects(node, SH.targetClass):
            targets.append(TargetClass(cls))
        for value in self.graph.objects(node, SH.targetNode):
            targets.append(TargetNode(value))
        for predicate in self.graph.objects(node, SH.targetSubjectsOf):
            targets.append(TargetSubjectsOf(predicate))
        for predicate in self.graph.objects(node, SH.targetObjectsOf):
            targets.append(TargetObjectsOf(predicate))
        for target in self.graph.objects(node, SH.target):
            targets.append(self._custom_target(node, target))
        return targets

    def _custom_target(self, shape: Term, target: Term):
        if self.graph.value(target, SH.select) is not None:
            return SparqlTarget(self._query(target, shape))
        for target_type in self.graph.objects(target, RDF_TYPE):
            declared = self.result.target_types.get(target_type)
            if declared is None:
                continue
            bindings = []
            for param in declared.parameters:
                value = self._single(target, param.path)
                if value is None:
                    if param.optional:
                        continue
                    raise MissingParameterError(_label(target_type, self.prefixes), param.name)
                bindings.append((param.name, value))
            return SparqlTargetTypeInstance(declared, tuple(bindings))
        raise self._fail(shape, f"sh:target {target} is neither a SPARQL target nor a known target type")

    def _component_instances(self, node: Term) -> list[SparqlConstraint]:
        instances = []
        for component in self.result.components.values():
            values = {p.name: self.graph.objects(node, p.path) for p in component.parameters}
            mandatory = component.mandatory
            if not mandatory or not any(values[p.name] for p in mandatory):
                continue
            for param in mandatory:
                if not values[param.name]:
                    raise MissingParameterError(_label(component.id, self.prefixes), param.name)
            names = [p.name for p in component.parameters if values[p.name]]
            message = self._message(node)
            for combination in itertools.product(*(values[name] for name in names)):
                bindings = tuple(zip(names, combination))
                instances.append(
                    SparqlConstraint(
                        node,
                        component.validator,
                        message or component.message,
                        component.id,
                        bindings,
                        component.id,
                    )
                )
        return instances

    def _property_shape(self, node: Term) -> PropertyShape:
        self._check_vocabulary(node, PROPERTY_SHAPE_PREDICATES)
        path = self._single(node, SH.path)
        if not isinstance(path, Iri):
            raise self._fail(node, "sh:path must be a single predicate IRI")
        shape = PropertyShape(node, path, severity=self._severity(node))
        shape.messages = [m.lexical for m in self.graph.objects(node, SH.message) if isinstance(m, Literal)]
        shape.constraints = self._core_constraints(node)
        return shape

    def _count(self, node: Term, predicate: Iri) -> int | None:
        value = self._single(node, predicate)
        if value is None:
            return None
        if not is_integer_literal(value) or int(value.lexical) < 0:
            raise self._fail(node, f"{compact(predicate, self.prefixes)} expects a non-negative integer, got {value}")
        return int(value.lexical)

    def _core_constraints(self, node: Term) -> list:
        constraints = []
        for cls in self.graph.objects(node, SH["class"]):
            if isinstance(cls, Literal):
                raise self._fail(node, "sh:class expects an IRI")
            constraints.append(ClassConstraint(cls))
        for datatype in self.graph.objects(node, SH.datatype):
            if not isinstance(datatype, Iri):
                raise self._fail(node, "sh:datatype expects an IRI")
            constraints.append(DatatypeConstraint(datatype))
        kind = self._single(node, SH.nodeKind)
        if kind is not None:
            if kind not in NODE_KINDS:
                raise self._fail(node, f"unknown sh:nodeKind {kind}")
            constraints.append(NodeKindConstraint(kind))
        min_count = self._count(node, SH.minCount)
        if min_count is not None:
            constraints.append(MinCountConstraint(min_count))
        max_count = self._count(node, SH.maxCount)
        if max_count is not None:
            constraints.append(MaxCountConstraint(max_count))
        for head in self.graph.objects(node, SH["in"]):
            constraints.append(InConstraint(tuple(self._list(node, head, SH["in"]))))
        pattern = self._single(node, SH.pattern)
        if pattern is not None:
            flags = self._single(node, SH.flags)
            if not isinstance(pattern, Literal) or (flags is not None and not isinstance(flags, Literal)):
                raise self._fail(node, "sh:pattern and sh:flags expect literals")
            flag_text = flags.lexical if flags is not None else ""
            try:
                re.compile(pattern.lexical)
            except re.error as exc:
                raise self._fail(node, f"invalid sh:pattern: {exc}") from exc
            if _has_backreference(pattern.lexical):
                raise self._fail(node, f"sh:pattern backreferences are not supported: {pattern.lexical!r}")
            constraints.append(PatternConstraint(pattern.lexical, flag_text))
        for value in self.graph.objects(node, SH.hasValue):
            constraints.append(HasValueConstraint(value))
        minimum = self._single(node, SH.minInclusive)
        if minimum is not None:
            if numeric_value(minimum) is None:
                raise self._fail(node, "sh:minInclusive expects a numeric literal")
            constraints.append(MinInclusiveConstraint(minimum))
        for predicate, kind in ((SH["or"], OrConstraint), (SH["and"], AndConstraint)):
            for head in self.graph.objects(node, predicate):
                members = self._list(node, head, predicate)
                for member in members:
                    if isinstance(member, Literal):
                        raise self._fail(node, f"{compact(predicate, self.prefixes)} members must be shapes")
                    self._node_shape(member)
                constraints.append(kind(tuple(members)))
        return constraints


def load_shapes(graph: Graph, prefixes: PrefixMap | None = None) -> ShapesGraph:
    return ShapesLoader(graph, prefixes or PrefixMap()).load()


def shapes_from_files(paths, prefixes: PrefixMap | None = None) -> ShapesGraph:
    """Parse and merge several shapes files, then compile them as one graph."""
    graphs = []
    combined = PrefixMap(dict(prefixes.bindings) if prefixes else {})
    for path in paths:
        graph, file_prefixes = parse_turtle_file(path, bnode_prefix=f"{Path(path).stem}_")
        graphs.append(graph)
        combined = combined.merged(file_prefixes)
    return load_shapes(Graph.merge(*graphs), combined)
