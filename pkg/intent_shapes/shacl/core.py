"""Core constraint checks over the value nodes of one focus node."""

from __future__ import annotations

import re
from typing import Iterator

from ..rdf.graph import Graph, PrefixMap, compact, types_of
from ..rdf.terms import NUMERIC_DATATYPES, SH, XSD, BlankNode, Iri, Literal, Term, is_integer_literal, numeric_value
from .model import (
    AndConstraint,
    ClassConstraint,
    CoreConstraint,
    DatatypeConstraint,
    HasValueConstraint,
    InConstraint,
    MaxCountConstraint,
    MinCountConstraint,
    MinInclusiveConstraint,
    NodeKindConstraint,
    NodeShape,
    OrConstraint,
    PatternConstraint,
    PropertyShape,
    Severity,
    ShapesGraph,
    ValidationResult,
)

ANONYMOUS_SHAPE = BlankNode("anonymous-shape")

NODE_KIND_TYPES = {
    SH.IRI: (Iri,),
    SH.BlankNode: (BlankNode,),
    SH.Literal: (Literal,),
    SH.BlankNodeOrIRI: (BlankNode, Iri),
    SH.BlankNodeOrLiteral: (BlankNode, Literal),
    SH.IRIOrLiteral: (Iri, Literal),
}
_FLAG_BITS = {"i": re.IGNORECASE, "s": re.DOTALL, "m": re.MULTILINE, "x": re.VERBOSE}
_DECIMAL_TYPES = frozenset({XSD.decimal})


def _well_formed(literal: Literal) -> bool:
    if literal.datatype in NUMERIC_DATATYPES:
        if literal.datatype in _DECIMAL_TYPES:
            return numeric_value(literal) is not None
        return is_integer_literal(literal)
    if literal.datatype == XSD.boolean:
        return literal.lexical in ("true", "false", "1", "0")
    return True


def _string_form(term: Term) -> str | None:
    if isinstance(term, Iri):
        return term.value
    if isinstance(term, Literal):
        return term.lexical
    return None


class CoreChecker:
    def __init__(self, data: Graph, ontology: Graph, shapes: ShapesGraph | None = None):
        self.data = data
        self.ontology = ontology
        self.shapes = shapes
        self.prefixes = shapes.prefixes if shapes is not None else PrefixMap()

    def _show(self, term: Term) -> str:
        return compact(term, self.prefixes)

    def violations(
        self, constraint: CoreConstraint, focus: Term, values: list[Term], path: Iri | None = None
    ) -> Iterator[tuple[Term | None, str]]:
        """(offending value or None, default message) pairs."""
        show = self._show
        if isinstance(constraint, ClassConstraint):
            for value in values:
                if constraint.cls not in types_of(self.data, value, self.ontology):
                    yield value, f"Value {show(value)} does not have class {show(constraint.cls)}"
        elif isinstance(constraint, DatatypeConstraint):
            for value in values:
                if not (isinstance(value, Literal) and value.datatype == constraint.datatype and _well_formed(value)):
                    yield value, f"Value {show(value)} is not a literal of datatype {show(constraint.datatype)}"
        elif isinstance(constraint, NodeKindConstraint):
            allowed = NODE_KIND_TYPES[constraint.kind]
            for value in values:
                if not isinstance(value, allowed):
                    yield value, f"Value {show(value)} is not of node kind {show(constraint.kind)}"
        elif isinstance(constraint, MinCountConstraint):
            if len(values) < constraint.count:
                where = f"{show(focus)}->{show(path)}" if path is not None else show(focus)
                yield None, f"Less than {constraint.count} values on {where}"
        elif isinstance(constraint, MaxCountConstraint):
            if len(values) > constraint.count:
                where = f"{show(focus)}->{show(path)}" if path is not None else show(focus)
                yield None, f"More than {constraint.count} values on {where}"
        elif isinstance(constraint, InConstraint):
            for value in values:
                if value not in constraint.values:
                    options = ", ".join(show(v) for v in constraint.values)
                    yield value, f"Value {show(value)} not in list [{options}]"
        elif isinstance(constraint, PatternConstraint):
            bits = 0
            for flag in constraint.flags:
                bits |= _FLAG_BITS.get(flag, 0)
            regex = re.compile(constraint.pattern, bits)
            for value in values:
                text = _string_form(value)
                if text is None or regex.search(text) is None:
                    yield value, f'Value {show(value)} does not match pattern "{constraint.pattern}"'
        elif isinstance(constraint, HasValueConstraint):
            if constraint.value not in values:
                yield None, f"Missing expected value {show(constraint.value)}"
        elif isinstance(constraint, MinInclusiveConstraint):
            minimum = numeric_value(constraint.value)
            for value in values:
                number = numeric_value(value)
                if number is None or number < minimum:
                    yield value, f"Value {show(value)} is not >= {constraint.value.lexical}"
        elif isinstance(constraint, OrConstraint):
            for value in values:
                if not any(self.conforms(ref, value) for ref in constraint.shapes):
                    yield value, f"Node {show(value)} does not conform to one or more shapes in sh:or"
        elif isinstance(constraint, AndConstraint):
            for value in values:
                if not all(self.conforms(ref, value) for ref in constraint.shapes):
                    yield value, f"Node {show(value)} must conform to all shapes in sh:and"
        else:
            raise TypeError(f"Not a core constraint: {constraint!r}")

    def conforms(self, shape_id: Term, node: Term) -> bool:
        """Core-level conformance of ``node`` to a referenced shape (used by sh:or/sh:and)."""
        if self.shapes is None or shape_id not in self.shapes.node_shapes:
            raise ValueError(f"Shape {shape_id} is not in the compiled shapes graph")
        shape = self.shapes.node_shapes[shape_id]
        for constraint in shape.constraints:
            if next(self.violations(constraint, node, [node]), None) is not None:
                return False
        for prop in shape.property_shapes:
            values = self.data.objects(node, prop.path)
            for constraint in prop.constraints:
                if next(self.violations(constraint, node, values, prop.path), None) is not None:
                    return False
        return True

    def check(
        self,
        constraint: CoreConstraint,
        focus: Term,
        values: list[Term],
        shape: NodeShape | PropertyShape | None = None,
    ) -> list[ValidationResult]:
        path = shape.path if isinstance(shape, PropertyShape) else None
        source = shape.id if shape is not None else ANONYMOUS_SHAPE
        severity = shape.severity if shape is not None else Severity.VIOLATION
        override = shape.messages[0] if shape is not None and shape.messages else None
        return [
            ValidationResult(
                focus_node=focus,
                severity=severity,
                source_shape=source,
                message=override or default,
                component=constraint.component,
                path=path,
                value=value,
            )
            for value, default in self.violations(constraint, focus, values, path)
        ]


def check_core_constraint(
    constraint: CoreConstraint,
    focus: Term,
    value_nodes: list[Term],
    data: Graph,
    ontology: Graph,
    *,
    shape: NodeShape | PropertyShape | None = None,
    shapes: ShapesGraph | None = None,
) -> list[ValidationResult]:
    return CoreChecker(data, ontology, shapes).check(constraint, focus, list(value_nodes), shape)
