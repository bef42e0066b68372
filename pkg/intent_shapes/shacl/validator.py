"""Graph validation: target resolution, per-focus checks and report assembly."""

from __future__ import annotations

import logging

from ..rdf.graph import Graph, PrefixMap, class_hierarchy
from ..rdf.terms import RDF_TYPE, Term, term_sort_key
from .advanced import eval_sparql_constraint, resolve_sparql_target, resolve_sparql_target_type
from .core import CoreChecker
from .model import (
    NodeShape,
    ShapesGraph,
    SparqlTarget,
    SparqlTargetTypeInstance,
    TargetClass,
    TargetNode,
    TargetObjectsOf,
    TargetSubjectsOf,
    ValidationReport,
    ValidationResult,
)

logger = logging.getLogger(__name__)


def _merged(data: Graph, ontology: Graph) -> Graph:
    if len(ontology) == 0:
        return data
    return Graph.merge(data, ontology)


def resolve_targets(shape: NodeShape, data: Graph, ontology: Graph, merged: Graph | None = None) -> set[Term]:
    """Focus nodes of ``shape``; every returned node occurs in ``data``."""
    if merged is None and any(isinstance(t, (SparqlTarget, SparqlTargetTypeInstance)) for t in shape.targets):
        merged = _merged(data, ontology)
    focus: set[Term] = set()
    hierarchy = None
    for target in shape.targets:
        if isinstance(target, TargetClass):
            hierarchy = hierarchy or class_hierarchy(data, ontology)
            for triple in data.match(None, RDF_TYPE, None):
                if target.cls in hierarchy.superclasses(triple.object):
                    focus.add(triple.subject)
        elif isinstance(target, TargetNode):
            if data.has_node(target.node):
                focus.add(target.node)
        elif isinstance(target, TargetSubjectsOf):
            focus.update(t.subject for t in data.match(None, target.predicate, None))
        elif isinstance(target, TargetObjectsOf):
            focus.update(t.object for t in data.match(None, target.predicate, None))
        elif isinstance(target, SparqlTarget):
            focus.update(n for n in resolve_sparql_target(target, merged) if data.has_node(n))
        elif isinstance(target, SparqlTargetTypeInstance):
            focus.update(n for n in resolve_sparql_target_type(target, merged) if data.has_node(n))
    return focus


def constraint_ids(shape: NodeShape) -> set[Term]:
    """Core components and SPARQL constraint ids a node shape evaluates."""
    ids: set[Term] = {c.component for c in shape.constraints}
    for prop in shape.property_shapes:
        ids.update(c.component for c in prop.constraints)
    ids.update(c.source_constraint for c in shape.sparql_constraints)
    return ids


class Validator:
    def __init__(self, shapes: ShapesGraph, ontology: Graph, prefixes: PrefixMap | None = None):
        self.shapes = shapes
        self.ontology = ontology
        self.prefixes = shapes.prefixes.merged(prefixes) if prefixes is not None else shapes.prefixes

    def validate_focus(
        self, shape: NodeShape, focus: Term, data: Graph, merged: Graph, prefixes: PrefixMap | None = None
    ) -> list[ValidationResult]:
        checker = CoreChecker(data, self.ontology, self.shapes)
        results: list[ValidationResult] = []
        for constraint in shape.constraints:
            results.extend(checker.check(constraint, focus, [focus], shape))
        for prop in shape.property_shapes:
            values = data.objects(focus, prop.path)
            for constraint in prop.constraints:
                results.extend(checker.check(constraint, focus, values, prop))
        for constraint in shape.sparql_constraints:
            results.extend(
                eval_sparql_constraint(
                    constraint,
                    focus,
                    data,
                    self.ontology,
                    merged=merged,
                    shape=shape,
                    prefixes=prefixes or self.prefixes,
                )
            )
        return results

    def validate(
        self, data: Graph, exercised: set[Term] | None = None, prefixes: PrefixMap | None = None
    ) -> ValidationReport:
        """Validate ``data``; ``exercised`` collects the ids of constraints that saw a focus node.

        ``prefixes`` are added to the shapes prefixes when rendering messages.
        """
        merged = _merged(data, self.ontology)
        names = self.prefixes.merged(prefixes) if prefixes is not None else None
        results: list[ValidationResult] = []
        for shape in self.shapes.targeted_shapes():
            focus_nodes = sorted(resolve_targets(shape, data, self.ontology, merged), key=term_sort_key)
            logger.debug("Shape %s selected %d focus nodes", shape.id, len(focus_nodes))
            if focus_nodes and exercised is not None:
                exercised.update(constraint_ids(shape))
            for focus in focus_nodes:
                results.extend(self.validate_focus(shape, focus, data, merged, names))
        report = ValidationReport.from_results(results)
        logger.debug("Validated %d triples: %d results, conforms=%s", len(data), len(report), report.conforms)
        return report


def validate_graph(
    data: Graph, shapes: ShapesGraph, ontology: Graph | None = None, *, prefixes: PrefixMap | None = None
) -> ValidationReport:
    return Validator(shapes, ontology if ontology is not None else Graph().freeze(), prefixes).validate(data)
