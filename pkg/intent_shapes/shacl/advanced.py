"""SPARQL-based constraints, parameterized components, target types and messages."""

from __future__ import annotations

import logging
import re

from ..errors import ConstraintExecutionError, MissingParameterError
from ..rdf.graph import Graph, PrefixMap, compact
from ..rdf.terms import Iri, Term
from ..sparql.evaluator import Solution, evaluate
from .model import (
    ConstraintComponent,
    NodeShape,
    Severity,
    SparqlConstraint,
    SparqlTarget,
    SparqlTargetTypeInstance,
    ValidationResult,
)

logger = logging.getLogger(__name__)

_PLACEHOLDER_RE = re.compile(r"\{([$?])([A-Za-z_][A-Za-z0-9_]*)\}")


def render_message(template: str, row: Solution, prefixes: PrefixMap | None = None) -> str:
    def substitute(match: re.Match) -> str:
        term = row.get(match.group(2))
        return match.group(0) if term is None else compact(term, prefixes)

    return _PLACEHOLDER_RE.sub(substitute, template)


def instantiate_component(
    component: ConstraintComponent, bindings: dict[str, Term], owner: Term | None = None
) -> SparqlConstraint:
    for param in component.mandatory:
        if param.name not in bindings:
            raise MissingParameterError(component.id, param.name)
    known = {p.name for p in component.parameters}
    bound = tuple(sorted((name, term) for name, term in bindings.items() if name in known))
    return SparqlConstraint(
        owner if owner is not None else component.id,
        component.validator,
        component.message,
        component.id,
        bound,
        component.id,
    )


def _run(query, graph: Graph, bindings: Solution, owner: Term) -> list[Solution]:
    try:
        return evaluate(query, graph, bindings)
    except Exception as exc:
        raise ConstraintExecutionError(owner, query.text, exc) from exc


def resolve_sparql_target_type(instance: SparqlTargetTypeInstance, data: Graph) -> set[Term]:
    bindings = instance.binding_map()
    for param in instance.target_type.parameters:
        if not param.optional and param.name not in bindings:
            raise MissingParameterError(instance.target_type.id, param.name)
    rows = _run(instance.target_type.query, data, bindings, instance.target_type.id)
    return {row["this"] for row in rows if "this" in row}


def resolve_sparql_target(target: SparqlTarget, data: Graph) -> set[Term]:
    rows = _run(target.query, data, {}, Iri("urn:x-sparql-target"))
    return {row["this"] for row in rows if "this" in row}


def eval_sparql_constraint(
    constraint: SparqlConstraint,
    focus: Term,
    data: Graph,
    ontology: Graph | None = None,
    *,
    merged: Graph | None = None,
    shape: NodeShape | None = None,
    prefixes: PrefixMap | None = None,
) -> list[ValidationResult]:
    """Rows of the constraint's select with $this pre-bound; each row is one result."""
    graph = merged
    if graph is None:
        graph = Graph.merge(data, ontology) if ontology is not None else data
    bindings = constraint.binding_map()
    bindings["this"] = focus
    rows = _run(constraint.query, graph, bindings, constraint.owner)
    if not rows:
        return []
    severity = shape.severity if shape is not None else Severity.VIOLATION
    template = constraint.message
    if shape is not None and shape.messages and constraint.message is None:
        template = shape.messages[0]
    if template is None:
        template = f"Constraint {compact(constraint.source_constraint, prefixes)} is violated by {{$this}}"
    results = []
    for row in rows:
        context = dict(bindings)
        context.update(row)
        path = row.get("path")
        results.append(
            ValidationResult(
                focus_node=row.get("this", focus),
                severity=severity,
                source_shape=constraint.owner,
                message=render_message(template, context, prefixes),
                component=constraint.component,
                path=path if isinstance(path, Iri) else None,
                value=row.get("value"),
                source_constraint=constraint.source_constraint,
            )
        )
    logger.debug("%s produced %d rows for %s", constraint.source_constraint, len(rows), focus)
    return results
