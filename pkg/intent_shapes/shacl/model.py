"""Compiled shapes: targets, constraints, components and validation results."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Union

from ..rdf.graph import Graph, PrefixMap
from ..rdf.terms import SH, Iri, Literal, Term, term_sort_key
from ..sparql.ast import Query


class Severity(Enum):
    INFO = "Info"
    WARNING = "Warning"
    VIOLATION = "Violation"

    @property
    def iri(self) -> Iri:
        return SH[self.value]

    @classmethod
    def from_iri(cls, iri: Term) -> "Severity":
        for severity in cls:
            if severity.iri == iri:
                return severity
        raise ValueError(f"Unknown severity {iri}")


# Targets


@dataclass(frozen=True, slots=True)
class TargetClass:
    cls: Term


@dataclass(frozen=True, slots=True)
class TargetNode:
    node: Term


@dataclass(frozen=True, slots=True)
class TargetSubjectsOf:
    predicate: Iri


@dataclass(frozen=True, slots=True)
class TargetObjectsOf:
    predicate: Iri


@dataclass(frozen=True, slots=True)
class SparqlTarget:
    query: Query


@dataclass(frozen=True, slots=True)
class Parameter:
    name: str
    path: Iri
    optional: bool = False


@dataclass(frozen=True, slots=True)
class SparqlTargetType:
    id: Term
    parameters: tuple[Parameter, ...]
    query: Query


@dataclass(frozen=True, slots=True)
class SparqlTargetTypeInstance:
    target_type: SparqlTargetType
    bindings: tuple[tuple[str, Term], ...] = ()

    def binding_map(self) -> dict[str, Term]:
        return dict(self.bindings)


Target = Union[TargetClass, TargetNode, TargetSubjectsOf, TargetObjectsOf, SparqlTarget, SparqlTargetTypeInstance]


# Core constraints; ``component`` names the sh:*ConstraintComponent reported in results.


@dataclass(frozen=True, slots=True)
class ClassConstraint:
    cls: Term
    component = SH.ClassConstraintComponent


@dataclass(frozen=True, slots=True)
class DatatypeConstraint:
    datatype: Iri
    component = SH.DatatypeConstraintComponent


@dataclass(frozen=True, slots=True)
class NodeKindConstraint:
    kind: Iri
    component = SH.NodeKindConstraintComponent


@dataclass(frozen=True, slots=True)
class MinCountConstraint:
    count: int
    component = SH.MinCountConstraintComponent


@dataclass(frozen=True, slots=True)
class MaxCountConstraint:
    count: int
    component = SH.MaxCountConstraintComponent


@dataclass(frozen=True, slots=True)
class InConstraint:
    values: tuple[Term, ...]
    component = SH.InConstraintComponent


@dataclass(frozen=True, slots=True)
class PatternConstraint:
    pattern: str
    flags: str = ""
    component = SH.PatternConstraintComponent


@dataclass(frozen=True, slots=True)
class HasValueConstraint:
    value: Term
    component = SH.HasValueConstraintComponent


@dataclass(frozen=True, slots=True)
class MinInclusiveConstraint:
    value: Literal
    component = SH.MinInclusiveConstraintComponent


@dataclass(frozen=True, slots=True)
class OrConstraint:
    shapes: tuple[Term, ...]
    component = SH.OrConstraintComponent


@dataclass(frozen=True, slots=True)
class AndConstraint:
    shapes: tuple[Term, ...]
    component = SH.AndConstraintComponent


CoreConstraint = Union[
    ClassConstraint,
    DatatypeConstraint,
    NodeKindConstraint,
    MinCountConstraint,
    MaxCountConstraint,
    InConstraint,
    PatternConstraint,
    HasValueConstraint,
    MinInclusiveConstraint,
    OrConstraint,
    AndConstraint,
]


# SPARQL tier


@dataclass(frozen=True, slots=True)
class SparqlConstraint:
    """A select query whose rows are violations; ``bindings`` are pre-bound next to $this."""

    owner: Term
    query: Query
    message: str | None
    source_constraint: Term
    bindings: tuple[tuple[str, Term], ...] = ()
    component: Iri = SH.SPARQLConstraintComponent

    def binding_map(self) -> dict[str, Term]:
        return dict(self.bindings)


@dataclass(frozen=True, slots=True)
class ConstraintComponent:
    id: Term
    parameters: tuple[Parameter, ...]
    validator: Query
    message: str | None = None

    @property
    def mandatory(self) -> tuple[Parameter, ...]:
        return tuple(p for p in self.parameters if not p.optional)


# Shapes


@dataclass(slots=True)
class PropertyShape:
    id: Term
    path: Iri
    constraints: list[CoreConstraint] = field(default_factory=list)
    severity: Severity = Severity.VIOLATION
    messages: list[str] = field(default_factory=list)


@dataclass(slots=True)
class NodeShape:
    id: Term
    targets: list[Target] = field(default_factory=list)
    constraints: list[CoreConstraint] = field(default_factory=list)
    property_shapes: list[PropertyShape] = field(default_factory=list)
    sparql_constraints: list[SparqlConstraint] = field(default_factory=list)
    severity: Severity = Severity.VIOLATION
    messages: list[str] = field(default_factory=list)


@dataclass(slots=True)
class ShapesGraph:
    node_shapes: dict[Term, NodeShape] = field(default_factory=dict)
    components: dict[Term, ConstraintComponent] = field(default_factory=dict)
    target_types: dict[Term, SparqlTargetType] = field(default_factory=dict)
    prefixes: PrefixMap = field(default_factory=PrefixMap)
    graph: Graph = field(default_factory=lambda: Graph().freeze())

    def __len__(self) -> int:
        return len(self.node_shapes)

    def targeted_shapes(self) -> list[NodeShape]:
        return [shape for shape in self.node_shapes.values() if shape.targets]

    def property_shapes(self) -> list[PropertyShape]:
        return [ps for shape in self.node_shapes.values() for ps in shape.property_shapes]

    def sparql_constraints(self) -> list[SparqlConstraint]:
        return [c for shape in self.node_shapes.values() for c in shape.sparql_constraints]

    def declared_constraint_ids(self) -> set[Term]:
        ids = {c.source_constraint for c in self.sparql_constraints()}
        return ids | set(self.components)


# Results


def _optional_key(term: Term | None) -> tuple:
    return (-1, "", "", "") if term is None else term_sort_key(term)


@dataclass(frozen=True, slots=True)
class ValidationResult:
    focus_node: Term
    severity: Severity
    source_shape: Term
    message: str
    component: Iri
    path: Iri | None = None
    value: Term | None = None
    source_constraint: Term | None = None

    def sort_key(self) -> tuple:
        return (
            term_sort_key(self.focus_node),
            term_sort_key(self.source_shape),
            _optional_key(self.path),
            _optional_key(self.value),
            _optional_key(self.source_constraint),
            self.message,
        )

    @property
    def constraint_id(self) -> Term:
        """sourceConstraint for SPARQL results, the core component otherwise."""
        return self.source_constraint if self.source_constraint is not None else self.component


@dataclass(frozen=True, slots=True)
class ValidationReport:
    results: tuple[ValidationResult, ...] = ()

    @property
    def conforms(self) -> bool:
        return not any(r.severity is Severity.VIOLATION for r in self.results)

    @classmethod
    def from_results(cls, results) -> "ValidationReport":
        unique = {r: None for r in results}
        return cls(tuple(sorted(unique, key=ValidationResult.sort_key)))

    def violations(self) -> list[ValidationResult]:
        return [r for r in self.results if r.severity is Severity.VIOLATION]

    def __len__(self) -> int:
        return len(self.results)
