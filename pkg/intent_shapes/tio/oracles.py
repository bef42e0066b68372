"""Direct Python implementations of the intent constraints.

Each ``check_*`` function recomputes, for one focus node, the violations the
matching constraint in the shape library reports through SPARQL. The test
suite compares the two on every corpus file by (focus node, value).
"""

from __future__ import annotations

from itertools import chain

from ..errors import MalformedListError
from ..rdf.graph import Graph, PrefixMap, class_hierarchy, compact, list_to_sequence, types_of
from ..rdf.terms import RDF, RDF_FIRST, RDF_NIL, RDF_REST, RDF_TYPE, RDFS, XSD, BlankNode, Iri, Literal, Term
from ..shacl.model import Severity, ValidationResult
from .catalog import FunctionSignature, function_signature
from .namespaces import (
    ACTIONABLE_CONSTRAINT,
    ARGUMENT_TYPE_CONSTRAINT,
    ARITY_CONSTRAINT,
    BOOLEAN_OPERAND_CONSTRAINT,
    BOOLEAN_OPERATORS,
    EXPECTATION_OPERAND_CONSTRAINT,
    FUN,
    ICM,
    INTENT_OPERAND_CONSTRAINT,
    QUANTITY_COMPARISONS,
    QUANTITY_DATATYPE,
    UNIT_AGREEMENT_CONSTRAINT,
    VOCABULARY_CONSTRAINT,
)
from .quantity import unit_token

MAX_INFERENCE_DEPTH = 8
ORACLE_SHAPE = BlankNode("oracle")


def _result(constraint: Iri, focus: Term, message: str, value: Term | None = None) -> ValidationResult:
    return ValidationResult(
        focus_node=focus,
        severity=Severity.VIOLATION,
        source_shape=ORACLE_SHAPE,
        message=message,
        component=constraint,
        value=value,
        source_constraint=constraint,
    )


def _unique(results: list[ValidationResult]) -> list[ValidationResult]:
    return sorted(set(results), key=ValidationResult.sort_key)


def _statements(data: Graph, ontology: Graph, focus: Term):
    """Triples about ``focus`` in the union of data and ontology."""
    if ontology is data:
        return data.match(focus, None, None)
    return chain(data.match(focus, None, None), ontology.match(focus, None, None))


def _objects(data: Graph, ontology: Graph, subject: Term, predicate: Iri) -> list[Term]:
    found = data.objects(subject, predicate)
    if ontology is not data:
        found = found + [o for o in ontology.objects(subject, predicate) if o not in found]
    return found


def _members(data: Graph, head: Term) -> list[Term]:
    """Items reachable by rdf:rest*/rdf:first, in list order, tolerating broken lists."""
    try:
        return list_to_sequence(data, head)
    except MalformedListError:
        items, seen, node = [], set(), head
        while node not in seen and node != RDF_NIL:
            seen.add(node)
            items.extend(data.objects(node, RDF_FIRST))
            rests = data.objects(node, RDF_REST)
            if not rests:
                break
            node = rests[0]
        return items


def _function_calls(data: Graph, ontology: Graph, focus: Term) -> list[tuple[Iri, FunctionSignature, Term]]:
    calls = []
    for triple in data.match(focus, None, None):
        signature = function_signature(ontology, triple.predicate)
        if signature is not None:
            calls.append((triple.predicate, signature, triple.object))
    return calls


def _subclass_of(data: Graph, ontology: Graph, cls: Term, expected: Term) -> bool:
    return expected in class_hierarchy(data, ontology).superclasses(cls)


def check_function_arity(
    data: Graph, ontology: Graph, focus: Term, prefixes: PrefixMap | None = None
) -> list[ValidationResult]:
    results = []
    for function, signature, head in _function_calls(data, ontology, focus):
        if head == RDF_NIL:
            count = 0
        else:
            try:
                count = len(list_to_sequence(data, head))
            except MalformedListError as exc:
                results.append(
                    _result(ARITY_CONSTRAINT, focus, f"Function {compact(function, prefixes)} has a malformed argument list: {exc.reason}", head)
                )
                continue
        if signature.accepts_count(count):
            continue
        upper = "*" if signature.arity_max is None else str(signature.arity_max)
        results.append(
            _result(
                ARITY_CONSTRAINT,
                focus,
                f"Function {compact(function, prefixes)} called with {count} arguments, "
                f"expects {signature.arity_min} to {upper}.",
            )
        )
    return _unique(results)


def _call_signature(data: Graph, ontology: Graph, call: Term) -> tuple[FunctionSignature, Term] | None:
    calls = _function_calls(data, ontology, call)
    if not calls:
        return None
    _, signature, head = calls[0]
    return signature, head


def infer_result_type(data: Graph, ontology: Graph, call: Term, depth: int = 0) -> Term | None:
    """Result type of a nested call, or None when it cannot be inferred.

    A polymorphic accessor takes the rdfs:range of its first argument when that
    argument carries the function's first declared argument type. Otherwise the
    first argument's own inferred type passes through. At most
    ``MAX_INFERENCE_DEPTH`` calls are followed.
    """
    if depth >= MAX_INFERENCE_DEPTH:
        return None
    found = _call_signature(data, ontology, call)
    if found is None:
        return None
    signature, head = found
    if not signature.polymorphic:
        return signature.result_type
    members = _members(data, head)
    if not members or not signature.argument_types:
        return None
    first = members[0]
    if signature.argument_types[0] in types_of(data, first, ontology):
        ranges = _objects(data, ontology, first, RDFS.range)
        return ranges[0] if ranges else None
    return infer_result_type(data, ontology, first, depth + 1)


def argument_satisfies(data: Graph, ontology: Graph, value: Term, expected: Term) -> bool:
    if isinstance(value, Literal):
        return _subclass_of(data, ontology, value.datatype, expected)
    if expected in types_of(data, value, ontology):
        return True
    inferred = infer_result_type(data, ontology, value)
    return inferred is not None and _subclass_of(data, ontology, inferred, expected)


def check_argument_types(
    data: Graph, ontology: Graph, focus: Term, prefixes: PrefixMap | None = None
) -> list[ValidationResult]:
    results = []
    for function, signature, head in _function_calls(data, ontology, focus):
        arguments = _members(data, head)
        for value, expected in zip(arguments, signature.argument_types):
            if argument_satisfies(data, ontology, value, expected):
                continue
            message = f"Function {compact(function, prefixes)} expects {compact(expected, prefixes)}."
            results.append(_result(ARGUMENT_TYPE_CONSTRAINT, focus, message, value))
    return _unique(results)


def is_boolean_evaluable(data: Graph, ontology: Graph, value: Term) -> bool:
    if isinstance(value, Literal):
        return value.datatype == XSD.boolean
    if FUN.Evaluable in types_of(data, value, ontology):
        return True
    return any(
        FUN.BooleanFunction in types_of(data, t.predicate, ontology) for t in data.match(value, None, None)
    )


def _operator_members(data: Graph, focus: Term):
    for operator in BOOLEAN_OPERATORS:
        for head in data.objects(focus, operator):
            for member in _members(data, head):
                yield operator, member


def check_boolean_operands(
    data: Graph, ontology: Graph, focus: Term, prefixes: PrefixMap | None = None
) -> list[ValidationResult]:
    results = []
    for operator, member in _operator_members(data, focus):
        if not is_boolean_evaluable(data, ontology, member):
            message = f"Argument {compact(member, prefixes)} of {compact(operator, prefixes)} is not boolean-evaluable."
            results.append(_result(BOOLEAN_OPERAND_CONSTRAINT, focus, message, member))
    return _unique(results)


def check_actionable(
    data: Graph, ontology: Graph, focus: Term, prefixes: PrefixMap | None = None
) -> list[ValidationResult]:
    hierarchy = class_hierarchy(data, ontology)
    actionable = [
        cls for cls in _objects(data, ontology, focus, RDF_TYPE) if FUN.Actionable in hierarchy.superclasses(cls)
    ]
    if not actionable:
        return []
    for triple in _statements(data, ontology, focus):
        if FUN.BooleanFunction in types_of(data, triple.predicate, ontology):
            return []
    return _unique(
        [
            _result(
                ACTIONABLE_CONSTRAINT,
                focus,
                f"Actionable instance of class {compact(cls, prefixes)} missing BooleanFunction property. "
                "Add log:allOf, log:anyOf, etc.",
            )
            for cls in actionable
        ]
    )


def check_operand_hierarchy(
    data: Graph, ontology: Graph, focus: Term, prefixes: PrefixMap | None = None
) -> list[ValidationResult]:
    types = types_of(data, focus, ontology)
    results = []
    for operator, member in _operator_members(data, focus):
        member_types = types_of(data, member, ontology)
        if ICM.Intent in types and ICM.IntentOperand not in member_types:
            message = (
                f"Intent {compact(focus, prefixes)} references non-IntentOperand in {compact(operator, prefixes)}. "
                "Wrap Conditions in PropertyExpectation."
            )
            results.append(_result(INTENT_OPERAND_CONSTRAINT, focus, message, member))
        if ICM.Expectation in types and ICM.ExpectationOperand not in member_types:
            message = (
                f"Expectation {compact(focus, prefixes)} references non-ExpectationOperand in "
                f"{compact(operator, prefixes)}."
            )
            results.append(_result(EXPECTATION_OPERAND_CONSTRAINT, focus, message, member))
    return _unique(results)


def check_vocabulary_usage(
    data: Graph, ontology: Graph, focus: Term, namespace: str, prefixes: PrefixMap | None = None
) -> list[ValidationResult]:
    results = []
    for triple in _statements(data, ontology, focus):
        prop = triple.predicate
        if not prop.value.startswith(namespace):
            continue
        if RDF.Property in types_of(data, prop, ontology):
            continue
        message = f"Property {compact(prop, prefixes)} is not declared in the ontology."
        results.append(_result(VOCABULARY_CONSTRAINT, focus, message, prop))
    return _unique(results)


def check_unit_agreement(
    data: Graph, ontology: Graph, focus: Term, prefixes: PrefixMap | None = None
) -> list[ValidationResult]:
    results = []
    for comparison in QUANTITY_COMPARISONS:
        for head in data.objects(focus, comparison):
            quantities = [
                m for m in _members(data, head) if isinstance(m, Literal) and m.datatype == QUANTITY_DATATYPE
            ]
            for left in quantities:
                for right in quantities:
                    left_unit, right_unit = unit_token(left.lexical), unit_token(right.lexical)
                    if left_unit < right_unit:
                        message = (
                            f"Function {compact(comparison, prefixes)} compares quantities in different units: "
                            f"{left_unit} and {right_unit}."
                        )
                        results.append(_result(UNIT_AGREEMENT_CONSTRAINT, focus, message, right))
    return _unique(results)


def run_oracles(data: Graph, ontology: Graph, namespace: str, prefixes: PrefixMap | None = None) -> list[ValidationResult]:
    """Every oracle over every subject of ``data``."""
    results = []
    for focus in data.subject_nodes():
        results += check_function_arity(data, ontology, focus, prefixes)
        results += check_argument_types(data, ontology, focus, prefixes)
        results += check_boolean_operands(data, ontology, focus, prefixes)
        results += check_actionable(data, ontology, focus, prefixes)
        results += check_operand_hierarchy(data, ontology, focus, prefixes)
        results += check_vocabulary_usage(data, ontology, focus, namespace, prefixes)
        results += check_unit_agreement(data, ontology, focus, prefixes)
    return _unique(results)


__all__ = [
    "MAX_INFERENCE_DEPTH",
    "argument_satisfies",
    "check_actionable",
    "check_argument_types",
    "check_boolean_operands",
    "check_function_arity",
    "check_operand_hierarchy",
    "check_unit_agreement",
    "check_vocabulary_usage",
    "infer_result_type",
    "is_boolean_evaluable",
    "run_oracles",
]
