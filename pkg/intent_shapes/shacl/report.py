"""Report serialization: nested Turtle in the sh: vocabulary, or a stable JSON document."""

from __future__ import annotations

import json

from ..rdf.graph import Graph, PrefixMap
from ..rdf.terms import RDF_TYPE, SH, XSD, BlankNode, Term, boolean_literal, string_literal, term_from_n3
from ..rdf.turtle import format_term
from .model import Severity, ValidationReport, ValidationResult

REPORT_PREFIXES = {
    "sh": SH.base,
    "xsd": XSD.base,
}
INDENT = "    "


def _result_fields(result: ValidationResult) -> list[tuple[str, Term]]:
    fields = [("sh:focusNode", result.focus_node)]
    if result.path is not None:
        fields.append(("sh:resultPath", result.path))
    if result.value is not None:
        fields.append(("sh:value", result.value))
    fields.append(("sh:resultSeverity", result.severity.iri))
    fields.append(("sh:sourceShape", result.source_shape))
    if result.source_constraint is not None:
        fields.append(("sh:sourceConstraint", result.source_constraint))
    fields.append(("sh:sourceConstraintComponent", result.component))
    fields.append(("sh:resultMessage", string_literal(result.message)))
    return fields


def _report_prefixes(prefixes: PrefixMap | None) -> PrefixMap:
    bindings = dict(prefixes.bindings) if prefixes is not None else {}
    bindings.update(REPORT_PREFIXES)
    return PrefixMap(bindings)


def report_to_turtle(report: ValidationReport, prefixes: PrefixMap | None = None) -> str:
    names = _report_prefixes(prefixes)
    lines = [f"@prefix {label}: <{ns}> ." for label, ns in sorted(names.bindings.items())]
    lines += ["", "[ a sh:ValidationReport ;", f"{INDENT}sh:conforms {'true' if report.conforms else 'false'}"]
    if report.results:
        lines[-1] += " ;"
        blocks = []
        for result in report.results:
            body = [f"{INDENT * 2}a sh:ValidationResult"]
            body += [f"{INDENT * 2}{key} {format_term(term, names)}" for key, term in _result_fields(result)]
            blocks.append(f"{INDENT}[\n" + " ;\n".join(body) + f"\n{INDENT}]")
        lines.append(f"{INDENT}sh:result " + " ,\n".join(blocks).lstrip())
    lines.append("] .")
    return "\n".join(lines) + "\n"


def report_to_graph(report: ValidationReport) -> Graph:
    graph = Graph()
    root = BlankNode("report")
    graph.add_triple(root, RDF_TYPE, SH.ValidationReport)
    graph.add_triple(root, SH.conforms, boolean_literal(report.conforms))
    for index, result in enumerate(report.results):
        node = BlankNode(f"result{index}")
        graph.add_triple(root, SH.result, node)
        graph.add_triple(node, RDF_TYPE, SH.ValidationResult)
        for key, term in _result_fields(result):
            graph.add_triple(node, SH[key.split(":", 1)[1]], term)
    return graph.freeze()


def _optional(term: Term | None) -> str | None:
    return None if term is None else str(term)


def report_to_json(report: ValidationReport) -> str:
    document = {
        "conforms": report.conforms,
        "results": [
            {
                "focusNode": str(r.focus_node),
                "resultPath": _optional(r.path),
                "value": _optional(r.value),
                "resultSeverity": r.severity.value,
                "sourceShape": str(r.source_shape),
                "sourceConstraint": _optional(r.source_constraint),
                "sourceConstraintComponent": str(r.component),
                "resultMessage": r.message,
            }
            for r in report.results
        ],
    }
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def report_from_json(text: str) -> ValidationReport:
    document = json.loads(text)

    def term(value):
        return None if value is None else term_from_n3(value)

    results = tuple(
        ValidationResult(
            focus_node=term(item["focusNode"]),
            severity=Severity(item["resultSeverity"]),
            source_shape=term(item["sourceShape"]),
            message=item["resultMessage"],
            component=term(item["sourceConstraintComponent"]),
            path=term(item["resultPath"]),
            value=term(item["value"]),
            source_constraint=term(item["sourceConstraint"]),
        )
        for item in document["results"]
    )
    return ValidationReport(results)


def serialize_report(report: ValidationReport, fmt: str = "turtle", prefixes: PrefixMap | None = None) -> str:
    if fmt == "turtle":
        return report_to_turtle(report, prefixes)
    if fmt == "json":
        return report_to_json(report)
    raise ValueError(f"Unknown report format {fmt!r}")
