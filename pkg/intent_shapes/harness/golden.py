"""Golden report comparison.

A golden file stores the stable projection of a report: focus node, severity,
source constraint and message per result. Blank node labels depend on the
parser, so blank focus nodes are written as ``_:``.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

from ..rdf.graph import Graph
from ..rdf.terms import BlankNode
from ..rdf.turtle import parse_turtle_file
from ..shacl.model import ShapesGraph, ValidationReport
from ..shacl.validator import Validator

logger = logging.getLogger(__name__)

GOLDEN_KEYS = ("focusNode", "resultSeverity", "sourceConstraint", "resultMessage")
MASKED_BLANK = "_:"


def _row_key(row: dict) -> str:
    return json.dumps(row, sort_keys=True)


def project_report(report: ValidationReport) -> list[dict]:
    rows = []
    for result in report.results:
        rows.append(
            {
                "focusNode": MASKED_BLANK if isinstance(result.focus_node, BlankNode) else str(result.focus_node),
                "resultSeverity": result.severity.value,
                "sourceConstraint": str(result.constraint_id),
                "resultMessage": result.message,
            }
        )
    return sorted(rows, key=_row_key)


@dataclass
class GoldenCheck:
    golden: Path
    source: Path
    expected: list[dict]
    actual: list[dict]
    expected_conforms: bool
    actual_conforms: bool

    @property
    def matches(self) -> bool:
        return self.expected == self.actual and self.expected_conforms == self.actual_conforms

    def diff(self) -> list[str]:
        expected = {_row_key(r) for r in self.expected}
        actual = {_row_key(r) for r in self.actual}
        lines = [f"- {row}" for row in sorted(expected - actual)]
        lines += [f"+ {row}" for row in sorted(actual - expected)]
        if self.expected_conforms != self.actual_conforms:
            lines.append(f"conforms: expected {self.expected_conforms}, got {self.actual_conforms}")
        return lines


def check_golden(golden: Path, fixtures: Path, shapes: ShapesGraph, ontology: Graph) -> GoldenCheck:
    """Validate the golden file's source and compare projections."""
    document = json.loads(Path(golden).read_text(encoding="utf-8"))
    source = Path(fixtures) / document["source"]
    data, prefixes = parse_turtle_file(source, bnode_prefix=f"{source.stem}_")
    report = Validator(shapes, ontology).validate(data, prefixes=prefixes)
    expected = sorted(({k: row[k] for k in GOLDEN_KEYS} for row in document["results"]), key=_row_key)
    check = GoldenCheck(
        golden=Path(golden),
        source=source,
        expected=expected,
        actual=project_report(report),
        expected_conforms=document["conforms"],
        actual_conforms=report.conforms,
    )
    if not check.matches:
        logger.warning("Golden mismatch for %s:\n%s", Path(golden).name, "\n".join(check.diff()))
    return check


def check_golden_dir(directory: Path, fixtures: Path, shapes: ShapesGraph, ontology: Graph) -> list[GoldenCheck]:
    return [check_golden(path, fixtures, shapes, ontology) for path in sorted(Path(directory).glob("*.json"))]
