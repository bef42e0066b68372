"""Vocabulary coverage: which declared classes, properties and functions the
shapes constrain, and which of them the test corpus uses."""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass
from pathlib import Path

import pandas as pd

from ..errors import IntentShapesError
from ..logs import monitor
from ..rdf.graph import PrefixMap, compact
from ..rdf.terms import Iri, Term
from ..rdf.turtle import parse_turtle_file
from ..shacl.model import ShapesGraph, SparqlTargetTypeInstance, TargetClass
from ..sparql.ast import Query
from ..tio.catalog import VocabularyCatalog
from ..tio.namespaces import ARGUMENT_TYPE_CONSTRAINT, ARITY_CONSTRAINT
from .corpus import discover_cases

logger = logging.getLogger(__name__)

KINDS = ("class", "property", "function")
COLUMNS = ["module", "kind", "element", "covered", "exercised"]


def query_iris(node) -> set[Iri]:
    """Every IRI constant in a query tree."""
    found: set[Iri] = set()
    stack = [node]
    while stack:
        item = stack.pop()
        if isinstance(item, Iri):
            found.add(item)
        elif isinstance(item, (tuple, list, frozenset, set)):
            stack.extend(item)
        elif dataclasses.is_dataclass(item) and not isinstance(item, type):
            stack.extend(getattr(item, f.name) for f in dataclasses.fields(item))
    return found


def targeted_classes(shapes: ShapesGraph) -> set[Term]:
    classes: set[Term] = set()
    for shape in shapes.node_shapes.values():
        for target in shape.targets:
            if isinstance(target, TargetClass):
                classes.add(target.cls)
            elif isinstance(target, SparqlTargetTypeInstance):
                classes.update(target.binding_map().values())
    return classes


def constrained_properties(shapes: ShapesGraph) -> set[Term]:
    properties: set[Term] = {ps.path for ps in shapes.property_shapes()}
    queries: list[Query] = [c.query for c in shapes.sparql_constraints()]
    for query in queries:
        properties |= query_iris(query)
    return properties


def checked_functions(shapes: ShapesGraph, functions) -> set[Term]:
    """Functions with both an arity and an argument-type constraint.

    A constraint without a ``function`` binding applies to every function.
    """
    bound: dict[Term, set[Term]] = {ARITY_CONSTRAINT: set(), ARGUMENT_TYPE_CONSTRAINT: set()}
    for constraint in shapes.sparql_constraints():
        if constraint.source_constraint not in bound:
            continue
        function = constraint.binding_map().get("function")
        bound[constraint.source_constraint].update(functions if function is None else {function})
    return bound[ARITY_CONSTRAINT] & bound[ARGUMENT_TYPE_CONSTRAINT]


def corpus_terms(corpus: Path | None) -> set[Term]:
    terms: set[Term] = set()
    if corpus is None or not Path(corpus).is_dir():
        return terms
    for case in discover_cases(corpus):
        try:
            graph, _ = parse_turtle_file(case.path, bnode_prefix=f"{case.path.stem}_")
        except IntentShapesError as exc:
            logger.warning("Skipping %s in coverage: %s", case.name, exc)
            continue
        for triple in graph:
            terms.update(triple)
    return terms


@dataclass
class CoverageReport:
    elements: pd.DataFrame

    def summary(self) -> pd.DataFrame:
        """Covered/total per module and kind."""
        frame = self.elements
        rows = []
        for module, group in frame.groupby("module", sort=True):
            row = {"module": module}
            for kind in KINDS:
                subset = group[group["kind"] == kind]
                row[f"{kind}_covered"] = int(subset["covered"].sum())
                row[f"{kind}_total"] = len(subset)
            rows.append(row)
        return pd.DataFrame(rows)

    def percent(self, kind: str | None = None, column: str = "covered") -> float:
        frame = self.elements if kind is None else self.elements[self.elements["kind"] == kind]
        if len(frame) == 0:
            return 100.0
        return float(frame[column].sum()) / len(frame) * 100

    @property
    def overall(self) -> float:
        return self.percent()

    def uncovered(self, kind: str | None = None) -> list[str]:
        frame = self.elements[~self.elements["covered"]]
        if kind is not None:
            frame = frame[frame["kind"] == kind]
        return list(frame["element"])

    def to_csv(self, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.elements.to_csv(path, index=False)
        return path

    def render(self) -> str:
        lines = [f"{'Module':<30} {'Classes':>9} {'Properties':>11} {'Functions':>10}", "-" * 63]
        for row in self.summary().to_dict("records"):
            cells = [f"{row[f'{k}_covered']}/{row[f'{k}_total']}" for k in KINDS]
            lines.append(f"{row['module']:<30} {cells[0]:>9} {cells[1]:>11} {cells[2]:>10}")
        lines.append("-" * 63)
        for kind in KINDS:
            lines.append(f"{kind.capitalize() + ' shape coverage:':<28} {_pct(self.percent(kind))}")
        lines.append(f"{'Test coverage:':<28} {_pct(self.percent(column='exercised'))}")
        lines.append(f"{'Overall:':<28} {_pct(self.overall)}")
        for element in self.uncovered():
            lines.append(f"uncovered: {element}")
        return "\n".join(lines)


def _pct(value: float) -> str:
    return f"{round(value, 1):g}%"


@monitor
def generate_coverage(
    catalog: VocabularyCatalog,
    shapes: ShapesGraph,
    corpus: Path | None = None,
    prefixes: PrefixMap | None = None,
) -> CoverageReport:
    names = prefixes if prefixes is not None else shapes.prefixes
    functions = set(catalog.functions())
    covered = {
        "class": targeted_classes(shapes),
        "property": constrained_properties(shapes),
        "function": checked_functions(shapes, functions),
    }
    used = corpus_terms(corpus)

    rows = []
    for name, module in sorted(catalog.modules.items()):
        members = {"class": module.classes, "property": module.properties, "function": module.functions.keys()}
        for kind in KINDS:
            for element in sorted(members[kind], key=str):
                rows.append(
                    {
                        "module": name,
                        "kind": kind,
                        "element": compact(element, names),
                        "covered": element in covered[kind],
                        "exercised": element in used,
                    }
                )
    report = CoverageReport(pd.DataFrame(rows, columns=COLUMNS).astype({"covered": bool, "exercised": bool}))
    logger.info("Coverage: %.1f%% of %d vocabulary elements", report.overall, len(rows))
    return report
