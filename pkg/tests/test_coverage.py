import dataclasses

import pandas as pd
import pytest

from conftest import shapes
from intent_shapes.harness.coverage import (
    COLUMNS,
    checked_functions,
    generate_coverage,
    query_iris,
    targeted_classes,
)
from intent_shapes.shacl.model import SparqlTargetTypeInstance, TargetClass
from intent_shapes.sparql import parse_query
from intent_shapes.rdf.graph import PrefixMap, compact
from intent_shapes.rdf.terms import Iri
from intent_shapes.tio.namespaces import ARGUMENT_TYPE_CONSTRAINT, ARITY_CONSTRAINT, MODULES, module_namespace

ICM = module_namespace("IntentCommonModel")


@pytest.fixture(scope="module")
def coverage(catalog, af_shapes, corpus_dir):
    return generate_coverage(catalog, af_shapes, corpus_dir)


class TestFixtureCoverage:
    def test_everything_is_covered(self, coverage):
        assert coverage.uncovered() == []
        assert coverage.overall == 100.0
        for kind in ("class", "property", "function"):
            assert coverage.percent(kind) == 100.0

    def test_corpus_usage_is_reported(self, coverage):
        assert 0.0 < coverage.percent(column="exercised") <= 100.0
        assert coverage.elements.loc[coverage.elements["element"] == "icm:Intent", "exercised"].all()

    def test_summary_has_every_module(self, coverage):
        summary = coverage.summary()
        assert sorted(summary["module"]) == sorted(MODULES)
        assert (summary["class_covered"] == summary["class_total"]).all()

    def test_sparql_tier_covers_the_same_vocabulary(self, catalog, sparql_shapes, coverage):
        other = generate_coverage(catalog, sparql_shapes)
        assert other.uncovered() == []
        assert len(other.elements) == len(coverage.elements)

    def test_render(self, coverage):
        text = coverage.render()
        assert "Overall:" in text and "100%" in text
        assert "uncovered:" not in text

    def test_csv(self, coverage, tmp_path):
        path = coverage.to_csv(tmp_path / "out" / "coverage.csv")
        frame = pd.read_csv(path)
        assert list(frame.columns) == COLUMNS
        assert len(frame) == len(coverage.elements)


class TestShapeChanges:
    def test_no_shapes_covers_nothing(self, catalog, coverage):
        empty = generate_coverage(catalog, shapes(""))
        assert empty.overall == 0.0
        assert len(empty.elements) == len(coverage.elements)
        assert empty.percent(column="exercised") == 0.0

    def test_dropping_a_class_shape(self, catalog, af_shapes):
        report = Iri(ICM + "Report")
        kept = {
            name: shape
            for name, shape in af_shapes.node_shapes.items()
            if TargetClass(report) not in shape.targets
        }
        assert len(kept) == len(af_shapes.node_shapes) - 1
        reduced = generate_coverage(catalog, dataclasses.replace(af_shapes, node_shapes=kept))
        assert reduced.uncovered("class") == ["icm:Report"]

    def test_each_node_shape_only_uncovers_its_own_cells(self, catalog, af_shapes, coverage):
        full = _covered_cells(coverage)
        names = af_shapes.prefixes
        functions = set(catalog.functions())
        exactly_one = 0
        for shape_id, shape in af_shapes.node_shapes.items():
            kept = {name: other for name, other in af_shapes.node_shapes.items() if name != shape_id}
            reduced_shapes = dataclasses.replace(af_shapes, node_shapes=kept)
            flipped = full - _covered_cells(generate_coverage(catalog, reduced_shapes))
            assert flipped <= _own_cells(shape, names, functions), shape_id
            still_targeted = targeted_classes(reduced_shapes)
            for target in shape.targets:
                cell = ("class", compact(target.cls, names)) if isinstance(target, TargetClass) else None
                if cell in full and target.cls not in still_targeted:
                    assert cell in flipped
            exactly_one += len(flipped) == 1
        assert exactly_one > 0

    def test_each_property_shape_uncovers_at_most_its_path(self, catalog, af_shapes, coverage):
        full = _covered_cells(coverage)
        names = af_shapes.prefixes
        referenced = set().union(*(query_iris(c.query) for c in af_shapes.sparql_constraints()))
        for owner_id, owner in af_shapes.node_shapes.items():
            for ps in owner.property_shapes:
                reduced_owner = dataclasses.replace(
                    owner, property_shapes=[p for p in owner.property_shapes if p is not ps]
                )
                reduced = dataclasses.replace(af_shapes, node_shapes={**af_shapes.node_shapes, owner_id: reduced_owner})
                flipped = full - _covered_cells(generate_coverage(catalog, reduced))
                cell = ("property", compact(ps.path, names))
                elsewhere = referenced | {p.path for p in reduced.property_shapes()}
                expected = {cell} if cell in full and ps.path not in elsewhere else set()
                assert flipped == expected, cell


def _covered_cells(report) -> set[tuple[str, str]]:
    frame = report.elements[report.elements["covered"]]
    return set(zip(frame["kind"], frame["element"]))


def _own_cells(shape, names, functions) -> set[tuple[str, str]]:
    """Cells a node shape can cover by itself: its classes, paths, query IRIs and checked functions."""
    cells = set()
    for target in shape.targets:
        if isinstance(target, TargetClass):
            cells.add(("class", compact(target.cls, names)))
        elif isinstance(target, SparqlTargetTypeInstance):
            cells.update(("class", compact(value, names)) for value in target.binding_map().values())
    cells.update(("property", compact(ps.path, names)) for ps in shape.property_shapes)
    for constraint in shape.sparql_constraints:
        cells.update(("property", compact(iri, names)) for iri in query_iris(constraint.query))
        if constraint.source_constraint in (ARITY_CONSTRAINT, ARGUMENT_TYPE_CONSTRAINT):
            function = constraint.binding_map().get("function")
            checked = functions if function is None else {function}
            cells.update(("function", compact(f, names)) for f in checked)
    return cells


def test_query_iris():
    query = parse_query(
        "SELECT $this WHERE { $this ex:p/ex:q ?o FILTER(?o != ex:r) }", PrefixMap({"ex": "urn:x:"})
    )
    assert {Iri("urn:x:p"), Iri("urn:x:q"), Iri("urn:x:r")} <= query_iris(query)


def test_targeted_classes(af_shapes):
    classes = targeted_classes(af_shapes)
    assert Iri(ICM + "Intent") in classes
    assert Iri(ICM + "Expectation") in classes


def test_unbound_checks_apply_to_every_function(catalog, sparql_shapes):
    functions = set(catalog.functions())
    assert checked_functions(sparql_shapes, functions) == functions
