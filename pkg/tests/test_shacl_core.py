import pytest

from conftest import shapes, turtle
from intent_shapes.errors import ShapeLoadError
from intent_shapes.rdf.graph import Graph
from intent_shapes.rdf.terms import SH, XSD, Iri, Literal
from intent_shapes.shacl import Severity, check_core_constraint, validate_graph
from intent_shapes.shacl.model import MinCountConstraint, TargetClass

EX = "https://example.org/intents/"


def ex(name: str) -> Iri:
    return Iri(EX + name)


def run(shapes_body: str, data_body: str, ontology: Graph | None = None):
    data, _ = turtle(data_body)
    return validate_graph(data, shapes(shapes_body), ontology)


def components(report):
    return sorted(r.component.value.rsplit("#", 1)[1] for r in report.results)


class TestTargets:
    SHAPE = "ex:S a sh:NodeShape ; {target} ; sh:property [ sh:path ex:p ; sh:minCount 1 ] ."

    def test_target_class_follows_subclasses(self):
        ontology, _ = turtle("ex:Sub rdfs:subClassOf ex:T .")
        report = run(self.SHAPE.format(target="sh:targetClass ex:T"), "ex:a a ex:Sub . ex:b a ex:Other .", ontology)
        assert [r.focus_node for r in report.results] == [ex("a")]

    def test_target_node_must_occur_in_data(self):
        shape = self.SHAPE.format(target="sh:targetNode ex:a, ex:ghost")
        report = run(shape, "ex:a ex:q 1 .")
        assert [r.focus_node for r in report.results] == [ex("a")]

    def test_subjects_and_objects_of(self):
        report = run(self.SHAPE.format(target="sh:targetSubjectsOf ex:q"), "ex:a ex:q ex:b .")
        assert [r.focus_node for r in report.results] == [ex("a")]
        report = run(self.SHAPE.format(target="sh:targetObjectsOf ex:q"), "ex:a ex:q ex:b .")
        assert [r.focus_node for r in report.results] == [ex("b")]

    def test_implicit_class_target(self):
        graph = shapes("ex:T a rdfs:Class, sh:NodeShape ; sh:property [ sh:path ex:p ; sh:minCount 1 ] .")
        assert graph.node_shapes[ex("T")].targets == [TargetClass(ex("T"))]

    def test_untargeted_shapes_do_not_run(self):
        report = run("ex:S a sh:NodeShape ; sh:property [ sh:path ex:p ; sh:minCount 1 ] .", "ex:a a ex:T .")
        assert report.conforms and len(report) == 0


class TestConstraints:
    def test_class(self):
        ontology, _ = turtle("ex:Sub rdfs:subClassOf ex:T .")
        shape = "ex:S sh:targetNode ex:a ; sh:property [ sh:path ex:p ; sh:class ex:T ] ."
        report = run(shape, "ex:a ex:p ex:b, ex:c . ex:b a ex:Sub .", ontology)
        assert [r.value for r in report.results] == [ex("c")]
        assert report.results[0].message == "Value ex:c does not have class ex:T"
        assert report.results[0].path == ex("p")

    def test_datatype_rejects_ill_formed_lexicals(self):
        shape = "ex:S sh:targetNode ex:a ; sh:property [ sh:path ex:n ; sh:datatype xsd:integer ] ."
        report = run(shape, 'ex:a ex:n 4, "x"^^xsd:integer, "4" .')
        assert len(report) == 2
        assert {r.value for r in report.results} == {
            Literal("x", XSD.integer),
            Literal("4", XSD.string),
        }

    def test_node_kind(self):
        shape = "ex:S sh:targetNode ex:a ; sh:property [ sh:path ex:p ; sh:nodeKind sh:BlankNodeOrIRI ] ."
        report = run(shape, 'ex:a ex:p ex:b, [ ex:q 1 ], "lit" .')
        assert [r.value for r in report.results] == [Literal("lit", XSD.string)]

    def test_min_and_max_count(self):
        shape = "ex:S sh:targetNode ex:a ; sh:property [ sh:path ex:p ; sh:minCount 2 ; sh:maxCount 1 ] ."
        report = run(shape, "ex:a ex:p ex:b .")
        assert components(report) == ["MinCountConstraintComponent"]
        assert report.results[0].message == "Less than 2 values on ex:a->ex:p"
        report = run(shape, "ex:a ex:p ex:b, ex:c, ex:d .")
        assert components(report) == ["MaxCountConstraintComponent"]
        assert report.results[0].value is None

    def test_in(self):
        shape = "ex:S sh:targetNode ex:a ; sh:property [ sh:path ex:p ; sh:in ( ex:x ex:y ) ] ."
        report = run(shape, "ex:a ex:p ex:x, ex:z .")
        assert len(report) == 1
        assert report.results[0].message == "Value ex:z not in list [ex:x, ex:y]"

    def test_pattern_with_flags(self):
        shape = (
            'ex:S sh:targetNode ex:a ; sh:property [ sh:path ex:u ; sh:pattern "^[0-9]+KBPS$" ; sh:flags "i" ] .'
        )
        report = run(shape, 'ex:a ex:u "320kbps", "fast", [ ex:q 1 ] .')
        assert len(report) == 2
        assert all(r.component == SH.PatternConstraintComponent for r in report.results)

    def test_has_value(self):
        shape = "ex:S sh:targetNode ex:a ; sh:property [ sh:path ex:p ; sh:hasValue ex:x ] ."
        assert run(shape, "ex:a ex:p ex:x, ex:y .").conforms
        report = run(shape, "ex:a ex:p ex:y .")
        assert report.results[0].message == "Missing expected value ex:x"

    def test_min_inclusive(self):
        shape = "ex:S sh:targetNode ex:a ; sh:property [ sh:path ex:n ; sh:minInclusive 0 ] ."
        report = run(shape, 'ex:a ex:n 0, 2.5, -1, "3" .')
        assert {r.value for r in report.results} == {Literal("-1", XSD.integer), Literal("3", XSD.string)}

    def test_or(self):
        shape = """
            ex:Int a sh:NodeShape ; sh:datatype xsd:integer .
            ex:Str a sh:NodeShape ; sh:datatype xsd:string .
            ex:S sh:targetNode ex:a ; sh:property [ sh:path ex:v ; sh:or ( ex:Int ex:Str ) ] .
        """
        report = run(shape, 'ex:a ex:v 1, "one", true .')
        assert [r.value for r in report.results] == [Literal("true", XSD.boolean)]
        assert report.results[0].component == SH.OrConstraintComponent

    def test_and_checks_referenced_property_shapes(self):
        shape = """
            ex:HasName a sh:NodeShape ; sh:property [ sh:path ex:name ; sh:minCount 1 ] .
            ex:IsIri a sh:NodeShape ; sh:nodeKind sh:IRI .
            ex:S sh:targetNode ex:a ; sh:property [ sh:path ex:p ; sh:and ( ex:HasName ex:IsIri ) ] .
        """
        report = run(shape, 'ex:a ex:p ex:b, ex:c . ex:b ex:name "b" .')
        assert [r.value for r in report.results] == [ex("c")]

    def test_node_level_constraints_use_focus_as_value(self):
        report = run("ex:S sh:targetNode ex:a ; sh:class ex:T .", "ex:a ex:p 1 .")
        assert [r.value for r in report.results] == [ex("a")]
        assert report.results[0].path is None


class TestResults:
    def test_severity_and_conformance(self):
        shape = "ex:S sh:targetNode ex:a ; sh:property [ sh:path ex:p ; sh:minCount 1 ; sh:severity sh:Warning ] ."
        report = run(shape, "ex:a ex:q 1 .")
        assert report.conforms
        assert report.results[0].severity is Severity.WARNING
        assert report.violations() == []

    def test_message_override(self):
        shape = 'ex:S sh:targetNode ex:a ; sh:property [ sh:path ex:p ; sh:minCount 1 ; sh:message "needs ex:p" ] .'
        report = run(shape, "ex:a ex:q 1 .")
        assert report.results[0].message == "needs ex:p"

    def test_duplicate_results_collapse_and_order_is_stable(self):
        shape = """
            ex:S sh:targetNode ex:b, ex:a ; sh:targetSubjectsOf ex:q ;
                sh:property [ sh:path ex:p ; sh:minCount 1 ] .
        """
        report = run(shape, "ex:a ex:q 1 . ex:b ex:q 2 .")
        assert [r.focus_node for r in report.results] == [ex("a"), ex("b")]

    def test_check_core_constraint_directly(self, empty_graph):
        results = check_core_constraint(MinCountConstraint(1), ex("a"), [], empty_graph, empty_graph)
        assert len(results) == 1
        assert results[0].severity is Severity.VIOLATION
        assert results[0].component == SH.MinCountConstraintComponent


class TestShapeLoading:
    @pytest.mark.parametrize(
        "body",
        [
            "ex:S sh:targetNode ex:a ; sh:property [ sh:path ex:p ; sh:maxLength 3 ] .",
            "ex:S sh:targetNode ex:a ; sh:closed true .",
            'ex:S sh:targetNode ex:a ; sh:property [ sh:path ex:p ; sh:minCount "one" ] .',
            "ex:S sh:targetNode ex:a ; sh:property [ sh:path ex:p ; sh:minCount -1 ] .",
            "ex:S sh:targetNode ex:a ; sh:property [ sh:path ex:p ; sh:nodeKind ex:Thing ] .",
            "ex:S sh:targetNode ex:a ; sh:property [ sh:path ( ex:p ex:q ) ] .",
            'ex:S sh:targetNode ex:a ; sh:property [ sh:path ex:p ; sh:pattern "(" ] .',
            r'ex:S sh:targetNode ex:a ; sh:property [ sh:path ex:p ; sh:pattern "^(a)\\1$" ] .',
            'ex:S sh:targetNode ex:a ; sh:property [ sh:path ex:p ; sh:pattern "^(?P<x>a)(?P=x)$" ] .',
            "ex:S sh:targetNode ex:a ; sh:severity ex:Fatal .",
            "ex:S a sh:NodeShape ; sh:or ( ex:S ) .",
        ],
    )
    def test_rejected(self, body):
        with pytest.raises(ShapeLoadError):
            shapes(body)

    def test_backreference_is_named_in_the_error(self):
        with pytest.raises(ShapeLoadError, match="backreferences"):
            shapes(r'ex:S sh:targetNode ex:a ; sh:property [ sh:path ex:p ; sh:pattern "(k)\\1" ] .')

    def test_escaped_backslash_and_class_digits_are_not_backreferences(self):
        body = r'ex:S sh:targetNode ex:a ; sh:property [ sh:path ex:p ; sh:pattern "^a\\\\1[\\1-9]$" ] .'
        assert len(shapes(body)) == 1

    def test_error_names_the_shape(self):
        with pytest.raises(ShapeLoadError, match="ex:S"):
            shapes("ex:S sh:targetNode ex:a ; sh:closed true .")

    def test_annotations_are_accepted(self):
        graph = shapes('ex:S sh:targetNode ex:a ; sh:name "s" ; sh:description "d" ; sh:class ex:T .')
        assert len(graph) == 1
