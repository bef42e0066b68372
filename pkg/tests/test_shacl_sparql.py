import pytest

from conftest import shapes, turtle
from intent_shapes.errors import MissingParameterError, ShapeLoadError
from intent_shapes.rdf.graph import PrefixMap
from intent_shapes.rdf.isomorphism import isomorphic
from intent_shapes.rdf.terms import SH, Iri, integer_literal
from intent_shapes.rdf.turtle import parse_turtle
from intent_shapes.shacl import (
    Validator,
    eval_sparql_constraint,
    instantiate_component,
    render_message,
    report_from_json,
    report_to_graph,
    serialize_report,
    validate_graph,
)

EX = "https://example.org/intents/"

COMPONENT = '''
ex:MaxItemsComponent a sh:ConstraintComponent ;
    sh:parameter [ sh:path ex:maxItems ] ;
    sh:validator [
        a sh:SPARQLSelectValidator ;
        sh:message "{$this} has {?n} items, more than {$maxItems}" ;
        sh:select """
            SELECT $this ?n WHERE {
                { SELECT $this (COUNT(?item) AS ?n) WHERE { $this ex:item ?item } GROUP BY $this }
                FILTER(?n > $maxItems)
            }
        """
    ] .
'''

TARGET_TYPE = '''
ex:InstancesOf a sh:SPARQLTargetType ;
    sh:parameter [ sh:path ex:type ] ;
    sh:select "SELECT ?this WHERE { ?this a $type }" .
'''


def ex(name: str) -> Iri:
    return Iri(EX + name)


def data(body: str):
    graph, _ = turtle(body)
    return graph


class TestSparqlConstraints:
    def test_rows_become_results(self):
        graph = shapes(
            """
            ex:S sh:targetClass ex:Bag ;
                sh:sparql [
                    sh:message "{$this} holds {?value}" ;
                    sh:select "SELECT $this ?value WHERE { $this ex:item ?value . ?value a ex:Forbidden }"
                ] .
            """
        )
        report = validate_graph(data("ex:b a ex:Bag ; ex:item ex:x, ex:y . ex:y a ex:Forbidden ."), graph)
        assert len(report) == 1
        result = report.results[0]
        assert result.focus_node == ex("b")
        assert result.value == ex("y")
        assert result.message == "ex:b holds ex:y"
        assert result.component == SH.SPARQLConstraintComponent
        assert result.source_constraint is not None

    def test_empty_result_means_conforming(self):
        graph = shapes('ex:S sh:targetClass ex:Bag ; sh:sparql [ sh:select "SELECT $this WHERE { $this ex:broken true }" ] .')
        assert validate_graph(data("ex:b a ex:Bag ."), graph).conforms

    def test_default_message_names_constraint_and_focus(self):
        graph = shapes('ex:S sh:targetClass ex:Bag ; sh:sparql [ sh:select "SELECT $this WHERE { $this ex:broken true }" ] .')
        report = validate_graph(data("ex:b a ex:Bag ; ex:broken true ."), graph)
        assert report.results[0].message.startswith("Constraint ")
        assert report.results[0].message.endswith("is violated by ex:b")

    def test_ontology_is_visible_to_queries(self):
        graph = shapes(
            """
            ex:S sh:targetClass ex:Bag ;
                sh:sparql [ sh:select "SELECT $this WHERE { $this ex:kind ?k . FILTER NOT EXISTS { ?k a ex:Kind } }" ] .
            """
        )
        ontology = data("ex:Known a ex:Kind .")
        assert validate_graph(data("ex:b a ex:Bag ; ex:kind ex:Known ."), graph, ontology).conforms
        assert not validate_graph(data("ex:b a ex:Bag ; ex:kind ex:Unknown ."), graph, ontology).conforms

    def test_invalid_query_fails_the_load(self):
        with pytest.raises(ShapeLoadError, match="invalid query"):
            shapes('ex:S sh:targetClass ex:Bag ; sh:sparql [ sh:select "SELECT * WHERE { ?s ?p ?o }" ] .')

    @pytest.mark.parametrize(
        "body",
        [
            'ex:S sh:targetClass ex:Bag ; sh:sparql [ sh:select "SELECT ?k WHERE { $this ex:kind ?k }" ] .',
            'ex:S sh:target [ a sh:SPARQLTarget ; sh:select "SELECT ?b WHERE { ?b a ex:Bag }" ] ; sh:class ex:Bag .',
        ],
    )
    def test_select_must_project_this(self, body):
        with pytest.raises(ShapeLoadError, match=r"must project \$this"):
            shapes(body)

    def test_component_validator_must_project_this(self):
        component = COMPONENT.replace("SELECT $this", "SELECT", 1)
        with pytest.raises(ShapeLoadError, match=r"must project \$this"):
            shapes(component + "ex:S sh:targetClass ex:Bag ; ex:maxItems 2 .")

    def test_literal_required_for_select(self):
        with pytest.raises(ShapeLoadError):
            shapes("ex:S sh:targetClass ex:Bag ; sh:sparql [ sh:select ex:notAString ] .")


class TestComponents:
    def test_component_instance_per_shape(self):
        graph = shapes(COMPONENT + "ex:S sh:targetClass ex:Bag ; ex:maxItems 2 .")
        assert len(graph.sparql_constraints()) == 1
        report = validate_graph(data("ex:b a ex:Bag ; ex:item ex:x, ex:y, ex:z ."), graph)
        assert len(report) == 1
        result = report.results[0]
        assert result.message == "ex:b has 3 items, more than 2"
        assert result.component == ex("MaxItemsComponent")
        assert result.constraint_id == ex("MaxItemsComponent")

    def test_within_limit(self):
        graph = shapes(COMPONENT + "ex:S sh:targetClass ex:Bag ; ex:maxItems 2 .")
        assert validate_graph(data("ex:b a ex:Bag ; ex:item ex:x ."), graph).conforms

    def test_shape_without_parameters_has_no_instance(self):
        graph = shapes(COMPONENT + "ex:S sh:targetClass ex:Bag ; sh:class ex:Bag .")
        assert graph.sparql_constraints() == []
        assert ex("MaxItemsComponent") in graph.declared_constraint_ids()

    def test_shape_message_overrides_component_message(self):
        graph = shapes(COMPONENT + 'ex:S sh:targetClass ex:Bag ; ex:maxItems 0 ; sh:message "too big: {?n}" .')
        report = validate_graph(data("ex:b a ex:Bag ; ex:item ex:x ."), graph)
        assert report.results[0].message == "too big: 1"

    def test_missing_mandatory_parameter(self):
        component = """
            ex:RangeComponent a sh:ConstraintComponent ;
                sh:parameter [ sh:path ex:low ], [ sh:path ex:high ] ;
                sh:validator [ sh:select "SELECT $this WHERE { $this ex:v ?v FILTER(?v < $low || ?v > $high) }" ] .
        """
        with pytest.raises(MissingParameterError) as info:
            shapes(component + "ex:S sh:targetClass ex:Bag ; ex:low 1 .")
        assert info.value.parameter == "high"

    def test_optional_parameter_may_be_absent(self):
        component = """
            ex:RangeComponent a sh:ConstraintComponent ;
                sh:parameter [ sh:path ex:low ], [ sh:path ex:high ; sh:optional true ] ;
                sh:validator [ sh:select "SELECT $this WHERE { $this ex:v ?v FILTER(?v < $low) }" ] .
        """
        graph = shapes(component + "ex:S sh:targetClass ex:Bag ; ex:low 1 .")
        assert not validate_graph(data("ex:b a ex:Bag ; ex:v 0 ."), graph).conforms

    def test_instantiate_component(self):
        graph = shapes(COMPONENT)
        component = graph.components[ex("MaxItemsComponent")]
        with pytest.raises(MissingParameterError):
            instantiate_component(component, {})
        constraint = instantiate_component(component, {"maxItems": integer_literal(1), "unused": ex("x")})
        assert constraint.bindings == (("maxItems", integer_literal(1)),)
        results = eval_sparql_constraint(
            constraint, ex("b"), data("ex:b ex:item ex:x, ex:y ."), prefixes=graph.prefixes
        )
        assert [r.message for r in results] == ["ex:b has 2 items, more than 1"]


class TestTargetTypes:
    def test_parameterized_target(self):
        graph = shapes(
            TARGET_TYPE
            + 'ex:S sh:target [ a ex:InstancesOf ; ex:type ex:Bag ] ; sh:property [ sh:path ex:item ; sh:minCount 1 ] .'
        )
        report = validate_graph(data("ex:b a ex:Bag . ex:c a ex:Box ."), graph)
        assert [r.focus_node for r in report.results] == [ex("b")]

    def test_missing_target_parameter(self):
        with pytest.raises(MissingParameterError):
            shapes(TARGET_TYPE + "ex:S sh:target [ a ex:InstancesOf ] ; sh:class ex:Bag .")

    def test_plain_sparql_target(self):
        graph = shapes(
            'ex:S sh:target [ sh:select "SELECT ?this WHERE { ?this ex:flag true }" ] ; sh:class ex:Flagged .'
        )
        report = validate_graph(data("ex:a ex:flag true . ex:b ex:flag false ."), graph)
        assert [r.focus_node for r in report.results] == [ex("a")]

    def test_unknown_target(self):
        with pytest.raises(ShapeLoadError):
            shapes("ex:S sh:target [ a ex:NotATargetType ] ; sh:class ex:Bag .")

    def test_targets_outside_data_are_dropped(self):
        graph = shapes(
            TARGET_TYPE
            + 'ex:S sh:target [ a ex:InstancesOf ; ex:type ex:Bag ] ; sh:property [ sh:path ex:item ; sh:minCount 1 ] .'
        )
        ontology = data("ex:onlyInOntology a ex:Bag .")
        assert validate_graph(data("ex:c a ex:Box ."), graph, ontology).conforms


class TestMessages:
    def test_render_message(self):
        prefixes = PrefixMap({"ex": EX})
        row = {"this": ex("a"), "n": integer_literal(4)}
        assert render_message("{$this} has {?n}", row, prefixes) == "ex:a has 4"
        assert render_message("{?missing} stays", row, prefixes) == "{?missing} stays"

    def test_data_prefixes_extend_rendering(self):
        graph = shapes(
            'ex:S sh:targetClass ex:Bag ; sh:sparql [ sh:message "bad {?value}" ; '
            'sh:select "SELECT $this ?value WHERE { $this ex:item ?value }" ] .'
        )
        data_graph, data_prefixes = parse_turtle(
            f"@prefix ex: <{EX}> . @prefix loc: <urn:local:> . ex:b a ex:Bag ; ex:item loc:thing ."
        )
        plain = Validator(graph, data("")).validate(data_graph)
        assert plain.results[0].message == "bad urn:local:thing"
        named = Validator(graph, data("")).validate(data_graph, prefixes=data_prefixes)
        assert named.results[0].message == "bad loc:thing"


class TestReportSerialization:
    @pytest.fixture
    def report(self):
        graph = shapes(
            COMPONENT
            + """
            ex:S sh:targetClass ex:Bag ; ex:maxItems 1 ;
                sh:property [ sh:path ex:label ; sh:minCount 1 ; sh:severity sh:Warning ] ;
                sh:property [ sh:path ex:item ; sh:nodeKind sh:IRI ] .
            """
        )
        return validate_graph(data('ex:b a ex:Bag ; ex:item ex:x, "quoted \\"text\\"" .'), graph), graph.prefixes

    def test_json_round_trip(self, report):
        report, _ = report
        assert len(report) == 3
        again = report_from_json(serialize_report(report, "json"))
        assert again == report

    def test_turtle_matches_report_graph(self, report):
        report, prefixes = report
        text = serialize_report(report, "turtle", prefixes)
        parsed, _ = parse_turtle(text, bnode_prefix="r_")
        assert isomorphic(parsed, report_to_graph(report))
        assert "sh:conforms false" in text

    def test_empty_report(self):
        text = serialize_report(validate_graph(data(""), shapes("")), "turtle")
        assert "sh:conforms true" in text
        assert "sh:result" not in text

    def test_unknown_format(self, report):
        report, _ = report
        with pytest.raises(ValueError):
            serialize_report(report, "xml")
