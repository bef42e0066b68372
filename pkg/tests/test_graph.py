from decimal import Decimal

import pytest

from intent_shapes.errors import MalformedListError, UnboundPrefixError
from intent_shapes.rdf.graph import (
    ClassHierarchy,
    FrozenGraphError,
    Graph,
    PrefixMap,
    Triple,
    compact,
    list_to_sequence,
    types_of,
)
from intent_shapes.rdf.terms import (
    RDF_FIRST,
    RDF_NIL,
    RDF_REST,
    RDF_TYPE,
    RDFS,
    XSD,
    BlankNode,
    Iri,
    Literal,
    integer_literal,
    numeric_value,
    string_literal,
    term_from_n3,
)


def iri(name: str) -> Iri:
    return Iri(f"urn:test:{name}")


@pytest.fixture
def graph() -> Graph:
    g = Graph()
    g.add_triple(iri("a"), iri("p"), iri("b"))
    g.add_triple(iri("a"), iri("p"), iri("c"))
    g.add_triple(iri("b"), iri("q"), integer_literal(7))
    g.add_triple(iri("a"), iri("p"), iri("b"))
    return g.freeze()


class TestGraph:
    def test_duplicates_are_ignored(self, graph):
        assert len(graph) == 3

    def test_match_by_each_position(self, graph):
        assert len(graph.match(iri("a"), None, None)) == 2
        assert len(graph.match(None, iri("q"), None)) == 1
        assert graph.match(None, None, iri("c")) == [Triple(iri("a"), iri("p"), iri("c"))]
        assert graph.match(iri("a"), iri("q"), None) == []
        assert len(graph.match()) == 3

    def test_objects_keep_insertion_order(self, graph):
        assert graph.objects(iri("a"), iri("p")) == [iri("b"), iri("c")]

    def test_nodes_and_has_node(self, graph):
        assert graph.nodes() == [iri("a"), iri("b"), iri("c"), integer_literal(7)]
        assert graph.has_node(iri("c"))
        assert not graph.has_node(iri("p"))

    def test_frozen_graph_rejects_additions(self, graph):
        with pytest.raises(FrozenGraphError):
            graph.add_triple(iri("x"), iri("p"), iri("y"))

    def test_merge(self, graph):
        other = Graph([Triple(iri("z"), iri("p"), iri("a"))]).freeze()
        merged = Graph.merge(graph, other)
        assert len(merged) == 4
        assert merged.frozen

    def test_literal_subject_is_rejected(self):
        with pytest.raises(ValueError):
            Triple(string_literal("x"), iri("p"), iri("o"))


class TestLists:
    def build(self, *cells):
        g = Graph()
        for node, first, rest in cells:
            if first is not None:
                g.add_triple(node, RDF_FIRST, first)
            if rest is not None:
                g.add_triple(node, RDF_REST, rest)
        return g.freeze()

    def test_well_formed(self):
        b1, b2 = BlankNode("l1"), BlankNode("l2")
        g = self.build((b1, iri("x"), b2), (b2, iri("y"), RDF_NIL))
        assert list_to_sequence(g, b1) == [iri("x"), iri("y")]

    def test_nil_is_empty(self):
        assert list_to_sequence(Graph(), RDF_NIL) == []

    def test_cycle(self):
        b1, b2 = BlankNode("l1"), BlankNode("l2")
        g = self.build((b1, iri("x"), b2), (b2, iri("y"), b1))
        with pytest.raises(MalformedListError, match="cycle"):
            list_to_sequence(g, b1)

    def test_two_firsts(self):
        b1 = BlankNode("l1")
        g = self.build((b1, iri("x"), RDF_NIL), (b1, iri("y"), None))
        with pytest.raises(MalformedListError):
            list_to_sequence(g, b1)

    def test_missing_rest(self):
        b1 = BlankNode("l1")
        g = self.build((b1, iri("x"), None))
        with pytest.raises(MalformedListError):
            list_to_sequence(g, b1)


class TestClassHierarchy:
    def test_closure_is_reflexive_and_transitive(self):
        g = Graph()
        g.add_triple(iri("C"), RDFS.subClassOf, iri("B"))
        g.add_triple(iri("B"), RDFS.subClassOf, iri("A"))
        hierarchy = ClassHierarchy(g.freeze())
        assert hierarchy.superclasses(iri("C")) == {iri("C"), iri("B"), iri("A")}
        assert hierarchy.superclasses(iri("A")) == {iri("A")}

    def test_cycles_terminate(self):
        g = Graph()
        g.add_triple(iri("A"), RDFS.subClassOf, iri("B"))
        g.add_triple(iri("B"), RDFS.subClassOf, iri("A"))
        assert ClassHierarchy(g.freeze()).superclasses(iri("A")) == {iri("A"), iri("B")}

    def test_types_of_uses_ontology_axioms(self):
        ontology = Graph([Triple(iri("Sub"), RDFS.subClassOf, iri("Super"))]).freeze()
        data = Graph([Triple(iri("x"), RDF_TYPE, iri("Sub"))]).freeze()
        assert types_of(data, iri("x"), ontology) == {iri("Sub"), iri("Super")}
        assert types_of(data, iri("y"), ontology) == set()


class TestPrefixes:
    def test_expand_and_compact(self):
        prefixes = PrefixMap({"t": "urn:test:", "long": "urn:test:deeper/"})
        assert prefixes.expand("t:a") == iri("a")
        assert prefixes.compact(Iri("urn:test:deeper/x")) == "long:x"
        assert prefixes.compact(Iri("urn:other:x")) is None

    def test_unbound(self):
        with pytest.raises(UnboundPrefixError):
            PrefixMap().expand("nope:x")

    def test_compact_terms(self):
        prefixes = PrefixMap({"t": "urn:test:"})
        assert compact(iri("a"), prefixes) == "t:a"
        assert compact(Iri("urn:other:a"), prefixes) == "urn:other:a"
        assert compact(BlankNode("b0")) == "_:b0"
        assert compact(Literal("320kbps", iri("quantity"))) == "320kbps"


class TestTerms:
    def test_numeric_value(self):
        assert numeric_value(integer_literal(-3)) == -3
        assert numeric_value(Literal("2.5", XSD.decimal)) == Decimal("2.5")
        assert numeric_value(Literal("abc", XSD.integer)) is None
        assert numeric_value(string_literal("1")) is None

    def test_n3_forms_round_trip(self):
        for term in (iri("a"), BlankNode("x1"), string_literal('a "q"'), Literal("1", XSD.integer), string_literal("hi", "en")):
            assert term_from_n3(str(term)) == term

    def test_invalid_iri(self):
        with pytest.raises(ValueError):
            Iri("has space")
