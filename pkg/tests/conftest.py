from pathlib import Path

import pytest

from intent_shapes.rdf.graph import Graph
from intent_shapes.rdf.turtle import parse_turtle
from intent_shapes.shacl.loader import load_shapes
from intent_shapes.tio.library import (
    CORPUS_DIR,
    FIXTURES,
    load_fixture_catalog,
    load_fixture_ontology,
    load_fixture_shapes,
)

HEADER = """\
@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
@prefix sh: <http://www.w3.org/ns/shacl#> .
@prefix icm: <https://tio.example.org/v3.6.0/IntentCommonModel/> .
@prefix log: <https://tio.example.org/v3.6.0/LogicalOperators/> .
@prefix quan: <https://tio.example.org/v3.6.0/QuantityOntology/> .
@prefix fun: <https://tio.example.org/v3.6.0/FunctionOntology/> .
@prefix met: <https://tio.example.org/v3.6.0/MetricsAndObservations/> .
@prefix set: <https://tio.example.org/v3.6.0/SetOperators/> .
@prefix mf: <https://tio.example.org/v3.6.0/MathFunctions/> .
@prefix tio: <https://tio.example.org/shacl/> .
@prefix ex: <https://example.org/intents/> .
@prefix dim: <https://example.org/dimensions/> .
"""


def turtle(body: str, bnode_prefix: str = "t_"):
    """Parse ``body`` with the common test prefixes prepended."""
    return parse_turtle(HEADER + body, bnode_prefix=bnode_prefix)


def shapes(body: str):
    graph, prefixes = turtle(body, bnode_prefix="s_")
    return load_shapes(graph, prefixes)


# a test-only accessor whose result type is its argument's
PICK = "ex:pick a fun:Function ; fun:resultType rdfs:Resource ; fun:argumentTypes ( quan:Quantity ) ."


def picks_around_sum(depth: int) -> str:
    """``ex:cond`` comparing ``depth`` nested ex:pick calls around a sum."""
    call = '[ mf:sum ( "1Mbps"^^quan:quantity "2Mbps"^^quan:quantity ) ]'
    for _ in range(depth):
        call = f"[ ex:pick ( {call} ) ]"
    return f'ex:cond quan:atLeast ( {call} "1Mbps"^^quan:quantity ) .'


@pytest.fixture(scope="session")
def ontology() -> Graph:
    graph, _ = load_fixture_ontology()
    return graph


@pytest.fixture(scope="session")
def baseline_ontology() -> Graph:
    graph, _ = load_fixture_ontology(include_extensions=False)
    return graph


@pytest.fixture(scope="session")
def af_shapes():
    return load_fixture_shapes("af")


@pytest.fixture(scope="session")
def sparql_shapes():
    return load_fixture_shapes("sparql")


@pytest.fixture(scope="session")
def catalog():
    return load_fixture_catalog()


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS_DIR


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def empty_graph() -> Graph:
    return Graph().freeze()
