from .catalog import FunctionSignature, ModuleVocabulary, VocabularyCatalog, function_signature, load_ontology
from .library import (
    CORPUS_DIR,
    GOLDEN_DIR,
    TIERS,
    load_fixture_catalog,
    load_fixture_ontology,
    load_fixture_shapes,
    resolve_shape_files,
    tier_shape_files,
)
from .namespaces import FLAGSHIP_CONSTRAINTS, MODULES, TIO, TIO_BASE, module_namespace
from .oracles import run_oracles
from .quantity import QuantityValue, parse_quantity_literal

__all__ = [
    "CORPUS_DIR",
    "FLAGSHIP_CONSTRAINTS",
    "GOLDEN_DIR",
    "MODULES",
    "TIERS",
    "TIO",
    "TIO_BASE",
    "FunctionSignature",
    "ModuleVocabulary",
    "QuantityValue",
    "VocabularyCatalog",
    "function_signature",
    "load_fixture_catalog",
    "load_fixture_ontology",
    "load_fixture_shapes",
    "load_ontology",
    "module_namespace",
    "parse_quantity_literal",
    "resolve_shape_files",
    "run_oracles",
    "tier_shape_files",
]
