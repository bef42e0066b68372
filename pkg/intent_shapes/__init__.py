"""SHACL validation engine, intent-ontology shape library and corpus harness."""

__version__ = "0.1.0"
