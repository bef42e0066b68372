from .advanced import (
    eval_sparql_constraint,
    instantiate_component,
    render_message,
    resolve_sparql_target_type,
)
from .core import check_core_constraint
from .loader import load_shapes, shapes_from_files
from .model import (
    NodeShape,
    PropertyShape,
    Severity,
    ShapesGraph,
    SparqlConstraint,
    ValidationReport,
    ValidationResult,
)
from .report import report_from_json, report_to_graph, serialize_report
from .validator import Validator, resolve_targets, validate_graph

__all__ = [
    "NodeShape",
    "PropertyShape",
    "Severity",
    "ShapesGraph",
    "SparqlConstraint",
    "ValidationReport",
    "ValidationResult",
    "Validator",
    "check_core_constraint",
    "eval_sparql_constraint",
    "instantiate_component",
    "load_shapes",
    "render_message",
    "report_from_json",
    "report_to_graph",
    "resolve_sparql_target_type",
    "resolve_targets",
    "serialize_report",
    "shapes_from_files",
    "validate_graph",
]
