"""Exception hierarchy shared by the parser, query engine, validator and harness."""

from __future__ import annotations


class IntentShapesError(Exception):
    """Base class for every error raised by intent_shapes."""


class TurtleSyntaxError(IntentShapesError):
    def __init__(self, message: str, line: int, column: int, token: str = ""):
        self.line = line
        self.column = column
        self.token = token
        where = f"line {line}, column {column}"
        if token:
            where += f", near {token!r}"
        super().__init__(f"{message} ({where})")


class UnboundPrefixError(IntentShapesError):
    def __init__(self, prefix: str, line: int = 0, column: int = 0):
        self.prefix = prefix
        self.line = line
        self.column = column
        super().__init__(f"Unbound prefix '{prefix}:' (line {line}, column {column})")


class MalformedListError(IntentShapesError):
    def __init__(self, head, reason: str):
        self.head = head
        self.reason = reason
        super().__init__(f"Malformed RDF list at {head}: {reason}")


class QuerySyntaxError(IntentShapesError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} (offset {position})")


class UnsupportedFeatureError(QuerySyntaxError):
    def __init__(self, construct: str, position: int):
        self.construct = construct
        super().__init__(f"Unsupported SPARQL construct: {construct}", position)


class ShapeLoadError(IntentShapesError):
    def __init__(self, shape_id, message: str):
        self.shape_id = shape_id
        super().__init__(f"Shape {shape_id}: {message}")


class MissingParameterError(IntentShapesError):
    def __init__(self, component, parameter: str):
        self.component = component
        self.parameter = parameter
        super().__init__(f"{component} requires parameter ${parameter}")


class ConstraintExecutionError(IntentShapesError):
    def __init__(self, shape_id, query_text: str, cause: Exception):
        self.shape_id = shape_id
        self.query_text = query_text
        self.cause = cause
        super().__init__(f"SPARQL constraint of shape {shape_id} failed: {cause}\n{query_text}")


class CorpusError(IntentShapesError):
    def __init__(self, path, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")
