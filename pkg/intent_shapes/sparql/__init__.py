from .ast import Query, Var
from .evaluator import ERROR, ErrorValue, Solution, eval_expr, eval_path, evaluate
from .parser import parse_query

__all__ = [
    "ERROR",
    "ErrorValue",
    "Query",
    "Solution",
    "Var",
    "eval_expr",
    "eval_path",
    "evaluate",
    "parse_query",
]
