from .ast import (
    And,
    Bind,
    Compare,
    Const,
    Expr,
    QueryAst,
    Str,
    StrBefore,
    TriplePattern,
    Var,
    expr_variables,
)
from .eval import EvaluationError, ResultTable, TypeErrorSignal, eval_expr, evaluate
from .parser import (
    ProjectionError,
    QuerySyntaxError,
    UnboundPrefixError,
    parse_query,
    print_query,
)
from .results import table_to_json, term_to_json

__all__ = [
    "And",
    "Bind",
    "Compare",
    "Const",
    "EvaluationError",
    "Expr",
    "ProjectionError",
    "QueryAst",
    "QuerySyntaxError",
    "ResultTable",
    "Str",
    "StrBefore",
    "TriplePattern",
    "TypeErrorSignal",
    "UnboundPrefixError",
    "Var",
    "eval_expr",
    "evaluate",
    "expr_variables",
    "parse_query",
    "print_query",
    "table_to_json",
    "term_to_json",
]
