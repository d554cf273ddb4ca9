from .parse import (
    Binary,
    Binding,
    Call,
    Field,
    Lit,
    Not,
    Rule,
    TargetSpec,
    TransformationAst,
    Var,
    parse_transformation,
)
from .engine import TraceMap, evaluate, execute

__all__ = [
    "Binary",
    "Binding",
    "Call",
    "Field",
    "Lit",
    "Not",
    "Rule",
    "TargetSpec",
    "TraceMap",
    "TransformationAst",
    "Var",
    "evaluate",
    "execute",
    "parse_transformation",
]
