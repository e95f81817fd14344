"""Small spatial-logic language over binary rasters.

Programs bind intermediate fields with `let` and emit one or more boolean
masks with `save`. See `syntax` for the grammar, `sorts` for the static
sort rules, `spatial` for operator semantics and `interp` for evaluation.
"""

from .errors import EvalError, LexError, ParseError, SortError, SpecError
from .interp import EvalContext, evaluate
from .sorts import Sort, sort_check
from .spatial import (
    connected_components,
    dt_squared,
    op_dt,
    op_gdt,
    op_interior,
    op_minval,
    op_near,
    op_touch,
)
from .syntax import (
    BUILTINS,
    And,
    Arith,
    Call,
    Cmp,
    Expr,
    Not,
    Number,
    Or,
    Param,
    SpecProgram,
    Token,
    Var,
    format_program,
    parse,
    parse_source,
    tokenize,
)

__all__ = [
    "BUILTINS",
    "And",
    "Arith",
    "Call",
    "Cmp",
    "EvalContext",
    "EvalError",
    "Expr",
    "LexError",
    "Not",
    "Number",
    "Or",
    "Param",
    "ParseError",
    "Sort",
    "SortError",
    "SpecError",
    "SpecProgram",
    "Token",
    "Var",
    "connected_components",
    "dt_squared",
    "evaluate",
    "format_program",
    "op_dt",
    "op_gdt",
    "op_interior",
    "op_minval",
    "op_near",
    "op_touch",
    "parse",
    "parse_source",
    "sort_check",
    "tokenize",
]
