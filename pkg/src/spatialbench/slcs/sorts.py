"""Static sorts for spec programs.

Three sorts: Number (scalar reals, including free parameters), BoolField
(one boolean per pixel) and ScalarField (one real per pixel). Comparisons
lift Numbers over fields pointwise; comparing two plain Numbers is rejected
because the result would be a constant predicate rather than a field.
"""

from __future__ import annotations

import enum

from .errors import SortError
from .syntax import And, Arith, Call, Cmp, Expr, Not, Number, Or, Param, SpecProgram, Var


class Sort(enum.Enum):
    NUMBER = "Number"
    BOOL_FIELD = "BoolField"
    SCALAR_FIELD = "ScalarField"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


# argument sorts -> result sort for each builtin
_SIGNATURES: dict[str, tuple[tuple[Sort, ...], Sort]] = {
    "channel": ((Sort.NUMBER,), Sort.BOOL_FIELD),
    "near": ((Sort.BOOL_FIELD,), Sort.BOOL_FIELD),
    "interior": ((Sort.BOOL_FIELD,), Sort.BOOL_FIELD),
    "touch": ((Sort.BOOL_FIELD, Sort.BOOL_FIELD), Sort.BOOL_FIELD),
    "dt": ((Sort.BOOL_FIELD,), Sort.SCALAR_FIELD),
    "gdt": ((Sort.BOOL_FIELD, Sort.BOOL_FIELD), Sort.SCALAR_FIELD),
    "minval": ((Sort.SCALAR_FIELD,), Sort.NUMBER),
}

_NUMERIC = (Sort.NUMBER, Sort.SCALAR_FIELD)


def sort_check(program: SpecProgram) -> dict[str, Sort]:
    """Check a parsed program; returns the sort of every named binding.

    The result maps let names to their inferred sorts and every free
    parameter to Number. Raises SortError on the first ill-sorted node.
    """
    env: dict[str, Sort] = {}

    def infer(expr: Expr) -> Sort:
        if isinstance(expr, Number) or isinstance(expr, Param):
            return Sort.NUMBER
        if isinstance(expr, Var):
            return env[expr.name]
        if isinstance(expr, Not):
            got = infer(expr.operand)
            if got is not Sort.BOOL_FIELD:
                raise SortError(expr.line, expr.column, "BoolField", str(got), "operand of !")
            return Sort.BOOL_FIELD
        if isinstance(expr, (And, Or)):
            op = "&" if isinstance(expr, And) else "|"
            for side in (expr.left, expr.right):
                got = infer(side)
                if got is not Sort.BOOL_FIELD:
                    raise SortError(expr.line, expr.column, "BoolField", str(got), f"operand of {op}")
            return Sort.BOOL_FIELD
        if isinstance(expr, Arith):
            lhs, rhs = infer(expr.left), infer(expr.right)
            for got in (lhs, rhs):
                if got not in _NUMERIC:
                    raise SortError(
                        expr.line, expr.column, "Number or ScalarField", str(got),
                        f"operand of {expr.op}",
                    )
            if lhs is Sort.NUMBER and rhs is Sort.NUMBER:
                return Sort.NUMBER
            return Sort.SCALAR_FIELD
        if isinstance(expr, Cmp):
            lhs, rhs = infer(expr.left), infer(expr.right)
            for got in (lhs, rhs):
                if got not in _NUMERIC:
                    raise SortError(
                        expr.line, expr.column, "Number or ScalarField", str(got),
                        f"operand of {expr.op}",
                    )
            if lhs is Sort.NUMBER and rhs is Sort.NUMBER:
                raise SortError(
                    expr.line, expr.column,
                    "at least one ScalarField operand", "Number on both sides",
                    f"constant predicate {expr.op}",
                )
            return Sort.BOOL_FIELD
        if isinstance(expr, Call):
            want_args, result = _SIGNATURES[expr.func]
            for arg, want in zip(expr.args, want_args):
                got = infer(arg)
                if got is not want:
                    raise SortError(
                        arg.line, arg.column, str(want), str(got), f"argument of {expr.func}"
                    )
            return result
        raise TypeError(f"unknown expression node {expr!r}")  # pragma: no cover

    for name, expr in program.lets:
        env[name] = infer(expr)
    for name, expr in program.saves:
        got = infer(expr)
        if got is not Sort.BOOL_FIELD:
            raise SortError(
                expr.line, expr.column, "BoolField", str(got), f'save "{name}"'
            )
    result = dict(env)
    for param in program.params:
        result[param] = Sort.NUMBER
    return result
