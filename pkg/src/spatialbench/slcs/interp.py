"""Evaluator for sort-checked spec programs."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..core import BitMask, ScalarField
from .errors import EvalError
from .spatial import op_dt, op_gdt, op_interior, op_minval, op_near, op_touch
from .syntax import And, Arith, Call, Cmp, Expr, Not, Number, Or, Param, SpecProgram, Var

Value = float | BitMask | ScalarField


@dataclass(frozen=True)
class EvalContext:
    """Inputs for one evaluation: channel masks, parameter bindings, adjacency."""

    channels: tuple[BitMask, ...]
    params: dict[str, float] = field(default_factory=dict)
    adjacency: int = 4

    def __post_init__(self):
        if len(self.channels) == 0:
            raise ValueError("EvalContext needs at least one channel")
        shape = self.channels[0].bits.shape
        for i, ch in enumerate(self.channels):
            if ch.bits.shape != shape:
                raise ValueError(
                    f"channel {i} has shape {ch.bits.shape[::-1]}, expected {shape[::-1]}"
                )
        if self.adjacency not in (4, 8):
            raise ValueError(f"adjacency must be 4 or 8, got {self.adjacency}")


_CMP_FUNCS = {
    "<=": np.less_equal,
    "<": np.less,
    ">=": np.greater_equal,
    ">": np.greater,
    "=": np.equal,
}


def _to_array(value: Value, shape) -> np.ndarray:
    if isinstance(value, ScalarField):
        return value.values
    return np.full(shape, float(value))


def evaluate(program: SpecProgram, ctx: EvalContext, memoize: bool = True) -> dict[str, BitMask]:
    """Evaluate every save of a sort-checked program.

    Returns {output name: mask} in save order. With memoize=False each Var
    reference re-evaluates its binding; results are identical either way
    (all operators are pure), the flag exists so tests can prove it.
    """
    shape = ctx.channels[0].bits.shape
    bindings = dict(program.lets)
    env: dict[str, Value] = {}

    def as_mask(value: Value, what: str) -> BitMask:
        if not isinstance(value, BitMask):
            raise EvalError(f"{what} is not a mask (got {type(value).__name__})")
        return value

    def as_field_or_number(value: Value) -> float | ScalarField:
        if isinstance(value, BitMask):
            raise EvalError("arithmetic/comparison on a mask")
        return value

    def arith(op: str, lhs: Value, rhs: Value) -> Value:
        lhs = as_field_or_number(lhs)
        rhs = as_field_or_number(rhs)
        if isinstance(lhs, float) and isinstance(rhs, float):
            if op == "+":
                return lhs + rhs
            if op == "-":
                return lhs - rhs
            return lhs * rhs
        left = _to_array(lhs, shape)
        right = _to_array(rhs, shape)
        with np.errstate(invalid="ignore"):  # NaN is caught and reported below
            if op == "+":
                out = left + right
            elif op == "-":
                out = left - right
            else:
                out = left * right
        if np.isnan(out).any():
            raise EvalError(f"'{op}' produced an undefined value (inf - inf or 0 * inf)")
        return ScalarField(out)

    def compare(op: str, lhs: Value, rhs: Value) -> BitMask:
        lhs = as_field_or_number(lhs)
        rhs = as_field_or_number(rhs)
        if isinstance(lhs, float) and isinstance(rhs, float):
            raise EvalError(f"comparison '{op}' of two plain numbers")
        return BitMask(_CMP_FUNCS[op](_to_array(lhs, shape), _to_array(rhs, shape)))

    def ev(expr: Expr) -> Value:
        if isinstance(expr, Number):
            return expr.value
        if isinstance(expr, Param):
            if expr.name not in ctx.params:
                raise EvalError(f"unbound parameter '{expr.name}'")
            return float(ctx.params[expr.name])
        if isinstance(expr, Var):
            if memoize:
                return env[expr.name]
            return ev(bindings[expr.name])
        if isinstance(expr, Not):
            return ~as_mask(ev(expr.operand), "operand of !")
        if isinstance(expr, And):
            return as_mask(ev(expr.left), "operand of &") & as_mask(ev(expr.right), "operand of &")
        if isinstance(expr, Or):
            return as_mask(ev(expr.left), "operand of |") | as_mask(ev(expr.right), "operand of |")
        if isinstance(expr, Arith):
            return arith(expr.op, ev(expr.left), ev(expr.right))
        if isinstance(expr, Cmp):
            return compare(expr.op, ev(expr.left), ev(expr.right))
        if isinstance(expr, Call):
            return call(expr)
        raise TypeError(f"unknown expression node {expr!r}")  # pragma: no cover

    def call(expr: Call) -> Value:
        name = expr.func
        if name == "channel":
            index = ev(expr.args[0])
            if not isinstance(index, float) or index != int(index):
                raise EvalError(f"channel index must be an integer, got {index!r}")
            i = int(index)
            if not 0 <= i < len(ctx.channels):
                raise EvalError(
                    f"channel index {i} out of range (have {len(ctx.channels)} channels)"
                )
            return ctx.channels[i]
        if name == "near":
            return op_near(as_mask(ev(expr.args[0]), "argument of near"), ctx.adjacency)
        if name == "interior":
            return op_interior(as_mask(ev(expr.args[0]), "argument of interior"), ctx.adjacency)
        if name == "touch":
            return op_touch(
                as_mask(ev(expr.args[0]), "first argument of touch"),
                as_mask(ev(expr.args[1]), "second argument of touch"),
                ctx.adjacency,
            )
        if name == "dt":
            return op_dt(as_mask(ev(expr.args[0]), "argument of dt"))
        if name == "gdt":
            return op_gdt(
                as_mask(ev(expr.args[0]), "first argument of gdt"),
                as_mask(ev(expr.args[1]), "second argument of gdt"),
                ctx.adjacency,
            )
        if name == "minval":
            value = ev(expr.args[0])
            if not isinstance(value, ScalarField):
                raise EvalError("argument of minval is not a scalar field")
            return op_minval(value)
        raise EvalError(f"unknown builtin '{name}'")  # pragma: no cover

    if memoize:
        for name, expr in program.lets:
            env[name] = ev(expr)
    outputs: dict[str, BitMask] = {}
    for name, expr in program.saves:
        outputs[name] = as_mask(ev(expr), f'save "{name}"')
    return outputs
