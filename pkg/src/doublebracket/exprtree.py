"""Tiny safe evaluator for chart formulas given as text.

Supports the arithmetic operators +, -, *, /, ** (integer powers) and the
function set sin, cos, sinh, cosh, exp, sqrt, atan2, acosh.  Variables are
positional: ``u1..ud`` (or ``x1..xn``) name the components of the point the
compiled callable receives.  Anything outside this whitelist is rejected at
parse time, so config files cannot execute arbitrary code.
"""

from __future__ import annotations

import ast
import math
from typing import Callable

_FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "sinh": math.sinh,
    "cosh": math.cosh,
    "exp": math.exp,
    "sqrt": math.sqrt,
    "atan2": math.atan2,
    "acosh": math.acosh,
}

_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)
_ALLOWED_UNARY = (ast.UAdd, ast.USub)


def compile_expression(text: str, variables: list[str]) -> Callable:
    """Compile one formula into ``f(point) -> float``.

    ``variables[i]`` names component i of the input point.
    """
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse expression {text!r}: {exc}") from None
    index = {name: i for i, name in enumerate(variables)}

    def build(node: ast.AST) -> Callable:
        if isinstance(node, ast.Expression):
            return build(node.body)
        if isinstance(node, ast.Constant):
            if not isinstance(node.value, (int, float)):
                raise ValueError(f"non-numeric constant {node.value!r} in {text!r}")
            value = float(node.value)
            return lambda pt: value
        if isinstance(node, ast.Name):
            if node.id not in index:
                raise ValueError(f"unknown variable {node.id!r} in {text!r}")
            i = index[node.id]
            return lambda pt: float(pt[i])
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, _ALLOWED_UNARY):
            inner = build(node.operand)
            if isinstance(node.op, ast.USub):
                return lambda pt: -inner(pt)
            return inner
        if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
            left, right = build(node.left), build(node.right)
            op = node.op
            if isinstance(op, ast.Add):
                return lambda pt: left(pt) + right(pt)
            if isinstance(op, ast.Sub):
                return lambda pt: left(pt) - right(pt)
            if isinstance(op, ast.Mult):
                return lambda pt: left(pt) * right(pt)
            if isinstance(op, ast.Div):
                return lambda pt: left(pt) / right(pt)
            # power: restricted to literal integer exponents (repeated product)
            if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                raise ValueError(f"only integer literal exponents are allowed in {text!r}")
            exponent = node.right.value
            return lambda pt: left(pt) ** exponent
        if isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCTIONS:
                raise ValueError(f"unsupported function call in {text!r}")
            if node.keywords:
                raise ValueError(f"keyword arguments are not allowed in {text!r}")
            fn = _FUNCTIONS[node.func.id]
            args = [build(a) for a in node.args]
            if node.func.id == "atan2":
                if len(args) != 2:
                    raise ValueError("atan2 takes exactly two arguments")
                a0, a1 = args
                return lambda pt: fn(a0(pt), a1(pt))
            if len(args) != 1:
                raise ValueError(f"{node.func.id} takes exactly one argument")
            (a0,) = args
            return lambda pt: fn(a0(pt))
        raise ValueError(f"disallowed syntax {type(node).__name__} in {text!r}")

    return build(tree)


def compile_vector(expressions: list[str], variables: list[str]) -> Callable:
    """Compile a list of formulas into ``f(point) -> list[float]``."""
    fns = [compile_expression(e, variables) for e in expressions]
    return lambda pt: [f(pt) for f in fns]
