"""Integer/boolean evaluation of guard and index expressions."""
from __future__ import annotations

from typing import Mapping

from fspv.errors import DivisionByZero, UnboundName
from fspv.fsp.ast import Binary, Name, Num, Unary


def _div(a: int, b: int) -> int:
    if b == 0:
        raise DivisionByZero("division by zero")
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def _mod(a: int, b: int) -> int:
    if b == 0:
        raise DivisionByZero("modulo by zero")
    return a - b * _div(a, b)


_ARITH = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": _div,
    "%": _mod,
}

_REL = {
    "==": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


def eval_expr(expr, env: Mapping[str, int]):
    """Evaluate ``expr`` under ``env``.

    Arithmetic is on Python ints with division truncating toward zero.
    Relational and logical operators yield ``bool``; since ``bool`` is an
    ``int`` subclass, a boolean used arithmetically counts as 0/1, and an
    integer used as a condition is true when nonzero.
    """
    if isinstance(expr, Num):
        return expr.value
    if isinstance(expr, Name):
        try:
            return env[expr.name]
        except KeyError:
            raise UnboundName(f"unbound name {expr.name}") from None
    if isinstance(expr, Unary):
        value = eval_expr(expr.operand, env)
        return (not value) if expr.op == "!" else -value
    if isinstance(expr, Binary):
        op = expr.op
        if op == "&&":
            return bool(eval_expr(expr.left, env)) and bool(eval_expr(expr.right, env))
        if op == "||":
            return bool(eval_expr(expr.left, env)) or bool(eval_expr(expr.right, env))
        left = eval_expr(expr.left, env)
        right = eval_expr(expr.right, env)
        if op in _REL:
            return _REL[op](left, right)
        return _ARITH[op](int(left), int(right))
    raise TypeError(f"not an expression: {expr!r}")


def eval_int(expr, env: Mapping[str, int]) -> int:
    return int(eval_expr(expr, env))


def free_names(expr) -> set[str]:
    if isinstance(expr, Name):
        return {expr.name}
    if isinstance(expr, Unary):
        return free_names(expr.operand)
    if isinstance(expr, Binary):
        return free_names(expr.left) | free_names(expr.right)
    return set()
