"""Text parsers for field elements and polynomials.

Accepted syntax is ordinary arithmetic: ``+ - * /``, powers with ``^`` or
``**`` (nonnegative integer exponents on polynomials), parentheses,
rational literals and ``sqrt(k)`` for an integer ``k``.  ``sqrt(k)`` must
equal ``c*sqrt(d)`` for the working ``d``.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from typing import Sequence

from sympy import factorint

from .errors import FieldMismatchError, ParseError
from .exactfield import FieldElement
from .multipoly import MultiPoly


def _sqrt_of_int(k: int, d: int | None) -> FieldElement:
    if k == 0:
        return FieldElement(0, 0, d)
    sign = -1 if k < 0 else 1
    square, core = 1, sign
    for p, e in factorint(abs(k)).items():
        square *= p ** (e // 2)
        core *= p ** (e % 2)
    if core == 1:
        return FieldElement(square, 0, d)
    if d is None:
        d = core
    if core != d:
        raise FieldMismatchError(f"sqrt({k}) does not lie in Q(sqrt({d}))")
    return FieldElement(0, square, d)


class _Evaluator:
    def __init__(self, names: Sequence[str], d: int | None, source: str, env=None):
        self.names = list(names)
        self.env = dict(env or {})
        self.d = d
        self.source = source
        self.nvars = len(self.names)

    def fail(self, node, why: str):
        raise ParseError(f"cannot parse {self.source!r}: {why}")

    def const(self, c) -> MultiPoly:
        return MultiPoly.constant(c, self.nvars, self.names)

    def visit(self, node) -> MultiPoly:
        if isinstance(node, ast.Expression):
            return self.visit(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                self.fail(node, f"unsupported literal {node.value!r}")
            return self.const(node.value)
        if isinstance(node, ast.Name):
            if node.id in self.names:
                return MultiPoly.var(self.names.index(node.id), self.nvars, self.names)
            if node.id in self.env:
                return self.const(self.env[node.id])
            self.fail(node, f"unknown variable {node.id!r}")
        if isinstance(node, ast.UnaryOp):
            val = self.visit(node.operand)
            if isinstance(node.op, ast.USub):
                return -val
            if isinstance(node.op, ast.UAdd):
                return val
            self.fail(node, "unsupported unary operator")
        if isinstance(node, ast.BinOp):
            left = self.visit(node.left)
            if isinstance(node.op, ast.Pow):
                exp = self.visit(node.right)
                if not exp.is_constant():
                    self.fail(node, "exponent must be a constant")
                k = exp.constant_value()
                if not k.is_rational() or k.a.denominator != 1:
                    self.fail(node, "exponent must be an integer")
                k = int(k.a)
                if k < 0:
                    if not left.is_constant():
                        self.fail(node, "negative power of a polynomial")
                    return self.const(left.constant_value() ** k)
                return left**k
            right = self.visit(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if not right.is_constant() or not right.constant_value():
                    self.fail(node, "division by a non-constant or zero")
                return left * right.constant_value().inverse()
            self.fail(node, "unsupported operator")
        if isinstance(node, ast.Call):
            if isinstance(node.func, ast.Name) and node.func.id == "sqrt" and len(node.args) == 1:
                arg = self.visit(node.args[0])
                if not arg.is_constant():
                    self.fail(node, "sqrt of a non-constant")
                k = arg.constant_value()
                if not k.is_rational() or k.a.denominator != 1:
                    self.fail(node, "sqrt argument must be an integer")
                value = _sqrt_of_int(int(k.a), self.d)
                if self.d is None and value.d is not None:
                    self.d = value.d
                return self.const(value)
            self.fail(node, "only sqrt(k) calls are supported")
        self.fail(node, f"unsupported syntax {type(node).__name__}")


def _parse(text: str, names: Sequence[str], d: int | None, env=None) -> tuple[MultiPoly, int | None]:
    src = text.strip()
    if not src:
        raise ParseError("empty expression")
    try:
        tree = ast.parse(src.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from None
    ev = _Evaluator(names, d, text, env)
    return ev.visit(tree), ev.d


def parse_polynomial(text: str, names: Sequence[str], d: int | None = None, env=None) -> MultiPoly:
    """Polynomial in the given variable names, e.g. ``2*x1^2*x2 - 3/4*x2 + 1``.

    Names bound in ``env`` are replaced by their values before any power is
    taken, so ``2^n`` is allowed when ``n`` is bound.
    """
    poly, _ = _parse(text, names, d, env)
    return poly


def parse_element(text: str, d: int | None = None, env=None) -> FieldElement:
    """Field element such as ``3/2``, ``-7``, ``(1/2 + 1/2*sqrt(5))`` or ``2^n + 1`` with ``n`` bound."""
    poly, _ = _parse(text, [], d, env)
    return poly.constant_value() if poly.terms else FieldElement(0, 0, d)


def parse_fraction(text: str) -> Fraction:
    value = parse_element(text)
    if not value.is_rational():
        raise ParseError(f"{text!r} is not rational")
    return value.a
