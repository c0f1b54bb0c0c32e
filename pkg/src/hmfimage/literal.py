"""Element literals such as ``(x+y*s)/2``, ``a+b*s`` or ``s^2*(8+3*s)``."""

from __future__ import annotations

import re
from fractions import Fraction

from .quadfield import QFElem, QFIdeal, QuadField


class LiteralError(ValueError):
    def __init__(self, message: str, column: int, expected: str = ""):
        super().__init__(message)
        self.column = column
        self.expected = expected


_TOKEN = re.compile(r"\s*(?:(\d+)|([sw√])|(.))")


def _normalize(text: str) -> str:
    return text.replace("−", "-").replace("·", "*").replace("×", "*")


class _Parser:
    def __init__(self, text: str, m: int, half_omega: bool):
        self.text = _normalize(text)
        self.m = m
        self.half = half_omega
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(self.text):
            mt = _TOKEN.match(self.text, pos)
            if mt.end() == pos:
                break
            if mt.group(1):
                self.toks.append(("int", mt.group(1), mt.start(1)))
            elif mt.group(2):
                self.toks.append(("sym", mt.group(2), mt.start(2)))
            elif mt.group(3):
                self.toks.append(("op", mt.group(3), mt.start(3)))
            pos = mt.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("eof", "", len(self.text))

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, op: str):
        t = self.take()
        if t[1] != op:
            raise LiteralError(f"expected {op!r}", t[2], op)

    def mul(self, a, b):
        (u1, v1), (u2, v2) = a, b
        return u1 * u2 + self.m * v1 * v2, u1 * v2 + u2 * v1

    def expr(self):
        val = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            val = (val[0] + rhs[0], val[1] + rhs[1]) if op == "+" else (val[0] - rhs[0], val[1] - rhs[1])
        return val

    def term(self):
        val = self.unary()
        while self.peek()[1] in ("*", "/"):
            _, op, col = self.take()
            rhs = self.unary()
            if op == "*":
                val = self.mul(val, rhs)
            else:
                if rhs[1] != 0 or rhs[0] == 0:
                    raise LiteralError("division only by a nonzero integer", col, "integer")
                val = (val[0] / rhs[0], val[1] / rhs[0])
        return val

    def unary(self):
        t = self.peek()
        if t[1] in ("-", "+"):
            self.take()
            v = self.unary()
            return (-v[0], -v[1]) if t[1] == "-" else v
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            t = self.take()
            if t[0] != "int":
                raise LiteralError("expected exponent", t[2], "integer")
            acc = (Fraction(1), Fraction(0))
            for _ in range(int(t[1])):
                acc = self.mul(acc, base)
            return acc
        return base

    def atom(self):
        kind, val, col = self.take()
        if kind == "int":
            return Fraction(int(val)), Fraction(0)
        if kind == "sym":
            if val == "w" and self.half:
                return Fraction(1, 2), Fraction(1, 2)
            return Fraction(0), Fraction(1)
        if val == "(":
            v = self.expr()
            self.expect(")")
            return v
        raise LiteralError(f"unexpected {val or 'end of input'!r}", col, "number, s or (")

    def parse(self):
        if not self.toks:
            raise LiteralError("empty literal", 0, "element literal")
        v = self.expr()
        kind, val, col = self.peek()
        if kind != "eof":
            raise LiteralError(f"unexpected {val!r}", col, "end of literal")
        return v


def parse_element(text: str, K: QuadField) -> QFElem:
    u, v = _Parser(text, K.m, K.half_omega).parse()
    x, y = 2 * u, 2 * v
    if x.denominator != 1 or y.denominator != 1:
        raise LiteralError(f"{text!r} is not of the form (x+y*s)/2", 0, "half-integral coordinates")
    return QFElem(K, int(x), int(y))


def format_element(x: QFElem) -> str:
    return str(x)


_IDEAL = re.compile(r"^\[\s*(-?\d+)\s*,\s*(-?\d+)\s*(?:\+\s*w)?\s*;\s*(-?\d+)\s*\]$")


def parse_ideal(text: str, K: QuadField) -> tuple[QFIdeal, QFElem | None]:
    """Either ``[a, b+w; c]`` or an element literal generating the ideal."""
    text = _normalize(text).strip()
    mt = _IDEAL.match(text)
    if mt:
        a, b, c = (int(g) for g in mt.groups())
        try:
            return QFIdeal(K, a, b, c), None
        except ValueError as exc:
            raise LiteralError(str(exc), 0, "normal presentation") from exc
    if text.startswith("["):
        raise LiteralError("malformed ideal presentation", 0, "[a, b+w; c]")
    g = parse_element(text, K)
    if g.is_zero() or not g.is_integral():
        raise LiteralError("level generator must be a nonzero integer of F", 0, "integral element")
    return QFIdeal.principal(g), g
