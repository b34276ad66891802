"""Infix expression parsing and IEEE-754 evaluation.

Two dialects share one parser:

* calculator: + - * / with parentheses, unary minus, decimal literals.
* analyser functions: the calculator dialect plus one variable, the
  constants pi and e, '^', and the usual elementary functions.

Division by zero yields a signed infinity (0/0 is NaN) instead of raising,
so a calculator can display the result and a plotted function simply gets
a non-finite sample.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

_FUNCTIONS = {
    "sin": math.sin, "cos": math.cos, "tan": math.tan,
    "asin": math.asin, "acos": math.acos, "atan": math.atan,
    "sqrt": math.sqrt, "abs": abs, "exp": math.exp,
    "ln": math.log, "log": math.log10,
    "floor": math.floor, "ceil": math.ceil,
}
_CONSTANTS = {"pi": math.pi, "e": math.e}


class ExpressionError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (position {pos})")
        self.pos = pos


def _tokenize(src: str, idents: bool) -> list[tuple[str, str, int]]:
    tokens = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or ch == ".":
            j = i
            seen_dot = False
            while j < n and (src[j].isdigit() or src[j] == "."):
                if src[j] == ".":
                    if seen_dot:
                        raise ExpressionError("number has two decimal points", j)
                    seen_dot = True
                j += 1
            text = src[i:j]
            if text == ".":
                raise ExpressionError("bare decimal point", i)
            tokens.append(("num", text, i))
            i = j
            continue
        if ch in "+-*/()^":
            tokens.append((ch, ch, i))
            i += 1
            continue
        if idents and ch.isalpha():
            j = i
            while j < n and src[j].isalnum():
                j += 1
            tokens.append(("ident", src[i:j], i))
            i = j
            continue
        raise ExpressionError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens, variable: Optional[str], functions: bool):
        self.tokens = tokens
        self.k = 0
        self.variable = variable
        self.functions = functions

    def peek(self):
        return self.tokens[self.k]

    def take(self, kind=None):
        tok = self.tokens[self.k]
        if kind is not None and tok[0] != kind:
            raise ExpressionError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        self.k += 1
        return tok

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ExpressionError(f"unexpected {tok[1]!r}", tok[2])
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            node = (op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] in ("*", "/"):
            op = self.take()[0]
            node = (op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[0] == "-":
            pos = self.take()[2]
            return ("neg", self.unary(), pos)
        return self.power()

    def power(self):
        node = self.primary()
        if self.functions and self.peek()[0] == "^":
            self.take()
            return ("^", node, self.unary())  # right-associative
        return node

    def primary(self):
        tok = self.peek()
        if tok[0] == "num":
            self.take()
            return ("num", float(tok[1]))
        if tok[0] == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        if tok[0] == "ident":
            self.take()
            name = tok[1]
            if self.variable is not None and name == self.variable:
                return ("var",)
            if name in _CONSTANTS:
                return ("num", _CONSTANTS[name])
            if name in _FUNCTIONS:
                self.take("(")
                arg = self.expr()
                self.take(")")
                return ("call", name, arg)
            raise ExpressionError(f"unknown name {name!r}", tok[2])
        raise ExpressionError(f"unexpected {tok[1]!r}" if tok[1] else "unexpected end",
                              tok[2])


def parse_expression(src: str, variable: Optional[str] = None,
                     functions: bool = False):
    """Parse to an AST; raises ExpressionError with the offending position."""
    if not isinstance(src, str):
        raise ExpressionError("expression must be a string", 0)
    tokens = _tokenize(src, idents=functions or variable is not None)
    return _Parser(tokens, variable, functions).parse()


def _ieee_div(a: float, b: float) -> float:
    if b != 0.0:
        return a / b
    if a == 0.0 or math.isnan(a):
        return math.nan
    sign = math.copysign(1.0, a) * math.copysign(1.0, b)
    return math.inf if sign > 0 else -math.inf


def eval_ast(node, var: float = 0.0) -> float:
    op = node[0]
    if op == "num":
        return node[1]
    if op == "var":
        return var
    if op == "neg":
        return -eval_ast(node[1], var)
    if op == "call":
        x = eval_ast(node[2], var)
        if math.isnan(x):
            return math.nan
        try:
            return float(_FUNCTIONS[node[1]](x))
        except ValueError:
            return math.nan
        except OverflowError:
            return math.inf
    a = eval_ast(node[1], var)
    b = eval_ast(node[2], var)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        return _ieee_div(a, b)
    if op == "^":
        try:
            return math.pow(a, b)
        except ValueError:
            return math.nan
        except OverflowError:
            return math.inf
    raise AssertionError(f"unknown ast node {op!r}")


def eval_expression(tokens: Sequence[str] | str) -> float:
    """Evaluate a calculator entry (a token list or a plain string).

    Standard precedence, left associativity, IEEE-754 arithmetic; a syntax
    error raises ExpressionError with the character position.
    """
    src = tokens if isinstance(tokens, str) else "".join(tokens)
    return eval_ast(parse_expression(src))


def format_number(x: float) -> str:
    """Display form: integral floats lose the trailing .0, inf becomes a sign."""
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "∞" if x > 0 else "-∞"
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)
