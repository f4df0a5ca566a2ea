"""A small expression language over the means of an implicit pair (a, b).

Grammar::

    expr    := term (("+" | "-") term)*
    term    := factor (("*" | "/") factor)*
    factor  := ("-" | "+") factor | power
    power   := primary ("^" factor)?
    primary := NUMBER | CONST | MEAN | MEAN "(" expr "," expr ")"
             | FUNC "(" expr ")" | "(" expr ")"
    MEAN    := A | G | H | L | I | P | X | Y | M "[" expr "]" | N "[" expr "]"

``M[p]`` is the power mean and ``N[p]`` the power-type Heronian mean; ``p``
must be a constant expression.  ``L(X, A)`` applies L to the values of X and A.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Union

import gmpy2

from . import means as _means
from .errors import DomainError, InvalidArgumentError, MeansError, ParseError
from .kinds import MeanKind, PositivePair
from .precise import PairMeans, working_precision

__all__ = [
    "Const",
    "MeanAtom",
    "BinOp",
    "Neg",
    "Func",
    "MeanCall",
    "Node",
    "NAMED_CONSTANTS",
    "parse_expression",
    "render",
    "compile_expression",
    "eval_expression",
    "mean_kinds",
]


@dataclass(frozen=True)
class Const:
    value: float
    text: str
    named: bool = False


@dataclass(frozen=True)
class MeanAtom:
    kind: MeanKind
    param: "Node | None" = None


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class Func:
    name: str
    arg: "Node"


@dataclass(frozen=True)
class MeanCall:
    atom: MeanAtom
    left: "Node"
    right: "Node"


Node = Union[Const, MeanAtom, BinOp, Neg, Func, MeanCall]


def _named_float():
    log = math.log
    return {
        "pi": math.pi,
        "e": math.e,
        "beta2": log(math.pi / 2) / log(2 * math.e / math.pi),
        "q89": log(2) / (1 + log(2)),
        "betaHeron": log(3) / (1 + log(2)),
        "c1": log(2) / log(math.pi / 2),
        "alphaY": 0.9756,
    }


def _named_mpfr(name: str):
    pi, e, log = gmpy2.const_pi(), gmpy2.exp(1), gmpy2.log
    if name == "pi":
        return pi
    if name == "e":
        return e
    if name == "beta2":
        return log(pi / 2) / log(2 * e / pi)
    if name == "q89":
        return log(2) / (1 + log(2))
    if name == "betaHeron":
        return log(3) / (1 + log(2))
    if name == "c1":
        return log(2) / log(pi / 2)
    if name == "alphaY":
        return gmpy2.mpfr("0.9756")
    raise KeyError(name)


NAMED_CONSTANTS = _named_float()
FUNCTIONS = ("exp", "log", "sqrt")
MEAN_LETTERS = "AGHLIPXY"
PARAM_LETTERS = "MN"

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()\[\],])"
    r")"
)


def _normalize(text: str) -> str:
    return text.replace("−", "-").replace("·", "*").replace("×", "*")


class _Parser:
    def __init__(self, text: str):
        self.source = text
        self.text = _normalize(text)
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        n = len(self.text)
        while True:
            while pos < n and self.text[pos].isspace():
                pos += 1
            if pos >= n:
                break
            m = _TOKEN.match(self.text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected character {self.text[pos]!r}", self._offset(pos), text)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def _offset(self, pos: int) -> int:
        return len(self.source[:pos].encode("utf-8"))

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "", len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, self._offset(tok[2]), self.source)

    def expect(self, value):
        tok = self.take()
        if tok[1] != value or tok[0] != "op":
            self.error(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok)
        return tok

    def parse(self) -> Node:
        if not self.tokens:
            self.error("empty expression")
        node = self.expr()
        if self.i < len(self.tokens):
            self.error(f"unexpected token {self.peek()[1]!r}")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            return Neg(self.factor())
        if tok[0] == "op" and tok[1] == "+":
            self.take()
            return self.factor()
        return self.power()

    def power(self) -> Node:
        base = self.primary()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            return BinOp("^", base, self.factor())
        return base

    def primary(self) -> Node:
        tok = self.take()
        kind, value, _ = tok
        if kind == "num":
            return Const(float(value), value)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind != "ident":
            self.error(f"unexpected {value or 'end of input'!r}", tok)
        if value in FUNCTIONS:
            self.expect("(")
            arg = self.expr()
            if self.peek()[1] == ",":
                self.error(f"{value}() takes exactly one argument")
            self.expect(")")
            return Func(value, arg)
        if value in NAMED_CONSTANTS:
            return Const(NAMED_CONSTANTS[value], value, named=True)
        if value in PARAM_LETTERS:
            self.expect("[")
            param = self.expr()
            self.expect("]")
            try:
                p = _constant_value(param)
            except MeansError as exc:
                self.error(f"parameter of {value}[...] must be a finite constant ({exc})", tok)
            atom = MeanAtom(MeanKind.from_letter(value, p), param)
        elif value in MEAN_LETTERS:
            atom = MeanAtom(MeanKind.from_letter(value))
        else:
            self.error(f"unknown identifier {value!r}", tok)
        if self.peek()[0] == "op" and self.peek()[1] == "(":
            return self.call(atom)
        return atom

    def call(self, atom: MeanAtom) -> MeanCall:
        open_tok = self.take()
        args = [self.expr()]
        while self.peek()[0] == "op" and self.peek()[1] == ",":
            self.take()
            args.append(self.expr())
        self.expect(")")
        if len(args) != 2:
            self.error(f"mean call {atom.kind} takes exactly 2 arguments, got {len(args)}", open_tok)
        return MeanCall(atom, args[0], args[1])


def parse_expression(text: str) -> Node:
    """Parse ``text`` into an expression tree.

    Raises:
        ParseError: on any syntax error; ``offset`` is a byte offset into ``text``.
    """
    return _Parser(text).parse()


def _constant_value(node: Node) -> float:
    if mean_kinds(node):
        raise DomainError("expression depends on the pair")
    v = _compile(node, _FLOAT)(None)
    if not math.isfinite(v):
        raise DomainError(f"value {v} is not finite")
    return v


# -- rendering -------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


def _prec(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    return 5


def render(node: Node) -> str:
    """Text that parses back to an identical tree."""
    if isinstance(node, Const):
        return node.text
    if isinstance(node, MeanAtom):
        if node.param is None:
            return node.kind.letter
        return f"{node.kind.letter}[{render(node.param)}]"
    if isinstance(node, MeanCall):
        return f"{render(node.atom)}({render(node.left)}, {render(node.right)})"
    if isinstance(node, Func):
        return f"{node.name}({render(node.arg)})"
    if isinstance(node, Neg):
        inner = render(node.operand)
        return f"-({inner})" if _prec(node.operand) < 3 else f"-{inner}"
    p = _PREC[node.op]
    left, right = render(node.left), render(node.right)
    lp, rp = _prec(node.left), _prec(node.right)
    if lp < p or (node.op == "^" and lp <= p):
        left = f"({left})"
    if node.op == "^":
        if rp < 3:
            right = f"({right})"
    elif rp <= p:
        right = f"({right})"
    sep = "" if node.op in "*/^" else " "
    return f"{left}{sep}{node.op}{sep}{right}"


def mean_kinds(node: Node) -> set[MeanKind]:
    """Every mean kind appearing as an atom (not inside a call's head)."""
    if isinstance(node, MeanAtom):
        return {node.kind}
    if isinstance(node, MeanCall):
        return mean_kinds(node.left) | mean_kinds(node.right)
    if isinstance(node, BinOp):
        return mean_kinds(node.left) | mean_kinds(node.right)
    if isinstance(node, (Neg,)):
        return mean_kinds(node.operand)
    if isinstance(node, Func):
        return mean_kinds(node.arg)
    return set()


# -- evaluation ------------------------------------------------------------


def _float_pow(x, y):
    if x < 0 and not float(y).is_integer():
        raise DomainError(f"{x} ** {y} is not real")
    return x**y


def _float_div(x, y):
    if y == 0:
        raise DomainError("division by zero")
    return x / y


def _float_log(x):
    if x <= 0:
        raise DomainError(f"log of nonpositive value {x}")
    return math.log(x)


def _float_sqrt(x):
    if x < 0:
        raise DomainError(f"sqrt of negative value {x}")
    return math.sqrt(x)


def _float_call(kind, x, y):
    try:
        return _means.eval_mean(kind, PositivePair(x, y)).value
    except InvalidArgumentError as exc:
        raise DomainError(f"{kind}({x}, {y}): {exc}") from None


class _Backend:
    def __init__(self, binops, funcs, const, call, exact_params=False):
        self.exact_params = exact_params
        self.binops = binops
        self.funcs = funcs
        self.const = const
        self.call = call


_FLOAT = _Backend(
    binops={
        "+": lambda x, y: x + y,
        "-": lambda x, y: x - y,
        "*": lambda x, y: x * y,
        "/": _float_div,
        "^": _float_pow,
    },
    funcs={"exp": math.exp, "log": _float_log, "sqrt": _float_sqrt},
    const=lambda node: node.value,
    call=_float_call,
)


def _mp_call(kind, x, y, p=None):
    if not (x > 0 and y > 0):
        return gmpy2.nan()
    return PairMeans(x, y).value(kind, p)


_MPFR = _Backend(
    binops={
        "+": lambda x, y: x + y,
        "-": lambda x, y: x - y,
        "*": lambda x, y: x * y,
        "/": lambda x, y: x / y,
        "^": lambda x, y: x**y,
    },
    funcs={"exp": gmpy2.exp, "log": gmpy2.log, "sqrt": gmpy2.sqrt},
    const=lambda node: _named_mpfr(node.text) if node.named else gmpy2.mpfr(node.text),
    call=_mp_call,
    exact_params=True,
)


def _compile(node: Node, be: _Backend) -> Callable:
    if isinstance(node, Const):
        v = be.const(node)
        return lambda env: v
    if isinstance(node, MeanAtom):
        kind = node.kind
        if be.exact_params and node.param is not None:
            # re-evaluate p at working precision; 1/3 as a double is off by 1e-17
            p = _compile(node.param, be)(None)
            return lambda env: env(kind, p)
        return lambda env: env(kind)
    if isinstance(node, BinOp):
        op, left, right = be.binops[node.op], _compile(node.left, be), _compile(node.right, be)
        return lambda env: op(left(env), right(env))
    if isinstance(node, Neg):
        inner = _compile(node.operand, be)
        return lambda env: -inner(env)
    if isinstance(node, Func):
        fn, arg = be.funcs[node.name], _compile(node.arg, be)
        return lambda env: fn(arg(env))
    kind, call = node.atom.kind, be.call
    left, right = _compile(node.left, be), _compile(node.right, be)
    if be.exact_params and node.atom.param is not None:
        p = _compile(node.atom.param, be)(None)
        return lambda env: call(kind, left(env), right(env), p)
    return lambda env: call(kind, left(env), right(env))


def compile_expression(node: Node, precise: bool = False) -> Callable:
    """Turn a tree into ``f(env)`` where ``env(kind)`` supplies mean values.

    With ``precise=True`` constants and arithmetic are mpfr at the precision
    active when this is called (compile inside ``working_precision``).
    """
    return _compile(node, _MPFR if precise else _FLOAT)


def eval_expression(node: Node | str, pair: PositivePair, precise: bool = False):
    """Evaluate ``node`` at ``pair``.

    Returns a float, or an mpfr at ``precise.PRECISION`` bits with ``precise=True``.

    Raises:
        DomainError: an operation left its domain (float mode only; in
            precise mode the result is NaN instead).
    """
    if isinstance(node, str):
        node = parse_expression(node)
    if not isinstance(pair, PositivePair):
        pair = PositivePair(*pair)
    if precise:
        with working_precision():
            pm = PairMeans(pair.a, pair.b)
            return compile_expression(node, True)(pm.value)
    cache: dict = {}

    def env(kind):
        v = cache.get(kind)
        if v is None:
            v = cache[kind] = _means.eval_mean(kind, pair).value
        return v

    try:
        return compile_expression(node)(env)
    except (OverflowError, ZeroDivisionError) as exc:
        raise DomainError(str(exc)) from None
