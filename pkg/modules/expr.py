"""
Expression language for trajectory entries
Real-valued expressions in t and named parameters, evaluated with forward-mode
dual numbers so time derivatives are exact to machine precision

GRAMMAR (version 1):
    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := primary ('^' integer)?
    primary := number | fn '(' expr ')' | 't' | 'pi' | ident | '(' expr ')'
    fn      := sin | cos | tan | exp | sqrt | abs

'^' binds tighter than unary minus (-t^2 is -(t^2)); exponents are integers and
may be negative. There is no implicit multiplication ("2t" is an error).

VERSION HISTORY:
1.1.0 - Pretty-printer and free parameter listing - 18/10/26
      ADDITIONS:
      - print_expr() emits fully parenthesized text that parses back unchanged
      - free_params() for spec validation
1.0.0 - pyparsing grammar with dual-number evaluation - 18/10/26
KEY FUNCTIONS:
- parse(src) -> ExprNode
- evaluate(node, t, params) -> float
- eval_dual(node, t, params) -> DualValue (value, d/dt)
"""
import math
import re
import logging
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Mapping, Tuple, Union

import pyparsing as pp

from modules.errors import ExprDomainError, ExprSyntaxError, UnboundParameterError

# Configure logging
logger = logging.getLogger(__name__)

RESERVED_NAMES = frozenset({"t", "pi"})
PARAM_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INTEGER = re.compile(r"-?\d+")


@dataclass(frozen=True)
class DualValue:
    """A value together with its derivative with respect to t"""

    value: float
    deriv: float = 0.0

    def __add__(self, other: "DualValue") -> "DualValue":
        return DualValue(self.value + other.value, self.deriv + other.deriv)

    def __sub__(self, other: "DualValue") -> "DualValue":
        return DualValue(self.value - other.value, self.deriv - other.deriv)

    def __mul__(self, other: "DualValue") -> "DualValue":
        return DualValue(
            self.value * other.value,
            self.value * other.deriv + self.deriv * other.value,
        )

    def __truediv__(self, other: "DualValue") -> "DualValue":
        return DualValue(
            self.value / other.value,
            (self.deriv * other.value - self.value * other.deriv) / (other.value * other.value),
        )

    def __neg__(self) -> "DualValue":
        return DualValue(-self.value, -self.deriv)


ONE = DualValue(1.0, 0.0)


def _sqrt(x: float) -> Tuple[float, float]:
    r = math.sqrt(x)
    return r, (0.5 / r if r > 0.0 else math.inf)


def _abs(x: float) -> Tuple[float, float]:
    # derivative at the kink is 0 by convention
    return abs(x), (1.0 if x > 0 else -1.0 if x < 0 else 0.0)


def _tan(x: float) -> Tuple[float, float]:
    v = math.tan(x)
    return v, 1.0 + v * v


# name -> x -> (f(x), f'(x))
FUNCTIONS: Dict[str, Callable[[float], Tuple[float, float]]] = {
    "sin": lambda x: (math.sin(x), math.cos(x)),
    "cos": lambda x: (math.cos(x), -math.sin(x)),
    "tan": _tan,
    "exp": lambda x: (math.exp(x), math.exp(x)),
    "sqrt": _sqrt,
    "abs": _abs,
}


@dataclass(frozen=True)
class _Env:
    t: float
    params: Mapping[str, float]


@dataclass(frozen=True)
class Const:
    value: float

    def _eval(self, env: _Env) -> DualValue:
        return DualValue(self.value, 0.0)


@dataclass(frozen=True)
class VarT:
    def _eval(self, env: _Env) -> DualValue:
        return DualValue(env.t, 1.0)


@dataclass(frozen=True)
class Param:
    name: str

    def _eval(self, env: _Env) -> DualValue:
        if self.name not in env.params:
            raise UnboundParameterError(self.name)
        return DualValue(float(env.params[self.name]), 0.0)


@dataclass(frozen=True)
class Neg:
    child: "ExprNode"

    def _eval(self, env: _Env) -> DualValue:
        return -self.child._eval(env)


@dataclass(frozen=True)
class Add:
    left: "ExprNode"
    right: "ExprNode"

    def _eval(self, env: _Env) -> DualValue:
        return self.left._eval(env) + self.right._eval(env)


@dataclass(frozen=True)
class Sub:
    left: "ExprNode"
    right: "ExprNode"

    def _eval(self, env: _Env) -> DualValue:
        return self.left._eval(env) - self.right._eval(env)


@dataclass(frozen=True)
class Mul:
    left: "ExprNode"
    right: "ExprNode"

    def _eval(self, env: _Env) -> DualValue:
        return self.left._eval(env) * self.right._eval(env)


@dataclass(frozen=True)
class Div:
    left: "ExprNode"
    right: "ExprNode"

    def _eval(self, env: _Env) -> DualValue:
        numerator = self.left._eval(env)
        denominator = self.right._eval(env)
        if denominator.value == 0.0:
            raise ExprDomainError("Division by zero", env.t)
        return numerator / denominator


@dataclass(frozen=True)
class Pow:
    base: "ExprNode"
    exponent: int

    def _eval(self, env: _Env) -> DualValue:
        base = self.base._eval(env)
        n = abs(self.exponent)
        result = ONE
        # exponentiation by squaring
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        if self.exponent < 0:
            if result.value == 0.0:
                raise ExprDomainError("Division by zero in negative power", env.t)
            result = ONE / result
        return result


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "ExprNode"

    def _eval(self, env: _Env) -> DualValue:
        inner = self.arg._eval(env)
        if self.fn == "sqrt" and inner.value < 0.0:
            raise ExprDomainError("Square root of a negative number", env.t)
        try:
            value, slope = FUNCTIONS[self.fn](inner.value)
        except (OverflowError, ValueError):
            raise ExprDomainError(f"{self.fn}() is undefined or overflows", env.t) from None
        # chain rule; an infinite slope only matters when the inner value moves
        deriv = slope * inner.deriv if inner.deriv != 0.0 else 0.0
        return DualValue(value, deriv)


ExprNode = Union[Const, VarT, Param, Neg, Add, Sub, Mul, Div, Pow, Call]

_BINARY = {"+": Add, "-": Sub, "*": Mul, "/": Div}


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def _make_const(s: str, loc: int, toks: pp.ParseResults) -> Const:
    return Const(float(toks[0]))


def _make_name(s: str, loc: int, toks: pp.ParseResults) -> ExprNode:
    name = toks[0]
    if name == "t":
        return VarT()
    if name == "pi":
        return Const(math.pi)
    if name in FUNCTIONS:
        raise ExprSyntaxError(f"Function '{name}' needs an argument in parentheses", loc)
    return Param(name)


def _make_call(s: str, loc: int, toks: pp.ParseResults) -> Call:
    name = toks[0]
    if name not in FUNCTIONS:
        raise ExprSyntaxError(f"Unknown function '{name}'", loc)
    return Call(name, toks[1])


def _make_pow(s: str, loc: int, toks: pp.ParseResults) -> ExprNode:
    if len(toks) == 1:
        return toks[0]
    text = toks[1]
    if not _INTEGER.fullmatch(text):
        raise ExprSyntaxError(f"Non-integer exponent '{text}'", s.find(text, loc))
    return Pow(toks[0], int(text))


def _make_neg(s: str, loc: int, toks: pp.ParseResults) -> Neg:
    return Neg(toks[0])


def _fold(s: str, loc: int, toks: pp.ParseResults) -> ExprNode:
    node = toks[0]
    for i in range(1, len(toks), 2):
        node = _BINARY[toks[i]](node, toks[i + 1])
    return node


def _build_grammar() -> pp.ParserElement:
    number_text = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
    ident = pp.Regex(r"[A-Za-z_][A-Za-z0-9_]*")
    lpar, rpar = pp.Suppress("("), pp.Suppress(")")

    expr = pp.Forward()
    unary = pp.Forward()

    number = pp.Regex(number_text).set_parse_action(_make_const)
    call = (ident + lpar + expr + rpar).set_parse_action(_make_call)
    name = ident.copy().set_parse_action(_make_name)
    primary = number | call | name | (lpar + expr + rpar)
    exponent = pp.Regex("-?" + number_text)
    power = (primary + pp.Optional(pp.Suppress("^") + exponent)).set_parse_action(_make_pow)
    unary <<= (pp.Suppress("-") + unary).set_parse_action(_make_neg) | power
    term = (unary + pp.ZeroOrMore(pp.one_of("* /") + unary)).set_parse_action(_fold)
    expr <<= (term + pp.ZeroOrMore(pp.one_of("+ -") + term)).set_parse_action(_fold)
    return expr


_GRAMMAR = _build_grammar()


def parse(src: str) -> ExprNode:
    """
    Parse expression text into an immutable tree

    Args:
        src: Expression source text

    Returns:
        Root ExprNode

    Raises:
        ExprSyntaxError: malformed text, unknown function or non-integer exponent
    """
    if not src or not src.strip():
        raise ExprSyntaxError("Empty expression", 0)
    try:
        return _GRAMMAR.parse_string(src, parse_all=True)[0]
    except pp.ParseBaseException as e:
        raise ExprSyntaxError(f"Syntax error in {src!r}", e.loc) from None


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def eval_dual(node: ExprNode, t: float, params: Mapping[str, float]) -> DualValue:
    """
    Evaluate value and d/dt at t

    Raises:
        UnboundParameterError: a parameter has no value
        ExprDomainError: division by zero, sqrt of a negative, non-finite result
    """
    result = node._eval(_Env(float(t), params))
    if not (math.isfinite(result.value) and math.isfinite(result.deriv)):
        raise ExprDomainError("Non-finite value or derivative", t)
    return result


def evaluate(node: ExprNode, t: float, params: Mapping[str, float]) -> float:
    """Evaluate the value at t (same arithmetic as eval_dual)"""
    value = node._eval(_Env(float(t), params)).value
    if not math.isfinite(value):
        raise ExprDomainError("Non-finite value", t)
    return value


def free_params(node: ExprNode) -> FrozenSet[str]:
    """Names of all parameters used in the expression"""
    if isinstance(node, Param):
        return frozenset({node.name})
    if isinstance(node, (Neg,)):
        return free_params(node.child)
    if isinstance(node, (Add, Sub, Mul, Div)):
        return free_params(node.left) | free_params(node.right)
    if isinstance(node, Pow):
        return free_params(node.base)
    if isinstance(node, Call):
        return free_params(node.arg)
    return frozenset()


def print_expr(node: ExprNode) -> str:
    """Fully parenthesized text form; parse(print_expr(e)) == e"""
    if isinstance(node, Const):
        return repr(float(node.value))
    if isinstance(node, VarT):
        return "t"
    if isinstance(node, Param):
        return node.name
    if isinstance(node, Neg):
        return f"(-{print_expr(node.child)})"
    if isinstance(node, Pow):
        return f"({print_expr(node.base)}^{node.exponent})"
    if isinstance(node, Call):
        return f"{node.fn}({print_expr(node.arg)})"
    op = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[type(node)]
    return f"({print_expr(node.left)} {op} {print_expr(node.right)})"


def check_param_name(name: str) -> bool:
    """True iff name is usable as a parameter"""
    return bool(PARAM_NAME.fullmatch(name)) and name not in RESERVED_NAMES and name not in FUNCTIONS


ZERO = Const(0.0)
