"""
Operator Expression Parser

Parses the operator language used on the command line, e.g.
"x^2*d^2 + 2*E*x^2 - x^4", into an OpExpr tree, prints trees back to
source, and elaborates them into normal-ordered LinDiffOp values.

x, d and D are reserved: x multiplies, d differentiates and D = x d is the
Euler operator. Any other identifier is a parameter. Products compose
operators right to left.
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Set, Union

from lark import Lark, Transformer
from lark.exceptions import UnexpectedEOF, UnexpectedInput, UnexpectedToken, VisitError

from algebra import CoeffField, ParamPoly, param_name
from errors import (
    EulerOdeError, NegativePower, ParseError, TwoFreeParameters, UnboundParameter, ValidationError,
)
from operators import LinDiffOp

logger = logging.getLogger(__name__)

op_grammar = r"""
    ?start: expr

    ?expr: term
         | "-" term          -> negate
         | expr "+" term     -> add
         | expr "-" term     -> sub

    ?term: factor
         | term "*" factor   -> mul

    ?factor: rational
           | NAME ("^" UINT)?  -> symbol
           | "(" expr ")"

    rational: UINT ("/" UINT)?

    NAME: /[A-Za-z_][A-Za-z0-9_]*/
    UINT: /[0-9]+/

    %import common.WS
    %ignore WS
"""


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalLit:
    value: Fraction


@dataclass(frozen=True)
class Param:
    name: str
    power: int = 1


@dataclass(frozen=True)
class X:
    power: int = 1


@dataclass(frozen=True)
class Dsmall:
    """(d/dx)^power"""
    power: int = 1


@dataclass(frozen=True)
class Dbig:
    """D^power with D = x d/dx"""
    power: int = 1


@dataclass(frozen=True)
class Sum:
    left: "OpExpr"
    right: "OpExpr"


@dataclass(frozen=True)
class Product:
    """left acting after right"""
    left: "OpExpr"
    right: "OpExpr"


@dataclass(frozen=True)
class Negate:
    operand: "OpExpr"


OpExpr = Union[RationalLit, Param, X, Dsmall, Dbig, Sum, Product, Negate]

_RESERVED = {"x": X, "d": Dsmall, "D": Dbig}


class _AstBuilder(Transformer):
    def rational(self, items):
        num = int(items[0])
        den = int(items[1]) if len(items) > 1 else 1
        if den == 0:
            raise ParseError("zero denominator", items[1].start_pos, ["UINT"])
        return RationalLit(Fraction(num, den))

    def symbol(self, items):
        name = str(items[0])
        power = int(items[1]) if len(items) > 1 else 1
        if name in _RESERVED:
            return _RESERVED[name](power)
        return Param(name, power)

    def negate(self, items):
        return Negate(items[0])

    def add(self, items):
        return Sum(items[0], items[1])

    def sub(self, items):
        return Sum(items[0], Negate(items[1]))

    def mul(self, items):
        return Product(items[0], items[1])


_PARSER = Lark(op_grammar, start="start", parser="lalr")
_NEGATIVE_POWER = re.compile(r"\^\s*-")


def _byte_offset(src: str, index: int) -> int:
    return len(src[:index].encode("utf-8"))


def parse_operator(src: str) -> OpExpr:
    """
    Parse operator source text into an OpExpr.

    Raises:
        NegativePower: a '^' followed by '-'
        ParseError: with the byte offset of the failure and the expected tokens
    """
    bad = _NEGATIVE_POWER.search(src)
    if bad:
        raise NegativePower(_byte_offset(src, bad.start()))
    try:
        tree = _PARSER.parse(src)
        result = _AstBuilder().transform(tree)
    except VisitError as exc:
        if isinstance(exc.orig_exc, EulerOdeError):
            raise exc.orig_exc
        raise
    except UnexpectedInput as exc:
        index = getattr(exc, "pos_in_stream", None)
        if isinstance(exc, UnexpectedEOF) or (
                isinstance(exc, UnexpectedToken) and exc.token.type == "$END"):
            index = len(src)
        if index is None:
            index = len(src)
        expected = getattr(exc, "expected", None) or getattr(exc, "allowed", None) or []
        raise ParseError("syntax error", _byte_offset(src, index), list(expected)) from None
    return result


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

def _power(base: str, power: int) -> str:
    return base if power == 1 else f"{base}^{power}"


def print_expr(e: OpExpr) -> str:
    """Source text that parses back to the same tree."""
    if isinstance(e, RationalLit):
        text = str(e.value)
        return f"({text})" if e.value < 0 else text
    if isinstance(e, Param):
        return _power(e.name, e.power)
    if isinstance(e, X):
        return _power("x", e.power)
    if isinstance(e, Dsmall):
        return _power("d", e.power)
    if isinstance(e, Dbig):
        return _power("D", e.power)
    if isinstance(e, Negate):
        inner = print_expr(e.operand)
        return f"-({inner})" if isinstance(e.operand, (Sum, Negate)) else f"-{inner}"
    if isinstance(e, Product):
        left = print_expr(e.left)
        right = print_expr(e.right)
        if isinstance(e.left, (Sum, Negate)):
            left = f"({left})"
        if isinstance(e.right, (Sum, Negate, Product)):
            right = f"({right})"
        return f"{left}*{right}"
    if isinstance(e, Sum):
        left = print_expr(e.left)
        if isinstance(e.right, Negate):
            inner = e.right.operand
            text = print_expr(inner)
            if isinstance(inner, (Sum, Negate)):
                text = f"({text})"
            return f"{left} - {text}"
        right = print_expr(e.right)
        if isinstance(e.right, Sum):
            right = f"({right})"
        return f"{left} + {right}"
    raise TypeError(f"not an operator expression: {e!r}")


# ---------------------------------------------------------------------------
# Elaboration
# ---------------------------------------------------------------------------

def parameters(e: OpExpr) -> Set[str]:
    if isinstance(e, Param):
        return {e.name}
    if isinstance(e, (Sum, Product)):
        return parameters(e.left) | parameters(e.right)
    if isinstance(e, Negate):
        return parameters(e.operand)
    return set()


def _check_bindings(e: OpExpr, bindings: Dict[str, Fraction], free: Optional[str]) -> None:
    unbound = parameters(e) - set(bindings)
    if free in unbound:
        unbound.discard(free)
        if unbound:
            raise TwoFreeParameters(sorted(unbound | {free}))
        return
    if len(unbound) > 1:
        raise TwoFreeParameters(sorted(unbound))
    if unbound:
        raise UnboundParameter(unbound.pop())


def _to_operator(e: OpExpr, bindings: Dict[str, Fraction]) -> LinDiffOp:
    if isinstance(e, RationalLit):
        return LinDiffOp.constant(e.value)
    if isinstance(e, Param):
        if e.name in bindings:
            return LinDiffOp.constant(Fraction(bindings[e.name]) ** e.power)
        return LinDiffOp.constant(ParamPoly.variable(e.name) ** e.power)
    if isinstance(e, X):
        return LinDiffOp.x(e.power)
    if isinstance(e, Dsmall):
        return LinDiffOp.d(e.power)
    if isinstance(e, Dbig):
        return LinDiffOp.euler() ** e.power
    if isinstance(e, Sum):
        return _to_operator(e.left, bindings) + _to_operator(e.right, bindings)
    if isinstance(e, Product):
        return _to_operator(e.left, bindings) * _to_operator(e.right, bindings)
    if isinstance(e, Negate):
        return -_to_operator(e.operand, bindings)
    raise TypeError(f"not an operator expression: {e!r}")


def elaborate(e: OpExpr, bindings: Optional[Dict[str, Fraction]] = None,
              free: Optional[str] = None) -> LinDiffOp:
    """
    Normal-ordered operator for e.

    Args:
        e: Parsed expression
        bindings: Rational values for parameters
        free: The one parameter left symbolic, if any

    Raises:
        UnboundParameter: a parameter is neither bound nor free
        TwoFreeParameters: more than one parameter would stay symbolic
    """
    bindings = {k: Fraction(v) for k, v in (bindings or {}).items()}
    _check_bindings(e, bindings, free)
    return _to_operator(e, bindings)


def operator_from_string(src: str, bindings: Optional[Dict[str, Fraction]] = None,
                         free: Optional[str] = None) -> LinDiffOp:
    return elaborate(parse_operator(src), bindings, free)


# ---------------------------------------------------------------------------
# Coefficient strings
# ---------------------------------------------------------------------------

_RATFUNC = re.compile(r"^\s*\((.*)\)\s*/\s*\((.*)\)\s*$")


def _to_scalar(e: OpExpr) -> CoeffField:
    if isinstance(e, RationalLit):
        return e.value
    if isinstance(e, Param):
        return ParamPoly.variable(e.name) ** e.power
    if isinstance(e, Sum):
        return _to_scalar(e.left) + _to_scalar(e.right)
    if isinstance(e, Product):
        return _to_scalar(e.left) * _to_scalar(e.right)
    if isinstance(e, Negate):
        return -_to_scalar(e.operand)
    raise ValidationError(f"{print_expr(e)} is an operator, not a coefficient")


def parse_coefficient(text: str, free: Optional[str] = None) -> CoeffField:
    """
    Read back a coefficient string: p/q, a polynomial in one parameter, or (num)/(den).

    When free is given, any parameter present must carry that name.
    """
    match = _RATFUNC.match(text)
    if match:
        num = _to_scalar(parse_operator(match.group(1)))
        den = _to_scalar(parse_operator(match.group(2)))
        value = num / den
    else:
        value = _to_scalar(parse_operator(text))
    name = param_name(value)
    if free is not None and name is not None and name != free:
        raise UnboundParameter(name)
    return value
