"""
Exact Scalar and Series Arithmetic

This module provides the coefficient field used by every other module:
rationals (``fractions.Fraction``), polynomials in one named parameter
(``ParamPoly``) and reduced rational functions in that parameter
(``ParamRatFunc``). It also provides ``GeneralizedSeries``, the
x^lambda-anchored sparse series the solvers produce.
"""

import logging
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import sympy

from errors import DivisionByZero, IncompatibleBase, ParameterMismatch, PoleAtValue, ValidationError

logger = logging.getLogger(__name__)

Coeffs = Tuple[Fraction, ...]

_ZERO: Coeffs = ()
_ONE: Coeffs = (Fraction(1),)


# ---------------------------------------------------------------------------
# Univariate kernels: coefficient tuples (lowest power first) <-> sympy.Poly
# ---------------------------------------------------------------------------

_T = sympy.Symbol("t")


def _rational(c) -> sympy.Rational:
    c = Fraction(c)
    return sympy.Rational(c.numerator, c.denominator)


def _fraction(r) -> Fraction:
    r = sympy.Rational(r)
    return Fraction(int(r.p), int(r.q))


def _poly(coeffs: Iterable) -> sympy.Poly:
    high_first = [_rational(c) for c in reversed(list(coeffs))]
    return sympy.Poly.from_list(high_first or [0], _T, domain="QQ")


def _coeffs(p: sympy.Poly) -> Coeffs:
    if p.is_zero:
        return _ZERO
    return tuple(_fraction(c) for c in reversed(p.all_coeffs()))


def _normalize(coeffs: Iterable) -> Coeffs:
    return _coeffs(_poly(coeffs))


def root_multiplicities(coeffs: Sequence) -> Dict[Fraction, int]:
    """
    Rational roots of a univariate polynomial with their multiplicities.

    Args:
        coeffs: Rational coefficients, lowest power first
    """
    poly = _poly(coeffs)
    if poly.degree() < 1:
        return {}
    return {_fraction(r): int(m) for r, m in poly.ground_roots().items()}


def rational_roots(coeffs: Sequence) -> List[Fraction]:
    """Distinct rational roots, sorted ascending."""
    return sorted(root_multiplicities(coeffs))


# ---------------------------------------------------------------------------
# Parametric scalars
# ---------------------------------------------------------------------------

class _ParamScalar:
    """Shared arithmetic for scalars depending on one named parameter."""

    name: str

    def _num(self) -> Coeffs:
        raise NotImplementedError

    def _den(self) -> Coeffs:
        raise NotImplementedError

    def __add__(self, other):
        return _binary(self, other, "+")

    def __radd__(self, other):
        return _binary(other, self, "+")

    def __sub__(self, other):
        return _binary(self, other, "-")

    def __rsub__(self, other):
        return _binary(other, self, "-")

    def __mul__(self, other):
        return _binary(self, other, "*")

    def __rmul__(self, other):
        return _binary(other, self, "*")

    def __truediv__(self, other):
        return _binary(self, other, "/")

    def __rtruediv__(self, other):
        return _binary(other, self, "/")

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result: "CoeffField" = Fraction(1)
        for _ in range(exponent):
            result = result * self
        return result

    def __neg__(self):
        return _make(self.name, -_poly(self._num()), _poly(self._den()))

    def __pos__(self):
        return self

    def __bool__(self) -> bool:
        return bool(self._num())

    def __eq__(self, other) -> bool:
        parts = _parts(other)
        if parts is None:
            return NotImplemented
        name, num, den = parts
        same = _poly(self._num()) * _poly(den) == _poly(num) * _poly(self._den())
        if not same:
            return False
        if name is None or name == self.name:
            return True
        # different parameters agree only on constants
        return len(num) <= 1 and len(self._num()) <= 1

    def __hash__(self) -> int:
        canon = _make(self.name, _poly(self._num()), _poly(self._den()))
        if isinstance(canon, Fraction):
            return hash(canon)
        return hash((canon.name, canon._num(), canon._den()))

    def evaluate(self, value) -> Fraction:
        return eval_param(self, value)


class ParamPoly(_ParamScalar):
    """
    Polynomial with rational coefficients in a single named parameter.

    Args:
        name: Parameter identifier, e.g. "E" or "beta"
        coeffs: Coefficients, lowest power first
    """

    __slots__ = ("name", "coefficients")

    def __init__(self, name: str, coeffs: Iterable = ()):
        self.name = name
        self.coefficients: Coeffs = _normalize(coeffs)

    @classmethod
    def variable(cls, name: str) -> "ParamPoly":
        return cls(name, (0, 1))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def _num(self) -> Coeffs:
        return self.coefficients

    def _den(self) -> Coeffs:
        return _ONE

    def __str__(self) -> str:
        return _poly_str(self.name, self.coefficients)

    def __repr__(self) -> str:
        return f"ParamPoly({self.name!r}, {str(self)!r})"


class ParamRatFunc(_ParamScalar):
    """
    Reduced quotient of two ParamPoly in the same parameter.

    The denominator is monic and coprime to the numerator; use the arithmetic
    operators or ``field_arith`` rather than building instances directly.
    """

    __slots__ = ("name", "numerator", "denominator")

    def __init__(self, name: str, numerator: ParamPoly, denominator: ParamPoly):
        if not denominator.coefficients:
            raise DivisionByZero()
        self.name = name
        self.numerator = numerator
        self.denominator = denominator

    def _num(self) -> Coeffs:
        return self.numerator.coefficients

    def _den(self) -> Coeffs:
        return self.denominator.coefficients

    def __str__(self) -> str:
        return f"({self.numerator})/({self.denominator})"

    def __repr__(self) -> str:
        return f"ParamRatFunc({self.name!r}, {str(self)!r})"


CoeffField = Union[Fraction, ParamPoly, ParamRatFunc]


def _poly_str(name: str, coeffs: Coeffs) -> str:
    if not coeffs:
        return "0"
    pieces: List[str] = []
    for power in range(len(coeffs) - 1, -1, -1):
        c = coeffs[power]
        if c == 0:
            continue
        mag = abs(c)
        if power == 0:
            body = str(mag)
        else:
            var = name if power == 1 else f"{name}^{power}"
            body = var if mag == 1 else f"{mag}*{var}"
        if not pieces:
            pieces.append(f"-{body}" if c < 0 else body)
        else:
            pieces.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(pieces)


def _parts(x) -> Optional[Tuple[Optional[str], Coeffs, Coeffs]]:
    if isinstance(x, bool):
        x = int(x)
    if isinstance(x, (int, Fraction)):
        return None, (Fraction(x),) if x else _ZERO, _ONE
    if isinstance(x, ParamPoly):
        return x.name, x.coefficients, _ONE
    if isinstance(x, ParamRatFunc):
        return x.name, x._num(), x._den()
    return None


def _make(name: Optional[str], num: sympy.Poly, den: sympy.Poly) -> CoeffField:
    """Reduce num/den and demote to the simplest representation."""
    if den.is_zero:
        raise DivisionByZero()
    if num.is_zero:
        return Fraction(0)
    g = num.gcd(den)
    if g.degree() > 0:
        num = num.div(g)[0]
        den = den.div(g)[0]
    lead = den.LC()
    num = num * sympy.Poly(1 / lead, _T, domain="QQ")
    den = den.monic()
    if den.degree() == 0:
        if num.degree() == 0 or name is None:
            return _fraction(num.LC())
        return ParamPoly(name, _coeffs(num))
    return ParamRatFunc(name, ParamPoly(name, _coeffs(num)), ParamPoly(name, _coeffs(den)))


def _binary(a, b, op: str):
    pa = _parts(a)
    pb = _parts(b)
    if pa is None or pb is None:
        return NotImplemented
    na, an, ad = pa
    nb, bn, bd = pb
    if na is not None and nb is not None and na != nb:
        # constants written in another parameter's type are still fine
        if len(an) > 1 or len(ad) > 1:
            if len(bn) > 1 or len(bd) > 1:
                raise ParameterMismatch(na, nb)
            nb = na
        else:
            na = nb
    name = na or nb
    pa_n, pa_d, pb_n, pb_d = (_poly(c) for c in (an, ad, bn, bd))
    if op == "+":
        num, den = pa_n * pb_d + pb_n * pa_d, pa_d * pb_d
    elif op == "-":
        num, den = pa_n * pb_d - pb_n * pa_d, pa_d * pb_d
    elif op == "*":
        num, den = pa_n * pb_n, pa_d * pb_d
    elif op == "/":
        if not bn:
            raise DivisionByZero()
        num, den = pa_n * pb_d, pa_d * pb_n
    else:
        raise ValueError(f"unknown operator {op!r}")
    return _make(name, num, den)


_OPS = {"+": "+", "-": "-", "*": "*", "/": "/", "−": "-", "×": "*", "÷": "/"}


def as_coeff(value) -> CoeffField:
    """Coerce ints and strings like "3/4" to Fraction; pass parametric values through."""
    if isinstance(value, (ParamPoly, ParamRatFunc)):
        return _make(value.name, _poly(value._num()), _poly(value._den()))
    return Fraction(value)


def field_arith(a, b, op: str) -> CoeffField:
    """
    Exact a op b in the coefficient field.

    Args:
        a, b: Rationals or values in one named parameter
        op: One of + - * / (the symbols − × ÷ are accepted too)
    """
    if op not in _OPS:
        raise ValueError(f"unknown operator {op!r}")
    result = _binary(as_coeff(a), as_coeff(b), _OPS[op])
    if isinstance(result, (int, Fraction)):
        return Fraction(result)
    return result


def eval_param(c, value) -> Fraction:
    """Substitute a rational value for the parameter of c."""
    value = Fraction(value)
    if isinstance(c, (int, Fraction)):
        return Fraction(c)
    num = _fraction(_poly(c._num()).eval(_rational(value)))
    den = _fraction(_poly(c._den()).eval(_rational(value)))
    if den == 0:
        raise PoleAtValue(c.name, value)
    return num / den


def param_name(c) -> Optional[str]:
    if isinstance(c, (ParamPoly, ParamRatFunc)):
        return c.name
    return None


def is_rational(c) -> bool:
    return isinstance(c, (int, Fraction)) or (
        isinstance(c, _ParamScalar) and len(c._num()) <= 1 and len(c._den()) <= 1
    )


def coeff_str(c) -> str:
    if isinstance(c, (int, Fraction)):
        return str(Fraction(c))
    return str(c)


def coeff_poly(c) -> Coeffs:
    """Coefficient tuple of a polynomial-valued scalar (rationals give a constant)."""
    if isinstance(c, (int, Fraction)):
        return _normalize((c,))
    if len(c._den()) > 1:
        raise ValidationError(f"{c} is not a polynomial in {c.name}")
    return c._num()


# ---------------------------------------------------------------------------
# Generalized series
# ---------------------------------------------------------------------------

class GeneralizedSeries:
    """
    x^base times a finite sparse sum of c_k x^k over integer offsets k.

    Args:
        base: Base exponent lambda (rational)
        terms: Mapping offset -> coefficient; zeros are dropped
        truncation_order: None for an exact (finite) series, otherwise K.
            Ascending series keep offsets k < K, descending ones k > -K.
        descending: Direction of the truncated tail
    """

    __slots__ = ("base", "terms", "truncation_order", "descending")

    def __init__(self, base, terms: Optional[Mapping[int, CoeffField]] = None,
                 truncation_order: Optional[int] = None, descending: bool = False):
        self.base = Fraction(base)
        self.truncation_order = truncation_order
        self.descending = descending
        kept: Dict[int, CoeffField] = {}
        for k in sorted(terms or {}):
            c = terms[k]
            if not c or not self.in_window(k):
                continue
            kept[int(k)] = as_coeff(c)
        self.terms = kept

    @classmethod
    def monomial(cls, base, coeff=1) -> "GeneralizedSeries":
        return cls(base, {0: coeff})

    @classmethod
    def zero(cls, base=0, truncation_order: Optional[int] = None,
             descending: bool = False) -> "GeneralizedSeries":
        return cls(base, {}, truncation_order, descending)

    @property
    def is_exact(self) -> bool:
        return self.truncation_order is None

    def in_window(self, k: int) -> bool:
        if self.truncation_order is None:
            return True
        if self.descending:
            return k > -self.truncation_order
        return k < self.truncation_order

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, k: int) -> CoeffField:
        return self.terms.get(k, Fraction(0))

    def offsets(self) -> List[int]:
        return sorted(self.terms)

    def degree(self) -> Optional[int]:
        """Largest offset carrying a nonzero coefficient."""
        return max(self.terms) if self.terms else None

    def leading_coefficient(self) -> CoeffField:
        return self.terms[max(self.terms)] if self.terms else Fraction(0)

    def map(self, fn: Callable[[CoeffField], CoeffField]) -> "GeneralizedSeries":
        return GeneralizedSeries(self.base, {k: fn(c) for k, c in self.terms.items()},
                                 self.truncation_order, self.descending)

    def scaled(self, c) -> "GeneralizedSeries":
        return self.map(lambda v: v * c)

    def evaluate(self, value) -> "GeneralizedSeries":
        """Bind the free parameter of every coefficient to a rational value."""
        return self.map(lambda v: eval_param(v, value))

    def with_truncation(self, truncation_order: Optional[int],
                        descending: Optional[bool] = None) -> "GeneralizedSeries":
        return GeneralizedSeries(self.base, self.terms, truncation_order,
                                 self.descending if descending is None else descending)

    def rebased(self, base) -> "GeneralizedSeries":
        """Re-anchor on a smaller base exponent that differs by an integer."""
        base = Fraction(base)
        gap = self.base - base
        if gap.denominator != 1:
            raise IncompatibleBase(self.base, base)
        shift = int(gap)
        if shift == 0:
            return self
        order = self.truncation_order
        if order is not None:
            order = order - shift if self.descending else order + shift
        return GeneralizedSeries(base, {k + shift: c for k, c in self.terms.items()},
                                 order, self.descending)

    def parameter(self) -> Optional[str]:
        names = {param_name(c) for c in self.terms.values()} - {None}
        return names.pop() if len(names) == 1 else None

    def __add__(self, other: "GeneralizedSeries") -> "GeneralizedSeries":
        return series_combine(self, other, Fraction(1))

    def __sub__(self, other: "GeneralizedSeries") -> "GeneralizedSeries":
        return series_combine(self, other, Fraction(-1))

    def __neg__(self) -> "GeneralizedSeries":
        return self.scaled(Fraction(-1))

    def __eq__(self, other) -> bool:
        if not isinstance(other, GeneralizedSeries):
            return NotImplemented
        return (self.base == other.base and self.terms == other.terms
                and self.truncation_order == other.truncation_order
                and (self.truncation_order is None or self.descending == other.descending))

    __hash__ = None

    def __str__(self) -> str:
        if not self.terms:
            body = "0"
        else:
            pieces = []
            for k in sorted(self.terms, reverse=True):
                pieces.append(_term_str(self.terms[k], self.base + k))
            body = " + ".join(pieces).replace("+ -", "- ")
        if self.truncation_order is None:
            return body
        edge = self.base - self.truncation_order if self.descending else self.base + self.truncation_order
        return f"{body} + O({_power_str(edge)})"

    def __repr__(self) -> str:
        return f"GeneralizedSeries({self})"


def _power_str(exponent: Fraction) -> str:
    if exponent == 1:
        return "x"
    if exponent.denominator == 1 and exponent >= 0:
        return f"x^{exponent}"
    return f"x^({exponent})"


def _term_str(c: CoeffField, exponent: Fraction) -> str:
    if exponent == 0:
        return coeff_str(c)
    mono = _power_str(exponent)
    if isinstance(c, Fraction):
        if c == 1:
            return mono
        if c == -1:
            return f"-{mono}"
        return f"{c}*{mono}"
    return f"({c})*{mono}"


def series_combine(s1: GeneralizedSeries, s2: GeneralizedSeries, scale) -> GeneralizedSeries:
    """
    Return s1 + scale*s2 anchored on the smaller base exponent.

    The result is truncated at the tighter of the two windows; an exact
    operand does not constrain the window.
    """
    gap = s1.base - s2.base
    if gap.denominator != 1:
        raise IncompatibleBase(s1.base, s2.base)
    base = min(s1.base, s2.base)
    a = s1.rebased(base)
    b = s2.rebased(base)
    if not a.is_exact and not b.is_exact and a.descending != b.descending:
        raise ValidationError("cannot combine ascending and descending truncated series")
    if a.is_exact:
        order, descending = b.truncation_order, b.descending
    elif b.is_exact:
        order, descending = a.truncation_order, a.descending
    else:
        order, descending = min(a.truncation_order, b.truncation_order), a.descending
    terms: Dict[int, CoeffField] = dict(a.terms)
    for k, c in b.terms.items():
        terms[k] = terms.get(k, Fraction(0)) + scale * c
    return GeneralizedSeries(base, terms, order, descending)
