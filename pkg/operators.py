"""
Linear Differential Operators

Normal-ordered operators sum c * x^a * (d/dx)^b, their action on generalized
series, and the split of an operator into its Euler part F(D) (the
degree-zero terms, D = x d/dx) and a remainder P of definite degrees.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from algebra import (
    CoeffField, GeneralizedSeries, as_coeff, eval_param, is_rational,
    param_name, root_multiplicities,
)
from errors import NonRationalEulerPart, ZeroEulerPart

logger = logging.getLogger(__name__)


def falling(mu, b: int) -> Fraction:
    """mu (mu - 1) ... (mu - b + 1)"""
    out = Fraction(1)
    mu = Fraction(mu)
    for i in range(b):
        out *= mu - i
    return out


@dataclass(frozen=True)
class MonoOp:
    """
    A single term coeff * x^xpow * d^dorder.

    Args:
        coeff: Nonzero scalar
        xpow: Power of x (a)
        dorder: Order of the derivative (b)
    """
    coeff: CoeffField
    xpow: int
    dorder: int

    def __post_init__(self):
        if self.xpow < 0 or self.dorder < 0:
            raise ValueError(f"negative power in x^{self.xpow} d^{self.dorder}")

    @property
    def degree(self) -> int:
        return self.xpow - self.dorder

    def as_operator(self) -> "LinDiffOp":
        return LinDiffOp({(self.xpow, self.dorder): self.coeff})


class LinDiffOp:
    """
    Operator in normal order: a map (a, b) -> coefficient of x^a d^b.

    Products are normal-ordered on construction by the rule
    (x^a d^b)(x^p d^q) = sum_i C(b, i) p^(i falling) x^(a+p-i) d^(b-i+q).
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Union[Mapping[Tuple[int, int], CoeffField], Iterable[MonoOp], None] = None):
        merged: Dict[Tuple[int, int], CoeffField] = {}
        if terms is None:
            items: Iterable = ()
        elif isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = (((m.xpow, m.dorder), m.coeff) for m in terms)
        for (a, b), c in items:
            if a < 0 or b < 0:
                raise ValueError(f"negative power in x^{a} d^{b}")
            merged[(a, b)] = merged.get((a, b), Fraction(0)) + as_coeff(c)
        self.terms: Dict[Tuple[int, int], CoeffField] = {
            key: merged[key] for key in sorted(merged) if merged[key]
        }

    # -- constructors -------------------------------------------------------

    @classmethod
    def x(cls, k: int = 1) -> "LinDiffOp":
        return cls({(k, 0): 1})

    @classmethod
    def d(cls, k: int = 1) -> "LinDiffOp":
        return cls({(0, k): 1})

    @classmethod
    def euler(cls) -> "LinDiffOp":
        return cls({(1, 1): 1})

    @classmethod
    def constant(cls, c) -> "LinDiffOp":
        return cls({(0, 0): c})

    # -- inspection ---------------------------------------------------------

    def monomials(self) -> List[MonoOp]:
        return [MonoOp(c, a, b) for (a, b), c in self.terms.items()]

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> List[int]:
        return sorted({a - b for a, b in self.terms})

    def min_degree(self) -> Optional[int]:
        degs = self.degrees()
        return degs[0] if degs else None

    def max_degree(self) -> Optional[int]:
        degs = self.degrees()
        return degs[-1] if degs else None

    def parameter(self) -> Optional[str]:
        names = {param_name(c) for c in self.terms.values()} - {None}
        return names.pop() if len(names) == 1 else None

    def evaluate_parameter(self, value) -> "LinDiffOp":
        return LinDiffOp({k: eval_param(c, value) for k, c in self.terms.items()})

    # -- algebra ------------------------------------------------------------

    def __add__(self, other: "LinDiffOp") -> "LinDiffOp":
        if not isinstance(other, LinDiffOp):
            return NotImplemented
        merged = dict(self.terms)
        for key, c in other.terms.items():
            merged[key] = merged.get(key, Fraction(0)) + c
        return LinDiffOp(merged)

    def __neg__(self) -> "LinDiffOp":
        return LinDiffOp({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "LinDiffOp") -> "LinDiffOp":
        if not isinstance(other, LinDiffOp):
            return NotImplemented
        return self + (-other)

    def scaled(self, c) -> "LinDiffOp":
        return LinDiffOp({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, LinDiffOp):
            try:
                return self.scaled(as_coeff(other))
            except (TypeError, ValueError):
                return NotImplemented
        out: Dict[Tuple[int, int], CoeffField] = {}
        for (a, b), c1 in self.terms.items():
            for (p, q), c2 in other.terms.items():
                c12 = c1 * c2
                for i in range(min(b, p) + 1):
                    weight = comb(b, i) * falling(p, i)
                    key = (a + p - i, b - i + q)
                    out[key] = out.get(key, Fraction(0)) + c12 * weight
        return LinDiffOp(out)

    def __rmul__(self, other):
        try:
            return self.scaled(as_coeff(other))
        except (TypeError, ValueError):
            return NotImplemented

    def __pow__(self, n: int) -> "LinDiffOp":
        result = LinDiffOp.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinDiffOp):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces: List[str] = []
        for (a, b), c in self.terms.items():
            factors = []
            if a:
                factors.append("x" if a == 1 else f"x^{a}")
            if b:
                factors.append("d" if b == 1 else f"d^{b}")
            negative = isinstance(c, Fraction) and c < 0
            mag = -c if negative else c
            if isinstance(mag, Fraction):
                if mag != 1 or not factors:
                    factors.insert(0, str(mag))
            else:
                factors.insert(0, f"({mag})")
            body = "*".join(factors)
            if not pieces:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f" - {body}" if negative else f" + {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"LinDiffOp({self})"


def _trim_coeffs(coeffs: Iterable) -> Tuple[CoeffField, ...]:
    out = [as_coeff(c) for c in coeffs]
    while out and not out[-1]:
        out.pop()
    return tuple(out)


class EulerPoly:
    """
    Polynomial F(D) in the Euler operator D = x d/dx.

    Args:
        coeffs: Coefficients a_0, a_1, ... (lowest power of D first)
    """

    __slots__ = ("coefficients",)

    def __init__(self, coeffs: Iterable = ()):
        self.coefficients: Tuple[CoeffField, ...] = _trim_coeffs(coeffs)

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> "EulerPoly":
        poly = cls((lead,))
        for r in roots:
            poly = poly * cls((-as_coeff(r), 1))
        return poly

    @classmethod
    def falling(cls, k: int) -> "EulerPoly":
        """D (D - 1) ... (D - k + 1), the Euler form of x^k d^k."""
        return cls.from_roots(range(k))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def is_rational(self) -> bool:
        return all(is_rational(c) for c in self.coefficients)

    def leading_coefficient(self) -> CoeffField:
        return self.coefficients[-1] if self.coefficients else Fraction(0)

    def evaluate(self, value) -> CoeffField:
        acc: CoeffField = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * value + c
        return acc

    def __add__(self, other: "EulerPoly") -> "EulerPoly":
        n = max(len(self.coefficients), len(other.coefficients))
        get = lambda p, i: p.coefficients[i] if i < len(p.coefficients) else Fraction(0)
        return EulerPoly(get(self, i) + get(other, i) for i in range(n))

    def __mul__(self, other: "EulerPoly") -> "EulerPoly":
        if not self.coefficients or not other.coefficients:
            return EulerPoly()
        out: List[CoeffField] = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] = out[i + j] + a * b
        return EulerPoly(out)

    def divide_linear(self, root) -> "EulerPoly":
        """Synthetic division by (D - root); the remainder must vanish."""
        root = as_coeff(root)
        high = list(reversed(self.coefficients))
        quotient: List[CoeffField] = []
        acc: CoeffField = Fraction(0)
        for c in high:
            acc = acc * root + c
            quotient.append(acc)
        remainder = quotient.pop() if quotient else Fraction(0)
        if remainder:
            raise ValueError(f"D - {root} does not divide {self}")
        return EulerPoly(reversed(quotient))

    def to_operator(self) -> LinDiffOp:
        """Expand sum a_n D^n into normal-ordered x^k d^k terms."""
        result = LinDiffOp()
        power = LinDiffOp.constant(1)
        euler = LinDiffOp.euler()
        for c in self.coefficients:
            result = result + power.scaled(c)
            power = power * euler
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, EulerPoly):
            return NotImplemented
        return self.coefficients == other.coefficients

    __hash__ = None

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        pieces: List[str] = []
        for n in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[n]
            if not c:
                continue
            negative = isinstance(c, Fraction) and c < 0
            mag = -c if negative else c
            var = "" if n == 0 else ("D" if n == 1 else f"D^{n}")
            if not isinstance(mag, Fraction):
                scalar = f"({mag})"
            elif mag == 1 and var:
                scalar = ""
            else:
                scalar = str(mag)
            body = "*".join(p for p in (scalar, var) if p)
            if not pieces:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f" - {body}" if negative else f" + {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"EulerPoly({self})"


@dataclass
class IndicialData:
    """Rational indicial roots plus the degree of F, so irrational roots are accounted for."""
    roots: List[Fraction]
    degree: int
    multiplicities: Dict[Fraction, int] = field(default_factory=dict)

    @property
    def irrational_count(self) -> int:
        return self.degree - sum(self.multiplicities.values())


def apply(op: LinDiffOp, s: GeneralizedSeries) -> GeneralizedSeries:
    """
    Apply op to a generalized series.

    c x^a d^b sends x^mu to c * mu(mu-1)...(mu-b+1) * x^(mu-b+a). For a
    truncated input the output window shrinks so that no coefficient inside
    it depends on the discarded tail: K + d_min ascending, K - d_max
    descending.
    """
    out: Dict[int, CoeffField] = {}
    for (a, b), c in op.terms.items():
        for k, v in s.terms.items():
            factor = falling(s.base + k, b)
            if factor == 0:
                continue
            key = k + a - b
            out[key] = out.get(key, Fraction(0)) + c * v * factor
    order = s.truncation_order
    if order is not None and not op.is_zero():
        order = order - op.max_degree() if s.descending else order + op.min_degree()
    return GeneralizedSeries(s.base, out, order, s.descending)


def degree_split(op: LinDiffOp) -> Tuple[EulerPoly, LinDiffOp]:
    """Split op into F(D) (its degree-zero terms) and the remainder P."""
    F = EulerPoly()
    rest: Dict[Tuple[int, int], CoeffField] = {}
    for (a, b), c in op.terms.items():
        if a == b:
            F = F + EulerPoly.falling(a) * EulerPoly((c,))
        else:
            rest[(a, b)] = c
    return F, LinDiffOp(rest)


def indicial_roots(F: EulerPoly) -> IndicialData:
    """
    Rational roots of F(lambda) = 0, sorted ascending.

    Raises:
        ZeroEulerPart: F is identically zero
        NonRationalEulerPart: a coefficient still depends on a parameter
    """
    if F.is_zero():
        raise ZeroEulerPart()
    coeffs = []
    for c in F.coefficients:
        if not is_rational(c):
            raise NonRationalEulerPart(c)
        coeffs.append(eval_param(c, 0))
    mult = root_multiplicities(coeffs)
    data = IndicialData(sorted(mult), F.degree, mult)
    if data.irrational_count:
        logger.info("F(D) = %s has %d root(s) outside Q", F, data.irrational_count)
    return data


def premultiply(op: LinDiffOp, k: int) -> LinDiffOp:
    """x^k composed on the left of op."""
    return LinDiffOp.x(k) * op


def differentiate_eq(op: LinDiffOp, times: int) -> LinDiffOp:
    """(d/dx)^times composed on the left of op."""
    if times == 0:
        return op
    return LinDiffOp.d(times) * op


def commutator(A: LinDiffOp, B: LinDiffOp) -> LinDiffOp:
    return A * B - B * A


def describe(op: LinDiffOp) -> str:
    """One-line summary 'F(D) = ...; P = ...' used in logs and emitted metadata."""
    F, P = degree_split(op)
    return f"F(D) = {F}; P = {P}"
