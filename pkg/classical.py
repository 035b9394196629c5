"""
Classical Differential Equations

This module provides a framework for the classical equations of mathematical
physics written in Euler-operator form: each family builds its operator,
its exponential closed form exp(T) x^lambda, and an independent oracle
(the standard three-term recurrence or power-series term ratio) so the
three can be cross-checked exactly.
"""

import logging
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import factorial
from typing import Dict, List, Optional, Tuple, Type

from algebra import CoeffField, GeneralizedSeries, as_coeff
from errors import InvalidParameter, MissingParameter, NotProportional, ValidationError
from operators import LinDiffOp, MonoOp, premultiply
from series_solver import (
    DEFAULT_MAX_ORDER, ExpForm, Resolvent, SolveReport, exp_apply, master_solve, residual,
)

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


class Family(Enum):
    HERMITE = "hermite"
    LAGUERRE = "laguerre"
    LEGENDRE = "legendre"
    GEGENBAUER = "gegenbauer"
    CHEBYSHEV_T = "chebyshev_t"
    CHEBYSHEV_U = "chebyshev_u"
    BESSEL = "bessel"
    KUMMER = "kummer"
    GAUSS = "gauss"


class Branch(Enum):
    ASCENDING = "ascending"
    DESCENDING = "descending"


@dataclass
class FamilySpec:
    """
    Which equation to build and with what parameters.

    Args:
        family: One of the Family members (or its string value)
        parameters: Map of parameter name to rational value
            (alpha, beta, gamma, lambda, nu as the family requires)
        n: Polynomial degree for the orthogonal-polynomial families
        branch: Kummer and Gauss only; ascending is the classical series at
            the origin, descending the x^(-alpha) / x^(-beta) expansion
    """
    family: Family
    parameters: Dict[str, Fraction] = field(default_factory=dict)
    n: Optional[int] = None
    branch: Branch = Branch.ASCENDING

    def __post_init__(self):
        self.family = Family(self.family)
        self.branch = Branch(self.branch)
        self.parameters = {k: Fraction(v) for k, v in self.parameters.items()}


@dataclass
class FamilyReport:
    """Cross-check of one family instance."""
    spec: FamilySpec
    operator: LinDiffOp
    master: SolveReport
    closed: GeneralizedSeries
    reference: GeneralizedSeries
    master_constant: CoeffField
    closed_constant: CoeffField
    residual_zero: bool


def _series_from_list(coeffs: List[Fraction]) -> GeneralizedSeries:
    return GeneralizedSeries(0, dict(enumerate(coeffs)))


def _poly_combine(*pairs: Tuple[CoeffField, List[Fraction]]) -> List[Fraction]:
    n = max(len(p) for _, p in pairs)
    out = [Fraction(0)] * n
    for scale, p in pairs:
        for i, c in enumerate(p):
            out[i] += scale * c
    return out


def _times_x(p: List[Fraction]) -> List[Fraction]:
    return [Fraction(0)] + list(p)


class ClassicalFamily(ABC):
    """
    Abstract base class for the classical equations.

    Subclasses declare their required parameters and implement the operator,
    the exponential closed form and the oracle.
    """

    family: Family
    required: Tuple[str, ...] = ()
    polynomial = True

    def __init__(self, spec: FamilySpec):
        self.spec = spec
        for name in self.required:
            if name not in spec.parameters:
                raise MissingParameter(self.family.value, name)
        if self.polynomial:
            if spec.n is None:
                raise MissingParameter(self.family.value, "n")
            if spec.n < 0:
                raise InvalidParameter(f"{self.family.value}: degree n must be >= 0, got {spec.n}")
        self.params = spec.parameters
        self.n = spec.n

    @abstractmethod
    def build_equation(self) -> LinDiffOp:
        """Return the operator of the equation, parameters substituted."""
        pass

    @abstractmethod
    def exp_form(self) -> ExpForm:
        """Return the exponential closed form exp(T) applied to its anchor."""
        pass

    @abstractmethod
    def oracle(self, order: int = DEFAULT_MAX_ORDER) -> GeneralizedSeries:
        """Return the standard reference solution (truncated at order when infinite)."""
        pass

    def solving_operator(self) -> LinDiffOp:
        """The operator master_solve runs on (premultiplied where needed)."""
        return self.build_equation()

    def anchor_exponent(self) -> Fraction:
        return Fraction(self.n)

    def leading_constant(self) -> Optional[CoeffField]:
        """Factor taking the C = 1 closed form to the standard normalization, if any."""
        return None

    def closed_form(self, order_cap: int = DEFAULT_MAX_ORDER) -> GeneralizedSeries:
        return exp_apply(self.exp_form(), order_cap)

    def normalized(self, order_cap: int = DEFAULT_MAX_ORDER) -> GeneralizedSeries:
        s = self.closed_form(order_cap)
        c = self.leading_constant()
        return s if c is None else s.scaled(c)

    def master(self, max_order: int = DEFAULT_MAX_ORDER) -> SolveReport:
        return master_solve(self.solving_operator(), self.anchor_exponent(), max_order)

    def solve(self, max_order: int = DEFAULT_MAX_ORDER, order_cap: Optional[int] = None) -> FamilyReport:
        """Run master_solve, the closed form and the oracle and cross-check them."""
        start_time = time.time()
        if order_cap is None:
            order_cap = max_order
        op = self.build_equation()
        report = self.master(max_order)
        closed = self.closed_form(order_cap)
        reference = self.oracle(max_order)
        master_constant = match_constant(report.solution, reference)
        closed_constant = match_constant(closed, reference)
        residual_zero = residual(op, closed).is_zero() and residual(op, report.solution).is_zero()
        end_time = time.time()
        logger.info("%s cross-checked in %.4f seconds", self.describe(), end_time - start_time)
        return FamilyReport(self.spec, op, report, closed, reference,
                            master_constant, closed_constant, residual_zero)

    def describe(self) -> str:
        bits = [f"{k}={v}" for k, v in sorted(self.params.items())]
        if self.n is not None:
            bits.insert(0, f"n={self.n}")
        if not self.polynomial and self.family in (Family.KUMMER, Family.GAUSS):
            bits.append(self.spec.branch.value)
        return f"{self.family.value}({', '.join(bits)})"


# ---------------------------------------------------------------------------
# Orthogonal polynomials
# ---------------------------------------------------------------------------

class HermiteFamily(ClassicalFamily):
    """x d/dx - n - (1/2) d^2/dx^2, solved by exp(-d^2/4) x^n."""

    family = Family.HERMITE

    def build_equation(self) -> LinDiffOp:
        return LinDiffOp({(1, 1): 1, (0, 0): -self.n, (0, 2): -HALF})

    def exp_form(self) -> ExpForm:
        return ExpForm([MonoOp(Fraction(-1, 4), 0, 2)], GeneralizedSeries.monomial(self.n))

    def leading_constant(self) -> CoeffField:
        return Fraction(2) ** self.n

    def oracle(self, order: int = DEFAULT_MAX_ORDER) -> GeneralizedSeries:
        prev, cur = [Fraction(1)], [Fraction(0), Fraction(2)]
        if self.n == 0:
            return _series_from_list(prev)
        for k in range(1, self.n):
            prev, cur = cur, _poly_combine((2, _times_x(cur)), (-2 * k, prev))
        return _series_from_list(cur)


class LaguerreFamily(ClassicalFamily):
    family = Family.LAGUERRE
    required = ("alpha",)

    def _generator(self) -> LinDiffOp:
        alpha = self.params["alpha"]
        return LinDiffOp({(1, 2): -1, (0, 1): -(alpha + 1)})

    def build_equation(self) -> LinDiffOp:
        return LinDiffOp({(1, 1): 1, (0, 0): -self.n}) + self._generator()

    def exp_form(self) -> ExpForm:
        return ExpForm([self._generator()], GeneralizedSeries.monomial(self.n))

    def leading_constant(self) -> CoeffField:
        return Fraction((-1) ** self.n, factorial(self.n))

    def oracle(self, order: int = DEFAULT_MAX_ORDER) -> GeneralizedSeries:
        alpha = self.params["alpha"]
        prev, cur = [Fraction(1)], [1 + alpha, Fraction(-1)]
        if self.n == 0:
            return _series_from_list(prev)
        for k in range(1, self.n):
            # (k+1) L_{k+1} = (2k + alpha + 1 - x) L_k - (k + alpha) L_{k-1}
            nxt = _poly_combine((2 * k + alpha + 1, cur), (-1, _times_x(cur)), (-(k + alpha), prev))
            prev, cur = cur, [c / (k + 1) for c in nxt]
        return _series_from_list(cur)


class _ResolventDsquared(ClassicalFamily):
    """Families with F(D) = (D - n)(D + n + shift) and P = -d^2."""

    def resolvent_shift(self) -> Fraction:
        raise NotImplementedError

    def exp_form(self) -> ExpForm:
        return ExpForm([Resolvent(self.resolvent_shift()), MonoOp(Fraction(1), 0, 2)],
                       GeneralizedSeries.monomial(self.n), -HALF)


class LegendreFamily(_ResolventDsquared):
    family = Family.LEGENDRE

    def build_equation(self) -> LinDiffOp:
        n = self.n
        return LinDiffOp({(2, 2): 1, (1, 1): 2, (0, 0): -n * (n + 1), (0, 2): -1})

    def resolvent_shift(self) -> Fraction:
        return Fraction(self.n + 1)

    def leading_constant(self) -> CoeffField:
        n = self.n
        return Fraction(factorial(2 * n), 2 ** n * factorial(n) ** 2)

    def oracle(self, order: int = DEFAULT_MAX_ORDER) -> GeneralizedSeries:
        prev, cur = [Fraction(1)], [Fraction(0), Fraction(1)]
        if self.n == 0:
            return _series_from_list(prev)
        for k in range(1, self.n):
            nxt = _poly_combine((2 * k + 1, _times_x(cur)), (-k, prev))
            prev, cur = cur, [c / (k + 1) for c in nxt]
        return _series_from_list(cur)


class GegenbauerFamily(_ResolventDsquared):
    family = Family.GEGENBAUER
    required = ("lambda",)

    def build_equation(self) -> LinDiffOp:
        n, lam = self.n, self.params["lambda"]
        return LinDiffOp({(2, 2): 1, (1, 1): 2 * lam + 1, (0, 0): -n * (n + 2 * lam), (0, 2): -1})

    def resolvent_shift(self) -> Fraction:
        return self.n + 2 * self.params["lambda"]

    def leading_constant(self) -> CoeffField:
        lam = self.params["lambda"]
        rising = Fraction(1)
        for i in range(self.n):
            rising *= lam + i
        return Fraction(2) ** self.n * rising / factorial(self.n)

    def oracle(self, order: int = DEFAULT_MAX_ORDER) -> GeneralizedSeries:
        lam = self.params["lambda"]
        prev, cur = [Fraction(1)], [Fraction(0), 2 * lam]
        if self.n == 0:
            return _series_from_list(prev)
        for k in range(2, self.n + 1):
            # k C_k = 2x (k + lam - 1) C_{k-1} - (k + 2 lam - 2) C_{k-2}
            nxt = _poly_combine((2 * (k + lam - 1), _times_x(cur)), (-(k + 2 * lam - 2), prev))
            prev, cur = cur, [c / k for c in nxt]
        return _series_from_list(cur)


class ChebyshevTFamily(_ResolventDsquared):
    family = Family.CHEBYSHEV_T

    def build_equation(self) -> LinDiffOp:
        return LinDiffOp({(2, 2): 1, (1, 1): 1, (0, 0): -self.n ** 2, (0, 2): -1})

    def resolvent_shift(self) -> Fraction:
        return Fraction(self.n)

    def leading_constant(self) -> CoeffField:
        return Fraction(1) if self.n == 0 else Fraction(2) ** (self.n - 1)

    def oracle(self, order: int = DEFAULT_MAX_ORDER) -> GeneralizedSeries:
        return _series_from_list(_chebyshev(self.n, [Fraction(0), Fraction(1)]))


class ChebyshevUFamily(_ResolventDsquared):
    family = Family.CHEBYSHEV_U

    def build_equation(self) -> LinDiffOp:
        n = self.n
        return LinDiffOp({(2, 2): 1, (1, 1): 3, (0, 0): -n * (n + 2), (0, 2): -1})

    def resolvent_shift(self) -> Fraction:
        return Fraction(self.n + 2)

    def leading_constant(self) -> CoeffField:
        return Fraction(2) ** self.n

    def oracle(self, order: int = DEFAULT_MAX_ORDER) -> GeneralizedSeries:
        return _series_from_list(_chebyshev(self.n, [Fraction(0), Fraction(2)]))


def _chebyshev(n: int, first: List[Fraction]) -> List[Fraction]:
    prev, cur = [Fraction(1)], first
    if n == 0:
        return prev
    for _ in range(1, n):
        prev, cur = cur, _poly_combine((2, _times_x(cur)), (-1, prev))
    return cur


# ---------------------------------------------------------------------------
# Non-polynomial families
# ---------------------------------------------------------------------------

def _ratio_series(base, ratio, order: int, step: int = 1, descending: bool = False,
                  first: CoeffField = Fraction(1)) -> GeneralizedSeries:
    """Series with c_0 = first and c_{j+1} = ratio(j) c_j at offset +-step*(j+1)."""
    sign = -1 if descending else 1
    terms: Dict[int, CoeffField] = {0: first}
    c = first
    j = 0
    while True:
        c = c * ratio(j)
        j += 1
        k = sign * step * j
        if not c:
            return GeneralizedSeries(base, terms)
        if (descending and k <= -order) or (not descending and k >= order):
            return GeneralizedSeries(base, terms, order, descending)
        terms[k] = c


class BesselFamily(ClassicalFamily):
    """
    x^2 d^2 + x d - nu^2 + x^2, ascending from x^nu.

    The closed form is exp[-1/(2(D + nu)) x^2] x^nu; ``printed_form`` keeps the
    pairing with the anchor x^(-nu), which does not solve the equation.
    """

    family = Family.BESSEL
    required = ("nu",)
    polynomial = False

    def __init__(self, spec: FamilySpec):
        super().__init__(spec)
        if self.params["nu"] < 0:
            raise InvalidParameter(f"bessel: nu must be >= 0, got {self.params['nu']}")

    @property
    def nu(self) -> Fraction:
        return self.params["nu"]

    def build_equation(self) -> LinDiffOp:
        return LinDiffOp({(2, 2): 1, (1, 1): 1, (0, 0): -self.nu ** 2, (2, 0): 1})

    def anchor_exponent(self) -> Fraction:
        return self.nu

    def exp_form(self) -> ExpForm:
        return ExpForm([Resolvent(self.nu), MonoOp(Fraction(1), 2, 0)],
                       GeneralizedSeries.monomial(self.nu), -HALF)

    def printed_form(self) -> ExpForm:
        return ExpForm([Resolvent(self.nu), MonoOp(Fraction(1), 2, 0)],
                       GeneralizedSeries.monomial(-self.nu), -HALF)

    def leading_constant(self) -> Optional[CoeffField]:
        if self.nu.denominator != 1:
            return None
        nu = int(self.nu)
        return Fraction(1, 2 ** nu * factorial(nu))

    def oracle(self, order: int = DEFAULT_MAX_ORDER) -> GeneralizedSeries:
        nu = self.nu
        first = self.leading_constant() or Fraction(1)
        return _ratio_series(nu, lambda k: Fraction(-1) / (4 * (k + 1) * (k + nu + 1)), order,
                             step=2, first=first)


class _BranchedFamily(ClassicalFamily):
    """Kummer and Gauss: a descending expansion and an x-premultiplied ascending one."""

    polynomial = False

    @property
    def ascending(self) -> bool:
        return self.spec.branch is Branch.ASCENDING

    def solving_operator(self) -> LinDiffOp:
        op = self.build_equation()
        return premultiply(op, 1) if self.ascending else op

    def leading_constant(self) -> Optional[CoeffField]:
        return Fraction(1) if self.ascending else None


class KummerFamily(_BranchedFamily):
    """Confluent hypergeometric equation D + alpha - x d^2 - gamma d."""

    family = Family.KUMMER
    required = ("alpha", "gamma")

    def _lowering(self) -> LinDiffOp:
        return LinDiffOp({(1, 2): -1, (0, 1): -self.params["gamma"]})

    def build_equation(self) -> LinDiffOp:
        return LinDiffOp({(1, 1): 1, (0, 0): self.params["alpha"]}) + self._lowering()

    def anchor_exponent(self) -> Fraction:
        return Fraction(0) if self.ascending else -self.params["alpha"]

    def exp_form(self) -> ExpForm:
        alpha, gamma = self.params["alpha"], self.params["gamma"]
        if self.ascending:
            raising = LinDiffOp({(2, 1): 1, (1, 0): alpha})
            return ExpForm([Resolvent(gamma - 1), raising], GeneralizedSeries.monomial(0))
        return ExpForm([self._lowering()], GeneralizedSeries.monomial(-alpha))

    def oracle(self, order: int = DEFAULT_MAX_ORDER) -> GeneralizedSeries:
        alpha, gamma = self.params["alpha"], self.params["gamma"]
        if self.ascending:
            return _ratio_series(0, lambda k: (alpha + k) / ((k + 1) * (gamma + k)), order)
        return _ratio_series(-alpha, lambda j: -(alpha + j) * (alpha + j + 1 - gamma) / (j + 1),
                             order, descending=True)


class GaussFamily(_BranchedFamily):
    """Gauss hypergeometric equation with F(D) = (D + alpha)(D + beta)."""

    family = Family.GAUSS
    required = ("alpha", "beta", "gamma")

    def build_equation(self) -> LinDiffOp:
        alpha, beta, gamma = (self.params[k] for k in ("alpha", "beta", "gamma"))
        return LinDiffOp({(2, 2): 1, (1, 1): alpha + beta + 1, (0, 0): alpha * beta,
                          (1, 2): -1, (0, 1): -gamma})

    def anchor_exponent(self) -> Fraction:
        return Fraction(0) if self.ascending else -self.params["beta"]

    def exp_form(self) -> ExpForm:
        alpha, beta, gamma = (self.params[k] for k in ("alpha", "beta", "gamma"))
        if self.ascending:
            raising = LinDiffOp({(3, 2): 1, (2, 1): alpha + beta + 1, (1, 0): alpha * beta})
            return ExpForm([Resolvent(gamma - 1), raising], GeneralizedSeries.monomial(0))
        lowering = LinDiffOp({(1, 2): 1, (0, 1): gamma})
        return ExpForm([Resolvent(alpha), lowering], GeneralizedSeries.monomial(-beta), Fraction(-1))

    def oracle(self, order: int = DEFAULT_MAX_ORDER) -> GeneralizedSeries:
        alpha, beta, gamma = (self.params[k] for k in ("alpha", "beta", "gamma"))
        if self.ascending:
            return _ratio_series(
                0, lambda k: (alpha + k) * (beta + k) / ((k + 1) * (gamma + k)), order)
        return _ratio_series(
            -beta, lambda j: (beta + j) * (beta - gamma + 1 + j) / ((j + 1) * (beta - alpha + 1 + j)),
            order, descending=True)


FAMILIES: Dict[Family, Type[ClassicalFamily]] = {
    Family.HERMITE: HermiteFamily,
    Family.LAGUERRE: LaguerreFamily,
    Family.LEGENDRE: LegendreFamily,
    Family.GEGENBAUER: GegenbauerFamily,
    Family.CHEBYSHEV_T: ChebyshevTFamily,
    Family.CHEBYSHEV_U: ChebyshevUFamily,
    Family.BESSEL: BesselFamily,
    Family.KUMMER: KummerFamily,
    Family.GAUSS: GaussFamily,
}


def make_family(spec: FamilySpec) -> ClassicalFamily:
    return FAMILIES[spec.family](spec)


def build_equation(spec: FamilySpec) -> LinDiffOp:
    return make_family(spec).build_equation()


def closed_form(spec: FamilySpec, order_cap: int = DEFAULT_MAX_ORDER) -> GeneralizedSeries:
    return make_family(spec).closed_form(order_cap)


def oracle(spec: FamilySpec, order: int = DEFAULT_MAX_ORDER) -> GeneralizedSeries:
    return make_family(spec).oracle(order)


def match_constant(computed: GeneralizedSeries, reference: GeneralizedSeries) -> CoeffField:
    """
    The scalar c with c * computed = reference on their common window.

    Raises:
        NotProportional: carrying the first offset (relative to the smaller
            base exponent) where the two disagree
    """
    base = min(computed.base, reference.base)
    a = computed.rebased(base)
    b = reference.rebased(base)
    keys = sorted(k for k in set(a.terms) | set(b.terms) if a.in_window(k) and b.in_window(k))
    pivot = next((k for k in keys if a.terms.get(k)), None)
    if pivot is None:
        raise ValidationError("cannot match a constant against a zero series")
    c = b.coefficient(pivot) / a.terms[pivot]
    if not c:
        raise NotProportional(pivot)
    for k in keys:
        if c * a.coefficient(k) != b.coefficient(k):
            raise NotProportional(k)
    return as_coeff(c)
