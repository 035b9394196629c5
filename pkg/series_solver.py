"""
Master Series Solver

This module builds series solutions y = sum_m (-1)^m [F(D)^-1 P]^m x^lambda
anchored on an indicial root lambda, the residual oracle that certifies them,
and exponential forms exp(T) applied to an anchor polynomial, including the
resummation of a master series into such a form.
"""

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Union

from algebra import CoeffField, GeneralizedSeries, as_coeff
from errors import (
    IndicialMismatch, MixedDegreeRemainder, NotResummable, Resonance, ResolventPole,
    ValidationError, ZeroEulerPart,
)
from operators import (
    EulerPoly, LinDiffOp, MonoOp, apply, degree_split, indicial_roots,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_ORDER = 64


@dataclass(frozen=True)
class Terminated:
    name = "terminated"

    def __str__(self) -> str:
        return "Terminated"


@dataclass(frozen=True)
class Truncated:
    order: int
    name = "truncated"

    def __str__(self) -> str:
        return f"Truncated({self.order})"


@dataclass
class SolveReport:
    """
    Outcome of master_solve.

    Args:
        solution: The series, coefficient of x^lambda normalized to 1
        status: Terminated() or Truncated(K)
        iterations_used: Number of F^-1 P applications performed
        resonances_hit: Offsets k where another indicial root sits at lambda + k
            but the source coefficient vanished there
    """
    solution: GeneralizedSeries
    status: Union[Terminated, Truncated]
    iterations_used: int
    resonances_hit: List[int] = field(default_factory=list)

    @property
    def terminated(self) -> bool:
        return isinstance(self.status, Terminated)


def invert_F(F: EulerPoly, s: GeneralizedSeries) -> GeneralizedSeries:
    """Divide the coefficient at offset k by F(lambda + k)."""
    out: Dict[int, CoeffField] = {}
    for k, c in s.terms.items():
        value = F.evaluate(s.base + k)
        if not value:
            raise Resonance(k)
        out[k] = c / value
    return GeneralizedSeries(s.base, out, s.truncation_order, s.descending)


def _remainder_direction(P: LinDiffOp) -> bool:
    """True when P lowers degree (descending series), False when it raises."""
    degs = P.degrees()
    if degs[0] < 0 < degs[-1]:
        raise MixedDegreeRemainder(degs)
    return degs[-1] < 0


def _other_roots(F: EulerPoly, lam: Fraction) -> List[Fraction]:
    if not F.is_rational():
        return []
    return [r for r in indicial_roots(F).roots if r != lam and (r - lam).denominator == 1]


def master_solve(op: LinDiffOp, lam, max_order: int = DEFAULT_MAX_ORDER) -> SolveReport:
    """
    Series solution of op y = 0 anchored on x^lam.

    Iterates t_{m+1} = -F^-1 P t_m from t_0 = x^lam. Terms whose offsets leave
    the window (k >= K for a raising P, k <= -K for a lowering P) are dropped;
    since P moves every term the same way, coefficients inside the window are
    exact.

    Args:
        op: The differential operator
        lam: An indicial root of the operator's Euler part
        max_order: Truncation order K

    Raises:
        IndicialMismatch: F(lam) != 0
        MixedDegreeRemainder: P both raises and lowers degree
        Resonance: F(lam + k) = 0 at an offset reached by the iteration
    """
    if max_order < 1:
        raise ValidationError(f"max_order must be >= 1, got {max_order}")
    start_time = time.time()
    lam = Fraction(lam)
    F, P = degree_split(op)
    if F.is_zero():
        raise ZeroEulerPart()
    value = F.evaluate(lam)
    if value:
        raise IndicialMismatch(lam, value)

    anchor = GeneralizedSeries.monomial(lam)
    if P.is_zero():
        return SolveReport(anchor, Terminated(), 0, [])

    descending = _remainder_direction(P)
    window = GeneralizedSeries.zero(lam, max_order, descending)

    terms: Dict[int, CoeffField] = {0: Fraction(1)}
    current = anchor
    dropped = False
    iterations = 0
    while not current.is_zero():
        image = apply(P, current)
        kept = {k: c for k, c in image.terms.items() if window.in_window(k)}
        if len(kept) < len(image.terms):
            dropped = True
        current = invert_F(F, GeneralizedSeries(lam, kept)).scaled(Fraction(-1))
        iterations += 1
        for k, c in current.terms.items():
            terms[k] = terms.get(k, Fraction(0)) + c

    if dropped:
        status: Union[Terminated, Truncated] = Truncated(max_order)
        solution = GeneralizedSeries(lam, terms, max_order, descending)
    else:
        status = Terminated()
        solution = GeneralizedSeries(lam, terms)

    reached = solution.offsets()
    resonances = []
    if reached:
        lo, hi = min(reached), max(reached)
        resonances = [int(r - lam) for r in _other_roots(F, lam) if lo <= r - lam <= hi]

    end_time = time.time()
    logger.info("master_solve from lambda=%s: %s after %d iterations in %.4f seconds",
                lam, status, iterations, end_time - start_time)
    return SolveReport(solution, status, iterations, resonances)


def residual(op: LinDiffOp, s: GeneralizedSeries) -> GeneralizedSeries:
    """
    op applied to s, restricted to the offsets unaffected by truncation.

    Zero on the whole window for every series master_solve returns.
    """
    return apply(op, s)


# ---------------------------------------------------------------------------
# Exponential forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Resolvent:
    """The operator 1/(D + shift): x^mu -> x^mu / (mu + shift)."""
    shift: Fraction

    degree = 0

    def act(self, s: GeneralizedSeries) -> GeneralizedSeries:
        out: Dict[int, CoeffField] = {}
        for k, c in s.terms.items():
            mu = s.base + k
            denom = mu + self.shift
            if denom == 0:
                raise ResolventPole(mu, self.shift)
            out[k] = c / denom
        return GeneralizedSeries(s.base, out, s.truncation_order, s.descending)


Factor = Union[LinDiffOp, MonoOp, Resolvent]


def _factor_degree(f: Factor) -> int:
    if isinstance(f, Resolvent):
        return 0
    if isinstance(f, MonoOp):
        return f.degree
    degs = f.degrees()
    if len(degs) != 1:
        raise ValidationError(f"exponential-form factor {f} is not homogeneous in degree")
    return degs[0]


def _act(f: Factor, s: GeneralizedSeries) -> GeneralizedSeries:
    if isinstance(f, Resolvent):
        return f.act(s)
    if isinstance(f, MonoOp):
        return apply(f.as_operator(), s)
    return apply(f, s)


@dataclass
class ExpForm:
    """
    exp(T) applied to an anchor, with T = scale * factors[0] ∘ ... ∘ factors[-1].

    The rightmost factor acts first. T must shift degree by a fixed nonzero
    amount; a lowering T on a polynomial anchor terminates, a raising one is
    truncated after ``order_cap`` applications.

    Args:
        factors: Homogeneous operators, single terms or resolvents
        anchor: Series T is exponentiated onto (usually x^lambda)
        scale: Overall scalar in front of the factor pipeline
    """
    factors: Sequence[Factor]
    anchor: GeneralizedSeries
    scale: CoeffField = Fraction(1)

    def __post_init__(self):
        self.scale = as_coeff(self.scale)
        if self.degree == 0:
            raise ValidationError("exponential-form generator must change degree")

    @property
    def degree(self) -> int:
        return sum(_factor_degree(f) for f in self.factors)

    def generator(self, s: GeneralizedSeries) -> GeneralizedSeries:
        """One application of T."""
        for f in reversed(self.factors):
            s = _act(f, s)
        return s.scaled(self.scale)

    def __str__(self) -> str:
        parts = []
        for f in self.factors:
            if isinstance(f, Resolvent):
                parts.append(f"1/(D + {f.shift})")
            elif isinstance(f, MonoOp):
                parts.append(f"({f.as_operator()})")
            else:
                parts.append(f"({f})")
        return f"exp[{self.scale} * {' '.join(parts)}] {self.anchor}"


def exp_apply(form: ExpForm, order_cap: int = DEFAULT_MAX_ORDER) -> GeneralizedSeries:
    """
    sum_m T^m / m! applied to the anchor, one application of T at a time.

    Raises:
        ResolventPole: a resolvent 1/(D + c) met x^mu with mu + c = 0
    """
    anchor = form.anchor.with_truncation(None)
    delta = form.degree
    terms: Dict[int, CoeffField] = dict(anchor.terms)
    current = anchor
    m = 0
    while not current.is_zero() and m < order_cap:
        m += 1
        current = form.generator(current).scaled(Fraction(1, m))
        for k, c in current.terms.items():
            terms[k] = terms.get(k, Fraction(0)) + c
    if current.is_zero() or not anchor.terms:
        return GeneralizedSeries(anchor.base, terms)
    # the first omitted power is T^(order_cap + 1)
    steps = delta * (order_cap + 1)
    if delta > 0:
        order = min(anchor.terms) + steps
        logger.info("exp_apply truncated after %d applications (window k < %d)", order_cap, order)
        return GeneralizedSeries(anchor.base, terms, order, False)
    order = -steps - max(anchor.terms)
    logger.info("exp_apply truncated after %d applications (window k > %d)", order_cap, -order)
    return GeneralizedSeries(anchor.base, terms, order, True)


def exp_form_from_operator(op: LinDiffOp, lam) -> ExpForm:
    """
    Resum the master series of op at lam into exp(T) x^lam.

    Requires P homogeneous of degree delta != 0 and F(D) = (D - lam) G(D) with
    G split over Q; then T = -(1/delta) G(D)^-1 P, G^-1 being a product of
    resolvents.
    """
    lam = Fraction(lam)
    F, P = degree_split(op)
    if F.is_zero():
        raise ZeroEulerPart()
    degs = P.degrees()
    if len(degs) != 1 or degs[0] == 0:
        raise NotResummable(f"remainder P = {P} is not homogeneous of nonzero degree")
    delta = degs[0]
    value = F.evaluate(lam)
    if value:
        raise IndicialMismatch(lam, value)
    G = F.divide_linear(lam)
    factors: List[Factor] = []
    if G.degree > 0:
        if not G.is_rational():
            raise NotResummable(f"G(D) = {G} depends on a parameter")
        data = indicial_roots(G)
        if data.irrational_count:
            raise NotResummable(f"G(D) = {G} does not split over Q")
        for root in data.roots:
            factors.extend([Resolvent(-root)] * data.multiplicities[root])
    factors.append(P)
    scale = Fraction(-1, delta) / G.leading_coefficient()
    return ExpForm(factors, GeneralizedSeries.monomial(lam), scale)
