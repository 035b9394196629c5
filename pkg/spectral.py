"""
Spectral Problems

This module applies the series method to eigenvalue problems: quantization
of the harmonic oscillator, the quasi-exactly solvable sextic oscillator
(spectrum from a termination polynomial in E) and the ground-state energy
of the x^4 + x^6 anharmonic oscillator from a three-term matching of the
series against exp(-mu x^2 - nu x^4).
"""

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import bisect

from algebra import (
    CoeffField, GeneralizedSeries, ParamPoly, coeff_poly, root_multiplicities,
)
from errors import (
    ComplexIntermediate, InvalidParameter, NonRationalRoot, ResidualNonzero, ValidationError,
)
from operators import LinDiffOp
from series_solver import DEFAULT_MAX_ORDER, master_solve, residual

logger = logging.getLogger(__name__)

ENERGY = "E"
CUBIC_TOLERANCE = 1e-10


def _energy(energy) -> CoeffField:
    return ParamPoly.variable(ENERGY) if energy is None else Fraction(energy)


# ---------------------------------------------------------------------------
# Harmonic oscillator
# ---------------------------------------------------------------------------

def oscillator_operator(energy=None) -> LinDiffOp:
    """x^2 [d^2 + 2E - x^2]; symbolic E when energy is None."""
    E = _energy(energy)
    return LinDiffOp({(2, 2): 1, (2, 0): 2 * E, (4, 0): -1})


def gauge_reduced_oscillator(alpha) -> LinDiffOp:
    """D - alpha - (1/2) d^2, the oscillator after removing exp(-x^2/2)."""
    return LinDiffOp({(1, 1): 1, (0, 0): -Fraction(alpha), (0, 2): Fraction(-1, 2)})


def oscillator_series(K: int = DEFAULT_MAX_ORDER, lam: int = 0, energy=None) -> GeneralizedSeries:
    """
    Power series of the oscillator from the indicial root lam (0 even, 1 odd).

    With energy None the coefficients are polynomials in E.
    """
    if K < 2:
        raise ValidationError(f"K must be >= 2, got {K}")
    if lam not in (0, 1):
        raise ValidationError(f"oscillator indicial roots are 0 and 1, got {lam}")
    return master_solve(oscillator_operator(energy), lam, K).solution


def oscillator_terminates(alpha, max_order: int = DEFAULT_MAX_ORDER) -> bool:
    """Whether the gauge-reduced series from x^alpha is a polynomial."""
    return master_solve(gauge_reduced_oscillator(alpha), alpha, max_order).terminated


def oscillator_quantize(n: int) -> Fraction:
    """E_n = n + 1/2, certified by a terminating zero-residual polynomial."""
    if n < 0:
        raise InvalidParameter(f"n must be >= 0, got {n}")
    op = gauge_reduced_oscillator(n)
    report = master_solve(op, n)
    if not report.terminated or not residual(op, report.solution).is_zero():
        raise ResidualNonzero(residual(op, report.solution), f"oscillator level {n}")
    return n + Fraction(1, 2)


# ---------------------------------------------------------------------------
# Quasi-exactly solvable sextic oscillator
# ---------------------------------------------------------------------------

@dataclass
class QesResult:
    """
    Closed-form part of the sextic spectrum for V = alpha x^2 + gamma x^6.

    Args:
        n: Degree of the polynomial factor
        g: Coupling sqrt(gamma)
        termination_poly: Coefficient of x^(n+2) as a polynomial in E
        spectrum: Rational roots of termination_poly, ascending
        eigenfunctions: (E, polynomial factor) pairs
        alpha, gamma: Potential couplings, alpha = -(2n + 3) g and gamma = g^2
        b: Gauge exponent in exp(-b x^4), b = g / 4
    """
    n: int
    g: Fraction
    termination_poly: ParamPoly
    spectrum: List[Fraction]
    eigenfunctions: List[Tuple[Fraction, GeneralizedSeries]]
    alpha: Fraction
    gamma: Fraction
    b: Fraction
    gauge: str = ""

    def __post_init__(self):
        if not self.gauge:
            self.gauge = f"exp(-{self.b}*x^4)"


def sextic_operator(n: int, g, energy=None) -> LinDiffOp:
    """x^2 d^2 + E x^2 + 2 n g x^4 - 2 g x^5 d, the gauge-reduced sextic equation."""
    g = Fraction(g)
    E = _energy(energy)
    return LinDiffOp({(2, 2): 1, (2, 0): E, (4, 0): 2 * n * g, (5, 1): -2 * g})


def sextic_qes(n: int, g, K: Optional[int] = None) -> QesResult:
    """
    Solvable levels of the sextic oscillator with a degree-n polynomial factor.

    Raises:
        NonRationalRoot: the termination polynomial does not split over Q
        ResidualNonzero: an assembled eigenfunction fails its equation
    """
    start_time = time.time()
    g = Fraction(g)
    if n < 0:
        raise InvalidParameter(f"n must be >= 0, got {n}")
    if g <= 0:
        raise InvalidParameter(f"g must be positive, got {g}")
    lam = n % 2
    offset = n + 2 - lam
    if K is None:
        K = n + 12
    if K <= offset:
        raise ValidationError(f"K = {K} does not reach the termination coefficient x^{n + 2}")

    op = sextic_operator(n, g)
    series = master_solve(op, lam, K).solution
    tpoly = ParamPoly(ENERGY, coeff_poly(series.coefficient(offset)))
    mult = root_multiplicities(tpoly.coefficients)
    spectrum = sorted(mult)
    if sum(mult.values()) < tpoly.degree:
        raise NonRationalRoot(tpoly, spectrum)

    eigenfunctions = []
    for E0 in spectrum:
        bound = series.evaluate(E0)
        tail = [k for k in bound.terms if k >= offset]
        if tail:
            raise ResidualNonzero(bound, f"E = {E0}: coefficient at x^{lam + min(tail)} survives")
        psi = GeneralizedSeries(lam, bound.terms).rebased(0)
        if psi.degree() != n:
            raise ResidualNonzero(psi, f"E = {E0}: polynomial degree {psi.degree()} != {n}")
        check = residual(sextic_operator(n, g, E0), psi)
        if not check.is_zero():
            raise ResidualNonzero(check, f"sextic n={n}, E={E0}")
        eigenfunctions.append((E0, psi))

    end_time = time.time()
    logger.info("sextic n=%d g=%s: spectrum %s in %.4f seconds",
                n, g, [str(e) for e in spectrum], end_time - start_time)
    return QesResult(n, g, tpoly, spectrum, eigenfunctions,
                     alpha=-(2 * n + 3) * g, gamma=g * g, b=g / 4)


# ---------------------------------------------------------------------------
# Anharmonic oscillator
# ---------------------------------------------------------------------------

@dataclass
class AnharmonicResult:
    """
    Approximate ground state of x^2 d^2 + E x^2 - alpha x^4 - beta x^6.

    E0, mu and nu are floats; everything upstream of the cubic is exact.
    """
    alpha: Fraction
    beta: Fraction
    series: GeneralizedSeries
    cubic: ParamPoly
    E0: float
    mu: float
    nu: float
    method: str
    complex_intermediate: bool = False
    closed_form_root: Optional[float] = None
    bisection_root: Optional[float] = None
    real_roots: List[float] = field(default_factory=list)


def anharmonic_operator(alpha, beta, energy=None) -> LinDiffOp:
    E = _energy(energy)
    return LinDiffOp({(2, 2): 1, (2, 0): E, (4, 0): -Fraction(alpha), (6, 0): -Fraction(beta)})


def matching_cubic(series: GeneralizedSeries) -> ParamPoly:
    """
    Monic relation in E from matching x^2, x^4, x^6 with exp(-mu x^2 - nu x^4).

    mu = -c2, nu = mu^2/2 - c4, and the x^6 condition mu nu - mu^3/6 = c6.
    """
    c2, c4, c6 = (series.coefficient(k) for k in (2, 4, 6))
    mu = -c2
    nu = mu * mu / 2 - c4
    relation = mu * nu - mu ** 3 / 6 - c6
    coeffs = coeff_poly(relation)
    lead = coeffs[-1]
    return ParamPoly(ENERGY, [c / lead for c in coeffs])


def _cubic(alpha: float, beta: float):
    return lambda e: e ** 3 - alpha * e - 1.5 * beta


def _closed_form_root(alpha: float, beta: float) -> Tuple[float, bool]:
    """Cube-root formula; complex arithmetic when the discriminant is negative."""
    disc = 1640.25 * beta ** 2 - 108.0 * alpha ** 3
    two_third = np.cbrt(2.0)
    if disc >= 0:
        A = np.cbrt(40.5 * beta + np.sqrt(disc))
        if A == 0:
            return 0.0, False
        return float(two_third * alpha / A + A / (3 * two_third)), False
    z = np.complex128(40.5 * beta + 1j * np.sqrt(-disc))
    A = np.power(z, 1.0 / 3.0)
    root = two_third * alpha / A + A / (3 * two_third)
    return float(root.real), True


def _largest_root_bisection(alpha: float, beta: float) -> float:
    lo = np.sqrt(alpha / 3.0) if alpha > 0 else 0.0
    hi = 1.0 + max(abs(alpha), 1.5 * beta)
    return float(bisect(_cubic(alpha, beta), lo, hi, xtol=1e-15, maxiter=500))


def real_cubic_roots(alpha, beta) -> List[float]:
    roots = np.roots([1.0, 0.0, -float(alpha), -1.5 * float(beta)])
    return sorted(float(r.real) for r in roots if abs(r.imag) < 1e-9)


def anharmonic_approx(alpha, beta, K: int = 8) -> AnharmonicResult:
    """
    Ground-state energy estimate E0, the largest real root of E^3 - alpha E = 3 beta / 2.

    Raises:
        ComplexIntermediate: beta = 0, where the cube-root formula needs
            complex arithmetic and no root is singled out
    """
    alpha = Fraction(alpha)
    beta = Fraction(beta)
    if K < 7:
        raise ValidationError(f"K must be >= 7 to reach x^6, got {K}")
    if beta < 0:
        raise InvalidParameter(f"beta must be >= 0, got {beta}")

    series = master_solve(anharmonic_operator(alpha, beta), 0, K).solution
    cubic = matching_cubic(series)
    expected = ParamPoly(ENERGY, (-Fraction(3, 2) * beta, -alpha, 0, 1))
    if cubic != expected:
        raise ResidualNonzero(cubic, "anharmonic matching relation")

    a, b = float(alpha), float(beta)
    if beta == 0:
        raise ComplexIntermediate(
            f"beta = 0: E^3 = {alpha} E has no distinguished root", real_cubic_roots(alpha, beta))

    closed, complex_intermediate = _closed_form_root(a, b)
    bis = _largest_root_bisection(a, b)
    if abs(closed - bis) > CUBIC_TOLERANCE:
        logger.warning("closed form %.17g and bisection %.17g disagree", closed, bis)
    if complex_intermediate:
        method, E0 = "bisection", bis
    else:
        method, E0 = "closed_form", closed
    if abs(_cubic(a, b)(E0)) >= CUBIC_TOLERANCE:
        E0 = bis
        method = "bisection"
    logger.info("anharmonic alpha=%s beta=%s: E0=%.12g by %s", alpha, beta, E0, method)
    return AnharmonicResult(alpha, beta, series, cubic, E0, E0 / 2, (E0 ** 2 - a) / 12, method,
                            complex_intermediate, closed, bis, real_cubic_roots(alpha, beta))
