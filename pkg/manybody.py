"""
Many-Body Symmetric Polynomials

This module works in the gauge-reduced polynomial sector of the Sutherland
and Calogero-Sutherland-Moser models. Operators act on symmetric
polynomials in N variables; the singular pair terms are evaluated by
forming an antisymmetric polynomial and dividing it exactly by
(z_i - z_j). Jack polynomials come from a triangular solve in the monomial
symmetric basis, CSM eigenstates from exp(-A/2) applied to m_lambda.
"""

import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Dict, List, Optional, Tuple

import numpy as np

from algebra import CoeffField, ParamPoly, as_coeff, coeff_str, eval_param
from errors import (
    DegenerateEigenvalue, NotDivisible, NotTriangular, ResidualNonzero, TooManyParts,
    ValidationError,
)

logger = logging.getLogger(__name__)

BETA = "beta"

Exponent = Tuple[int, ...]
Terms = Dict[Exponent, CoeffField]


def symbolic_beta() -> ParamPoly:
    return ParamPoly.variable(BETA)


# ---------------------------------------------------------------------------
# Partitions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Partition:
    """Weakly decreasing parts with trailing zeros trimmed."""
    parts: Tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p < 0 for p in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise ValidationError(f"{parts} is not a partition")
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        return cls(tuple(parts))

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def padded(self, N: int) -> Exponent:
        if self.length > N:
            raise TooManyParts(self.parts, N)
        return self.parts + (0,) * (N - self.length)

    def dominates(self, other: "Partition") -> bool:
        """True when other <= self in dominance order (equal weights assumed)."""
        n = max(self.length, other.length)
        a = self.parts + (0,) * (n - self.length)
        b = other.parts + (0,) * (n - other.length)
        sa = sb = 0
        for x, y in zip(a, b):
            sa += x
            sb += y
            if sb > sa:
                return False
        return sa == sb

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.parts) + ")"


def partitions(weight: int, N: int) -> List[Partition]:
    """Partitions of weight with at most N parts, reverse lexicographic (largest first)."""
    out: List[Partition] = []

    def build(remaining: int, cap: int, prefix: Tuple[int, ...]) -> None:
        if remaining == 0:
            out.append(Partition(prefix))
            return
        if len(prefix) == N:
            return
        for part in range(min(remaining, cap), 0, -1):
            build(remaining - part, part, prefix + (part,))

    build(weight, weight, ())
    return out


# ---------------------------------------------------------------------------
# Polynomial kernels on exponent dictionaries
# ---------------------------------------------------------------------------

def _add_into(out: Terms, key: Exponent, c: CoeffField) -> None:
    value = out.get(key, Fraction(0)) + c
    if value:
        out[key] = value
    else:
        out.pop(key, None)


def _clean(terms: Terms) -> Terms:
    return {k: terms[k] for k in sorted(terms) if terms[k]}


def _combine(a: Terms, b: Terms, scale: CoeffField = Fraction(1)) -> Terms:
    out = dict(a)
    for k, c in b.items():
        _add_into(out, k, scale * c)
    return out


def _scale(a: Terms, c: CoeffField) -> Terms:
    return _clean({k: v * c for k, v in a.items()})


def _euler(a: Terms, i: int) -> Terms:
    """z_i d/dz_i"""
    return _clean({k: v * k[i] for k, v in a.items()})


def _partial(a: Terms, i: int) -> Terms:
    out: Terms = {}
    for k, v in a.items():
        if k[i]:
            key = k[:i] + (k[i] - 1,) + k[i + 1:]
            _add_into(out, key, v * k[i])
    return out


def _times_sum(a: Terms, i: int, j: int) -> Terms:
    """(z_i + z_j) * a"""
    out: Terms = {}
    for k, v in a.items():
        for idx in (i, j):
            key = k[:idx] + (k[idx] + 1,) + k[idx + 1:]
            _add_into(out, key, v)
    return out


def pair_divide(p: Terms, i: int, j: int) -> Terms:
    """
    Exact quotient q with (z_i - z_j) q = p.

    Repeatedly removes the term of highest z_i degree c z^e by subtracting
    c z^(e - e_i) (z_i - z_j).

    Raises:
        NotDivisible: p is not antisymmetric under z_i <-> z_j
    """
    rem: Terms = _clean(dict(p))
    quot: Terms = {}
    while rem:
        key = max(rem, key=lambda e: (e[i], e))
        c = rem[key]
        if key[i] == 0:
            raise NotDivisible(i, j)
        lowered = key[:i] + (key[i] - 1,) + key[i + 1:]
        _add_into(quot, lowered, c)
        rem.pop(key)
        moved = lowered[:j] + (lowered[j] + 1,) + lowered[j + 1:]
        _add_into(rem, moved, c)
    return _clean(quot)


# ---------------------------------------------------------------------------
# Symmetric polynomials
# ---------------------------------------------------------------------------

class SymPoly:
    """
    Symmetric polynomial in N variables.

    Args:
        N: Number of variables
        terms: Map exponent vector -> coefficient
        check: Verify invariance under adjacent transpositions
    """

    __slots__ = ("N", "terms")

    def __init__(self, N: int, terms: Optional[Terms] = None, check: bool = True):
        self.N = N
        cleaned = _clean({tuple(k): as_coeff(v) for k, v in (terms or {}).items()})
        for k in cleaned:
            if len(k) != N:
                raise ValidationError(f"exponent {k} does not have {N} entries")
        self.terms = cleaned
        if check and not self.is_symmetric():
            raise ValidationError("polynomial is not symmetric")

    def is_symmetric(self) -> bool:
        for k, c in self.terms.items():
            for i in range(self.N - 1):
                swapped = k[:i] + (k[i + 1], k[i]) + k[i + 2:]
                if self.terms.get(swapped, Fraction(0)) != c:
                    return False
        return True

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=-1)

    def coefficient(self, exponent: Exponent) -> CoeffField:
        return self.terms.get(tuple(exponent), Fraction(0))

    def m_coefficients(self) -> Dict[Partition, CoeffField]:
        """Coordinates in the monomial symmetric basis."""
        out: Dict[Partition, CoeffField] = {}
        for k, c in self.terms.items():
            if list(k) == sorted(k, reverse=True):
                out[Partition(k)] = c
        return dict(sorted(out.items(), key=lambda kv: kv[0].padded(self.N), reverse=True))

    @classmethod
    def from_m_coefficients(cls, N: int, coeffs: Dict[Partition, CoeffField]) -> "SymPoly":
        terms: Terms = {}
        for lam, c in coeffs.items():
            for k in msym(lam, N).terms:
                _add_into(terms, k, c)
        return cls(N, terms, check=False)

    def evaluate_parameter(self, value) -> "SymPoly":
        return SymPoly(self.N, {k: eval_param(c, value) for k, c in self.terms.items()}, check=False)

    def __add__(self, other: "SymPoly") -> "SymPoly":
        return SymPoly(self.N, _combine(self.terms, other.terms), check=False)

    def __sub__(self, other: "SymPoly") -> "SymPoly":
        return SymPoly(self.N, _combine(self.terms, other.terms, Fraction(-1)), check=False)

    def scaled(self, c) -> "SymPoly":
        return SymPoly(self.N, _scale(self.terms, c), check=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymPoly):
            return NotImplemented
        return self.N == other.N and self.terms == other.terms

    __hash__ = None

    def __str__(self) -> str:
        coeffs = self.m_coefficients()
        if not coeffs:
            return "0"
        pieces = []
        for lam, c in coeffs.items():
            mono = f"m{lam}" if lam.parts else "1"
            if c == 1:
                pieces.append(mono)
            elif isinstance(c, Fraction):
                pieces.append(f"{c}*{mono}" if lam.parts else str(c))
            else:
                pieces.append(f"({coeff_str(c)})*{mono}" if lam.parts else f"({coeff_str(c)})")
        return " + ".join(pieces).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"SymPoly(N={self.N}, {self})"


def msym(lam: Partition, N: int) -> SymPoly:
    """Monomial symmetric function: sum of the distinct permutations of z^lam."""
    exponent = lam.padded(N)
    return SymPoly(N, {k: Fraction(1) for k in set(permutations(exponent))}, check=False)


def power_sum_square(N: int) -> SymPoly:
    """m_(1)^2 = m_(2) + 2 m_(1,1)."""
    p = msym(Partition.of(1), N).terms
    out: Terms = {}
    for a, ca in p.items():
        for b, cb in p.items():
            _add_into(out, tuple(x + y for x, y in zip(a, b)), ca * cb)
    return SymPoly(N, out)


# ---------------------------------------------------------------------------
# Sutherland operator and Jack polynomials
# ---------------------------------------------------------------------------

def _euler_square_part(p: SymPoly) -> Terms:
    out: Terms = {}
    for i in range(p.N):
        out = _combine(out, _euler(_euler(p.terms, i), i))
    return out


def _sutherland_pair_part(p: SymPoly) -> Terms:
    out: Terms = {}
    for i in range(p.N):
        for j in range(i + 1, p.N):
            anti = _combine(_euler(p.terms, i), _euler(p.terms, j), Fraction(-1))
            out = _combine(out, _times_sum(pair_divide(anti, i, j), i, j))
    return out


def sutherland_apply(beta, p: SymPoly) -> SymPoly:
    """sum_i D_i^2 p + beta sum_{i<j} (z_i + z_j)/(z_i - z_j) (D_i - D_j) p"""
    beta = as_coeff(beta)
    return SymPoly(p.N, _combine(_euler_square_part(p), _sutherland_pair_part(p), beta), check=False)


def diagonal_entry(lam: Partition, N: int, beta) -> CoeffField:
    """sum_i (lambda_i^2 + beta (N + 1 - 2i) lambda_i), i counted from 1."""
    beta = as_coeff(beta)
    total: CoeffField = Fraction(0)
    for i, part in enumerate(lam.padded(N), start=1):
        total = total + part * part + beta * ((N + 1 - 2 * i) * part)
    return as_coeff(total)


def sutherland_matrix(weight: int, N: int, beta) -> Tuple[List[Partition], np.ndarray]:
    """
    Matrix of sutherland_apply on the weight-|lambda| monomial basis.

    Row = source m_mu, column = target. The basis is reverse lexicographic,
    so dominance-lowering maps land strictly to the right of the diagonal.

    Raises:
        NotTriangular: an entry below the diagonal is nonzero
    """
    basis = partitions(weight, N)
    index = {lam: i for i, lam in enumerate(basis)}
    M = np.full((len(basis), len(basis)), Fraction(0), dtype=object)
    for row, lam in enumerate(basis):
        image = sutherland_apply(beta, msym(lam, N))
        for mu, c in image.m_coefficients().items():
            col = index[mu]
            if col < row:
                raise NotTriangular(lam, mu)
            M[row, col] = c
    return basis, M


@dataclass
class JackResult:
    """
    Eigenfunction of the gauge-reduced Sutherland operator.

    Args:
        lam: Leading partition
        N: Number of variables
        coefficients: m-basis coordinates, coefficient of m_lam equal to 1
        eigenvalue_shift: Eigenvalue relative to the constant ground state
        polynomial: The assembled symmetric polynomial
    """
    lam: Partition
    N: int
    coefficients: Dict[Partition, CoeffField]
    eigenvalue_shift: CoeffField
    polynomial: SymPoly


def jack(lam: Partition, N: int, beta) -> JackResult:
    """
    Triangular solve for the Jack polynomial with leading term m_lam.

    Raises:
        DegenerateEigenvalue: a dominated partition has the same diagonal entry
        ResidualNonzero: the assembled polynomial is not an eigenfunction
    """
    start_time = time.time()
    beta = as_coeff(beta)
    lam.padded(N)
    basis, M = sutherland_matrix(lam.weight, N, beta)
    start = basis.index(lam)
    e = M[start, start]
    coeffs: Dict[Partition, CoeffField] = {lam: Fraction(1)}
    values: List[CoeffField] = [Fraction(0)] * len(basis)
    values[start] = Fraction(1)
    for i in range(start + 1, len(basis)):
        mu = basis[i]
        if not lam.dominates(mu):
            continue
        source: CoeffField = Fraction(0)
        for j in range(start, i):
            if values[j]:
                source = source + values[j] * M[j, i]
        gap = e - M[i, i]
        if not gap:
            raise DegenerateEigenvalue(lam, mu, e)
        values[i] = as_coeff(source / gap)
        if values[i]:
            coeffs[mu] = values[i]

    poly = SymPoly.from_m_coefficients(N, coeffs)
    check = sutherland_apply(beta, poly) - poly.scaled(e)
    if not check.is_zero():
        raise ResidualNonzero(check, f"Jack polynomial {lam}")
    end_time = time.time()
    logger.info("jack %s N=%d in %.4f seconds", lam, N, end_time - start_time)
    return JackResult(lam, N, coeffs, as_coeff(e), poly)


def sutherland_energy(lam: Partition, N: int, beta) -> CoeffField:
    """
    Eigenvalue shift of the Jack polynomial with leading term m_lam.

    For two particles the closed formula sum_i (lambda_i^2 + beta (3 - 2i) lambda_i)
    is used and checked against the matrix diagonal; for other N the diagonal
    entry of the triangular matrix is returned.
    """
    beta = as_coeff(beta)
    basis, M = sutherland_matrix(lam.weight, N, beta)
    k = basis.index(lam)
    from_matrix = as_coeff(M[k, k])
    if N != 2:
        return from_matrix
    formula: CoeffField = Fraction(0)
    for i, part in enumerate(lam.padded(2), start=1):
        formula = formula + part * part + beta * ((3 - 2 * i) * part)
    if formula != from_matrix:
        raise ResidualNonzero(formula - from_matrix, f"two-particle energy of {lam}")
    return as_coeff(formula)


def sutherland_neumann(lam: Partition, N: int, beta, iterations: int) -> SymPoly:
    """
    Partial sum of the perturbative iteration in the coupling beta.

    Splits the operator as S0 + beta S1 (S0 = sum D_i^2) and the eigenvalue as
    e0 + beta e1, then iterates J <- m_lam + beta (e0 - S0)^-1 (S1 - e1) J
    with the m_lam component projected out. Each step adds one power of beta.
    """
    beta = as_coeff(beta)
    e0 = diagonal_entry(lam, N, 0)
    e1 = diagonal_entry(lam, N, 1) - e0
    leading = msym(lam, N)
    J = leading
    for _ in range(iterations):
        S1J = SymPoly(N, _sutherland_pair_part(J), check=False) - J.scaled(e1)
        correction: Dict[Partition, CoeffField] = {}
        for mu, c in S1J.m_coefficients().items():
            if mu == lam:
                continue
            gap = e0 - diagonal_entry(mu, N, 0)
            if not gap:
                raise DegenerateEigenvalue(lam, mu, e0)
            correction[mu] = beta * c / gap
        J = leading + SymPoly.from_m_coefficients(N, correction)
    return J


# ---------------------------------------------------------------------------
# Calogero-Sutherland-Moser
# ---------------------------------------------------------------------------

def csm_A_apply(beta, p: SymPoly) -> SymPoly:
    """(1/2) sum_i d_i^2 p + beta sum_{i<j} (d_i - d_j) p / (x_i - x_j)"""
    beta = as_coeff(beta)
    out: Terms = {}
    for i in range(p.N):
        out = _combine(out, _partial(_partial(p.terms, i), i), Fraction(1, 2))
    for i in range(p.N):
        for j in range(i + 1, p.N):
            anti = _combine(_partial(p.terms, i), _partial(p.terms, j), Fraction(-1))
            out = _combine(out, pair_divide(anti, i, j), beta)
    return SymPoly(p.N, out, check=False)


def csm_exponential(p: SymPoly, beta, scale=Fraction(-1, 2)) -> SymPoly:
    """exp(scale * A) p; terminates since A lowers the degree by two."""
    total = p
    current = p
    k = 0
    while not current.is_zero():
        k += 1
        current = csm_A_apply(beta, current).scaled(as_coeff(scale) / k)
        total = total + current
    return total


def csm_residual(P: SymPoly, n: int, beta) -> SymPoly:
    """[sum_i x_i d_i - n - A] P"""
    out: Terms = {}
    for i in range(P.N):
        out = _combine(out, _euler(P.terms, i))
    out = _combine(out, P.terms, Fraction(-n))
    out = _combine(out, csm_A_apply(beta, P).terms, Fraction(-1))
    return SymPoly(P.N, out, check=False)


def csm_ground_energy(N: int, beta) -> CoeffField:
    beta = as_coeff(beta)
    return as_coeff(Fraction(N, 2) + beta * Fraction(N * (N - 1), 2))


def csm_state(lam: Partition, N: int, beta) -> Tuple[SymPoly, CoeffField]:
    """
    Polynomial part P = exp(-A/2) m_lam and energy E = E_0 + |lam|.

    Raises:
        ResidualNonzero: P fails [sum x_i d_i - n - A] P = 0
    """
    beta = as_coeff(beta)
    n = lam.weight
    P = csm_exponential(msym(lam, N), beta)
    check = csm_residual(P, n, beta)
    if not check.is_zero():
        raise ResidualNonzero(check, f"CSM state {lam}")
    return P, as_coeff(csm_ground_energy(N, beta) + n)
