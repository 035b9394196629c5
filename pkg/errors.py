"""
Error hierarchy for the Euler-operator engine

Every error carries the process exit code the command-line interface maps it
to, so callers never need a lookup table.
"""

from typing import Any, List, Optional


class EulerOdeError(Exception):
    """Base class for all engine errors."""

    exit_code = 1


# --- validation (exit 3) ---------------------------------------------------

class ValidationError(EulerOdeError):
    """Input rejected before or during a computation."""

    exit_code = 3


class ParameterMismatch(ValidationError):
    """Arithmetic mixed two different free parameters."""

    def __init__(self, left: str, right: str):
        super().__init__(f"cannot combine values in parameter {left!r} with values in {right!r}")
        self.left = left
        self.right = right


class DivisionByZero(ValidationError, ZeroDivisionError):
    """Division by a scalar that is identically zero."""

    def __init__(self, what: str = "identically zero scalar"):
        super().__init__(f"division by {what}")


class PoleAtValue(ValidationError):
    def __init__(self, name: str, value: Any):
        super().__init__(f"denominator vanishes at {name} = {value}")
        self.name = name
        self.value = value


class IncompatibleBase(ValidationError):
    def __init__(self, lam1: Any, lam2: Any):
        super().__init__(f"base exponents {lam1} and {lam2} do not differ by an integer")
        self.lam1 = lam1
        self.lam2 = lam2


class ZeroEulerPart(ValidationError):
    def __init__(self):
        super().__init__("operator has no degree-zero part (F(D) is identically zero)")


class NonRationalEulerPart(ValidationError):
    def __init__(self, coeff: Any):
        super().__init__(f"F(D) coefficient {coeff} is not rational; bind the parameter first")
        self.coeff = coeff


class IndicialMismatch(ValidationError):
    def __init__(self, lam: Any, value: Any):
        super().__init__(f"lambda = {lam} is not an indicial root (F(lambda) = {value})")
        self.lam = lam
        self.value = value


class MixedDegreeRemainder(ValidationError):
    def __init__(self, degrees: List[int]):
        super().__init__(f"remainder P mixes raising and lowering degrees {sorted(degrees)}")
        self.degrees = degrees


class NotResummable(ValidationError):
    """Operator does not admit an exponential closed form."""


class MissingParameter(ValidationError):
    def __init__(self, family: str, name: str):
        super().__init__(f"{family} requires parameter {name!r}")
        self.family = family
        self.name = name


class InvalidParameter(ValidationError):
    """Parameter present but outside its admissible range."""


class TooManyParts(ValidationError):
    def __init__(self, parts: Any, nvars: int):
        super().__init__(f"partition {parts} has more nonzero parts than {nvars} variables")
        self.parts = parts
        self.nvars = nvars


class ParseError(ValidationError):
    def __init__(self, message: str, offset: int, expected: Optional[List[str]] = None):
        self.offset = offset
        self.expected = sorted(expected or [])
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at offset {offset}{detail}")


class NegativePower(ParseError):
    def __init__(self, offset: int):
        super().__init__("negative powers are not allowed; premultiply instead", offset, ["UINT"])


class UnboundParameter(ValidationError):
    def __init__(self, name: str):
        super().__init__(f"parameter {name!r} is neither bound nor the free parameter")
        self.name = name


class TwoFreeParameters(ValidationError):
    def __init__(self, names: List[str]):
        super().__init__(f"at most one free parameter is allowed, found {sorted(names)}")
        self.names = names


class NonRationalRoot(ValidationError):
    """Termination polynomial has roots outside Q."""

    def __init__(self, poly: Any, rational_roots: List[Any]):
        super().__init__(
            f"termination polynomial {poly} has irrational roots "
            f"(rational ones: {[str(r) for r in rational_roots]})"
        )
        self.poly = poly
        self.rational_roots = rational_roots


class ComplexIntermediate(ValidationError):
    """Closed-form cubic root needs complex arithmetic with no selection rule."""

    def __init__(self, message: str, real_roots: List[float]):
        super().__init__(message)
        self.real_roots = real_roots


# --- resonance (exit 2) ----------------------------------------------------

class ResonanceError(EulerOdeError):
    exit_code = 2


class Resonance(ResonanceError):
    def __init__(self, offset: int):
        super().__init__(f"resonance: F(lambda + k) = 0 at offset k = {offset}")
        self.offset = offset


class ResolventPole(ResonanceError):
    def __init__(self, exponent: Any, shift: Any):
        super().__init__(f"resolvent 1/(D + {shift}) meets x^{exponent}")
        self.exponent = exponent
        self.shift = shift


# --- degeneracy (exit 4) ---------------------------------------------------

class DegenerateEigenvalue(EulerOdeError):
    exit_code = 4

    def __init__(self, partition: Any, other: Any, value: Any):
        super().__init__(f"eigenvalue {value} of {partition} collides with {other}")
        self.partition = partition
        self.other = other
        self.value = value


# --- verification (exit 5) -------------------------------------------------

class VerificationError(EulerOdeError):
    exit_code = 5


class ResidualNonzero(VerificationError):
    def __init__(self, residual: Any, context: str = ""):
        where = f" for {context}" if context else ""
        super().__init__(f"nonzero residual{where}: {residual}")
        self.residual = residual


class NotProportional(VerificationError):
    def __init__(self, offset: int):
        super().__init__(f"series are not proportional (first mismatch at offset {offset})")
        self.offset = offset


class NotDivisible(VerificationError):
    def __init__(self, i: int, j: int):
        super().__init__(f"polynomial is not divisible by (z{i + 1} - z{j + 1})")
        self.i = i
        self.j = j


class NotTriangular(VerificationError):
    def __init__(self, row: Any, col: Any):
        super().__init__(f"operator matrix has a sub-diagonal entry at ({row}, {col})")
        self.row = row
        self.col = col
