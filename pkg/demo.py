"""
Demo script for the Euler-operator ODE engine with a few worked equations
"""

from fractions import Fraction

from classical import FamilySpec, make_family
from manybody import Partition, csm_state, jack
from operators import degree_split, describe
from op_parser import operator_from_string
from series_solver import exp_apply, exp_form_from_operator, master_solve, residual
from spectral import anharmonic_approx, oscillator_quantize, sextic_qes


def _check(label: str, ok: bool) -> None:
    print(f"{label}:", "✓" if ok else "✗")


def main():
    """Run a demonstration of the series engine on a handful of equations"""
    print("Euler-Operator ODE Engine Demo")
    print("==============================\n")

    # Hermite n = 3 in the form [D - n - 1/2 d^2] y = 0
    src = "D - 3 - 1/2*d^2"
    op = operator_from_string(src)
    print("Equation:", src)
    print(describe(op))

    print("\nSolving...")
    report = master_solve(op, 3)
    print("y =", report.solution)
    print("Status:", report.status)
    _check("Residual vanishes", residual(op, report.solution).is_zero())

    form = exp_form_from_operator(op, 3)
    closed = exp_apply(form)
    print("\nResummed:", form)
    _check("exp form reproduces the series", closed == report.solution)

    print("\nClassical families")
    for spec in (FamilySpec("legendre", n=4),
                 FamilySpec("laguerre", {"alpha": Fraction(1, 2)}, n=2),
                 FamilySpec("bessel", {"nu": 1})):
        family = make_family(spec)
        result = family.solve(max_order=12)
        print(f"  {family.describe()}: {family.normalized(12)}")
        _check("  closed form and master series agree with the reference", result.residual_zero)

    print("\nSpectral problems")
    print("  Oscillator E_2 =", oscillator_quantize(2))
    qes = sextic_qes(4, 1)
    print("  Sextic n=4, g=1 spectrum:", [str(E) for E in qes.spectrum])
    _check("  spectrum is {-8, 0, 8}", qes.spectrum == [-8, 0, 8])
    estimate = anharmonic_approx(1, 1)
    print(f"  Anharmonic alpha=1, beta=1: E0 ~ {estimate.E0:.12f} ({estimate.method})")

    print("\nMany-body")
    result = jack(Partition.of(2), 2, Fraction(1))
    print("  Jack (2) at beta=1:", result.polynomial)
    P, energy = csm_state(Partition.of(1, 1), 3, Fraction(2))
    print(f"  CSM (1,1), N=3, beta=2: P = {P}, E = {energy}")

    F, P = degree_split(op)
    print("\nSplit of the Hermite operator: F(D) =", F, "; P =", P)


if __name__ == "__main__":
    main()
