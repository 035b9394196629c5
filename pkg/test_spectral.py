"""
Tests for the spectral problems
"""

import unittest
from fractions import Fraction
from math import factorial

from algebra import GeneralizedSeries, ParamPoly
from errors import ComplexIntermediate, InvalidParameter, NonRationalRoot, ValidationError
from series_solver import residual
from spectral import (
    anharmonic_approx, matching_cubic, oscillator_quantize, oscillator_series, oscillator_terminates,
    sextic_operator, sextic_qes,
)


class TestOscillator(unittest.TestCase):
    def test_quantization(self):
        """Terminating levels sit at n + 1/2"""
        for n in range(9):
            self.assertEqual(oscillator_quantize(n), n + Fraction(1, 2))
        with self.assertRaises(InvalidParameter):
            oscillator_quantize(-1)

    def test_termination(self):
        """D - alpha - d^2/2 terminates exactly for non-negative integer alpha"""
        for alpha in range(9):
            self.assertTrue(oscillator_terminates(alpha), alpha)
        for alpha in (Fraction(1, 2), Fraction(5, 2), -1, Fraction(-3, 4)):
            self.assertFalse(oscillator_terminates(alpha, 20), alpha)

    def test_gaussian_ground_state(self):
        """The symbolic series at E = 1/2 is exp(-x^2/2) through x^20"""
        s = oscillator_series(22, 0).evaluate(Fraction(1, 2))
        for m in range(11):
            self.assertEqual(s.coefficient(2 * m), Fraction(-1, 2) ** m / factorial(m), m)

    def test_odd_series(self):
        """From the root 1 the series is odd"""
        s = oscillator_series(12, 1)
        self.assertEqual(s.base, 1)
        self.assertTrue(all(k % 2 == 0 for k in s.terms))
        self.assertEqual(s.coefficient(2), -ParamPoly.variable("E") / 3)

    def test_bad_root(self):
        with self.assertRaises(ValidationError):
            oscillator_series(12, 2)


class TestSexticQes(unittest.TestCase):
    def _verify_levels(self, n, g, spectrum):
        result = sextic_qes(n, g)
        self.assertEqual(result.spectrum, [Fraction(e) for e in spectrum])
        self.assertEqual(len(result.spectrum), n // 2 + 1)
        self.assertEqual(len(result.eigenfunctions), len(spectrum))
        for E, psi in result.eigenfunctions:
            self.assertTrue(psi.is_exact)
            self.assertEqual(psi.degree(), n)
            self.assertTrue(residual(sextic_operator(n, g, E), psi).is_zero())
        return result

    def test_ground_levels(self):
        """n = 0 and n = 1 each have the single level E = 0"""
        self._verify_levels(0, 1, [0])
        self._verify_levels(1, 3, [0])

    def test_quartic_factor(self):
        """n = 4, g = 1 gives E = 0, +-8"""
        result = self._verify_levels(4, 1, [-8, 0, 8])
        self.assertEqual(result.alpha, -11)
        self.assertEqual(result.gamma, 1)
        self.assertEqual(result.b, Fraction(1, 4))
        self.assertEqual(result.gauge, "exp(-1/4*x^4)")

    def test_quartic_eigenfunctions(self):
        """n = 4, g = 1: the three polynomial factors"""
        result = sextic_qes(4, 1)
        expected = [
            (Fraction(-8), GeneralizedSeries(0, {0: 1, 2: 4, 4: 2})),
            (Fraction(0), GeneralizedSeries(0, {0: 1, 4: Fraction(-2, 3)})),
            (Fraction(8), GeneralizedSeries(0, {0: 1, 2: -4, 4: 2})),
        ]
        self.assertEqual(result.eigenfunctions, expected)
        self.assertEqual(str(result.eigenfunctions[1][1]), "-2/3*x^4 + 1")

    def test_rational_couplings(self):
        """Couplings chosen so the termination polynomial splits over Q"""
        self._verify_levels(2, 2, [-4, 4])
        self._verify_levels(3, 6, [-12, 12])
        self._verify_levels(5, 2, [-16, 0, 16])

    def test_termination_polynomial(self):
        """n = 2: c_4 = (E^2 - 8g)/24"""
        E = ParamPoly.variable("E")
        result = sextic_qes(2, 2)
        self.assertEqual(result.termination_poly, (E * E - 16) / 24)

    def test_irrational_levels(self):
        """n = 6 has a quartic termination polynomial with no rational roots"""
        with self.assertRaises(NonRationalRoot) as ctx:
            sextic_qes(6, 1)
        self.assertEqual(ctx.exception.poly.degree, 4)

    def test_invalid(self):
        with self.assertRaises(InvalidParameter):
            sextic_qes(-1, 1)
        with self.assertRaises(InvalidParameter):
            sextic_qes(2, 0)
        with self.assertRaises(ValidationError):
            sextic_qes(4, 1, K=5)


class TestAnharmonic(unittest.TestCase):
    def test_matching_cubic(self):
        """The three-term match gives E^3 - alpha E - 3 beta / 2"""
        result = anharmonic_approx(1, 2)
        self.assertEqual(result.cubic, ParamPoly("E", (-3, -1, 0, 1)))
        self.assertEqual(matching_cubic(result.series), result.cubic)

    def test_closed_form_root(self):
        """alpha = 1, beta = 2/3: E^3 - E - 1 = 0, the plastic number"""
        result = anharmonic_approx(1, Fraction(2, 3))
        self.assertEqual(result.method, "closed_form")
        self.assertFalse(result.complex_intermediate)
        self.assertAlmostEqual(result.E0, 1.324717957244746, places=12)
        self.assertAlmostEqual(result.mu, result.E0 / 2, places=15)
        self.assertAlmostEqual(result.nu, (result.E0 ** 2 - 1) / 12, places=15)

    def test_negative_discriminant(self):
        """Three real roots: bisection is used and the largest root returned"""
        result = anharmonic_approx(3, Fraction(1, 10))
        self.assertTrue(result.complex_intermediate)
        self.assertEqual(result.method, "bisection")
        self.assertEqual(len(result.real_roots), 3)
        self.assertLess(abs(result.E0 - max(result.real_roots)), 1e-10)
        self.assertLess(abs(result.closed_form_root - result.bisection_root), 1e-10)

    def test_root_accuracy(self):
        """The cubic is satisfied and both root finders agree to 1e-10"""
        for alpha, beta in ((1, 1), (1, Fraction(1, 10)), (0, Fraction(2, 3))):
            result = anharmonic_approx(alpha, beta)
            E0 = result.E0
            self.assertLess(abs(E0 ** 3 - alpha * E0 - 1.5 * float(beta)), 1e-10, (alpha, beta))
            self.assertLess(abs(result.closed_form_root - result.bisection_root), 1e-10, (alpha, beta))
            self.assertEqual(result.mu, E0 / 2)

    def test_unit_cubic(self):
        """alpha = 0, beta = 2/3 reduces to E^3 = 1"""
        result = anharmonic_approx(0, Fraction(2, 3))
        self.assertEqual(result.cubic, ParamPoly("E", (-1, 0, 0, 1)))
        self.assertEqual(result.method, "closed_form")
        self.assertLess(abs(result.E0 - 1), 1e-10)

    def test_series_coefficients(self):
        """c2 = -E/2 and c4 = (2 alpha + E^2)/24 exactly"""
        E = ParamPoly.variable("E")
        for alpha, beta in ((1, 1), (1, Fraction(1, 10)), (0, Fraction(2, 3))):
            series = anharmonic_approx(alpha, beta).series
            self.assertEqual(series.coefficient(2), -E / 2)
            self.assertEqual(series.coefficient(4), (2 * alpha + E * E) / 24)

    def test_beta_zero(self):
        """beta = 0 has no distinguished root"""
        with self.assertRaises(ComplexIntermediate) as ctx:
            anharmonic_approx(1, 0)
        self.assertEqual(len(ctx.exception.real_roots), 3)

    def test_validation(self):
        with self.assertRaises(ValidationError):
            anharmonic_approx(1, 1, K=6)
        with self.assertRaises(InvalidParameter):
            anharmonic_approx(1, -1)


if __name__ == "__main__":
    unittest.main()
