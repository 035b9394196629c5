"""
Tests for the master series solver and exponential forms
"""

import random
import unittest
from fractions import Fraction

from algebra import GeneralizedSeries, ParamPoly
from errors import (
    IndicialMismatch, MixedDegreeRemainder, NotResummable, Resonance, ResolventPole, ValidationError,
)
from operators import EulerPoly, LinDiffOp, MonoOp, apply
from series_solver import (
    ExpForm, Resolvent, Terminated, Truncated, exp_apply, exp_form_from_operator, invert_F,
    master_solve, residual,
)
from spectral import oscillator_operator, oscillator_terminates


def hermite_operator(n: int) -> LinDiffOp:
    return LinDiffOp({(1, 1): 1, (0, 0): -n, (0, 2): Fraction(-1, 2)})


class TestInvertF(unittest.TestCase):
    def test_division(self):
        """Coefficient at offset k is divided by F(lambda + k)"""
        F = EulerPoly((-4, 1))
        out = invert_F(F, GeneralizedSeries(0, {2: 1}))
        self.assertEqual(out.terms, {2: Fraction(-1, 2)})
        G = EulerPoly((0, -1, 1))
        self.assertEqual(invert_F(G, GeneralizedSeries(0, {2: 6})).terms, {2: Fraction(3)})

    def test_resonance(self):
        """A zero of F at an occupied offset is a resonance"""
        with self.assertRaises(Resonance) as ctx:
            invert_F(EulerPoly((-4, 1)), GeneralizedSeries(0, {4: 1}))
        self.assertEqual(ctx.exception.offset, 4)


class TestMasterSolve(unittest.TestCase):
    def setUp(self):
        self.E = ParamPoly.variable("E")

    def test_hermite_three(self):
        """Hermite n=3 terminates in x^3 - 3/2 x"""
        report = master_solve(hermite_operator(3), 3)
        self.assertIsInstance(report.status, Terminated)
        self.assertTrue(report.terminated)
        self.assertEqual(report.solution, GeneralizedSeries(3, {0: 1, -2: Fraction(-3, 2)}))
        self.assertTrue(residual(hermite_operator(3), report.solution).is_zero())

    def test_hermite_two_printed(self):
        """Hermite n=2 prints as x^2 - 1/2"""
        self.assertEqual(str(master_solve(hermite_operator(2), 2).solution), "x^2 - 1/2")

    def test_oscillator_symbolic(self):
        """Symbolic-energy oscillator coefficients follow the power-series recurrence"""
        report = master_solve(oscillator_operator(), 0, 8)
        s = report.solution
        E = self.E
        self.assertEqual(report.status, Truncated(8))
        self.assertEqual(s.coefficient(0), 1)
        self.assertEqual(s.coefficient(2), -E)
        self.assertEqual(s.coefficient(4), (1 + 2 * E ** 2) / 12)
        self.assertEqual(s.coefficient(6), -(7 * E + 2 * E ** 3) / 180)

    def test_oscillator_printed_sixth_coefficient(self):
        """The alternative x^6 form (3 + E + 2E^3)/180 agrees only at E = 1/2"""
        s = master_solve(oscillator_operator(), 0, 8).solution
        printed = -(3 + self.E + 2 * self.E ** 3) / 180
        self.assertNotEqual(s.coefficient(6), printed)
        half = Fraction(1, 2)
        self.assertEqual(s.evaluate(half).coefficient(6), printed.evaluate(half))
        self.assertEqual(printed.evaluate(half), Fraction(-1, 48))

    def test_oscillator_gaussian(self):
        """At E = 1/2 the truncated series is the Taylor series of exp(-x^2/2)"""
        op = oscillator_operator(Fraction(1, 2))
        s = master_solve(op, 0, 22).solution
        self.assertEqual(s.truncation_order, 22)
        for m in range(11):
            expected = Fraction(-1, 2) ** m
            for i in range(2, m + 1):
                expected /= i
            self.assertEqual(s.coefficient(2 * m), expected)
        self.assertTrue(residual(op, s).is_zero())

    def test_wrong_polynomial_residual(self):
        """Hermite n=2 applied to x^2 - 1 leaves the constant 1"""
        wrong = GeneralizedSeries(0, {2: 1, 0: -1})
        self.assertEqual(residual(hermite_operator(2), wrong).terms, {0: Fraction(1)})

    def test_indicial_mismatch(self):
        """Solving from a non-root is rejected"""
        with self.assertRaises(IndicialMismatch):
            master_solve(hermite_operator(3), 1)

    def test_mixed_remainder(self):
        """A remainder that both raises and lowers degree is rejected"""
        op = LinDiffOp({(1, 1): 1, (1, 0): 1, (0, 1): 1})
        with self.assertRaises(MixedDegreeRemainder):
            master_solve(op, 0)

    def test_max_order_validated(self):
        with self.assertRaises(ValidationError):
            master_solve(hermite_operator(2), 2, 0)

    def test_resonance_propagates(self):
        """Integer-separated indicial roots met with a nonzero source"""
        # F = D(D - 2), P = x
        op = LinDiffOp({(2, 2): 1, (1, 1): -1, (1, 0): 1})
        with self.assertRaises(Resonance) as ctx:
            master_solve(op, 0)
        self.assertEqual(ctx.exception.offset, 2)

    def test_resonance_skipped(self):
        """A vanishing source at the other root is reported, not raised"""
        # F = D(D - 2), P = x^3 never reaches offset 2 from lambda = 0
        op = LinDiffOp({(2, 2): 1, (1, 1): -1, (3, 0): 1})
        report = master_solve(op, 0, 10)
        self.assertEqual(report.resonances_hit, [2])
        self.assertTrue(residual(op, report.solution).is_zero())
        self.assertEqual(master_solve(op, 2, 10).resonances_hit, [])

    def test_oscillator_termination(self):
        """D - alpha - 1/2 d^2 terminates exactly for nonnegative integer alpha"""
        for alpha in range(9):
            self.assertTrue(oscillator_terminates(alpha, 40), alpha)
        for alpha in (Fraction(1, 2), Fraction(5, 2), Fraction(7, 3)):
            self.assertFalse(oscillator_terminates(alpha, 40), alpha)

    def test_master_theorem_random(self):
        """Residual vanishes on the window for 200 random operators"""
        rng = random.Random(20240517)
        for case in range(200):
            lam = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
            other = lam + Fraction(1, 2) + rng.randint(-3, 3)
            lead = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3))
            F = EulerPoly.from_roots([lam, other], lead)
            sign = rng.choice([-1, 1])
            P = LinDiffOp()
            for _ in range(rng.randint(1, 2)):
                delta = sign * rng.randint(1, 3)
                b = rng.randint(0, 2)
                a = b + delta
                if a < 0:
                    b, a = b - a, 0
                P = P + LinDiffOp({(a, b): Fraction(rng.randint(-5, 5) or 1, rng.randint(1, 5))})
            op = F.to_operator() + P
            report = master_solve(op, lam, 12)
            self.assertEqual(report.solution.coefficient(0), 1)
            self.assertTrue(residual(op, report.solution).is_zero(), f"case {case}: {op} at {lam}")

    def test_two_roots_independent(self):
        """Solutions from both indicial roots annihilate the operator"""
        op = LinDiffOp({(2, 2): 1, (1, 1): 1, (0, 0): Fraction(-1, 4), (2, 0): 1})
        for lam in (Fraction(-1, 2), Fraction(1, 2)):
            s = master_solve(op, lam, 16).solution
            self.assertTrue(residual(op, s).is_zero(), lam)


class TestExpForms(unittest.TestCase):
    def test_hermite_gaussian_derivative(self):
        """exp(-1/4 d^2) x^2 = x^2 - 1/2"""
        form = ExpForm([MonoOp(Fraction(-1, 4), 0, 2)], GeneralizedSeries.monomial(2))
        self.assertEqual(exp_apply(form), GeneralizedSeries(2, {0: 1, -2: Fraction(-1, 2)}))

    def test_constant_anchor(self):
        """exp(T) 1 = 1 for a lowering T"""
        form = ExpForm([Resolvent(Fraction(5)), MonoOp(Fraction(1), 0, 2)],
                       GeneralizedSeries.monomial(0), Fraction(-1, 2))
        self.assertEqual(exp_apply(form), GeneralizedSeries.monomial(0))

    def test_legendre_two(self):
        """exp(-1/(2(D + 3)) d^2) x^2 = x^2 - 1/3"""
        form = ExpForm([Resolvent(Fraction(3)), MonoOp(Fraction(1), 0, 2)],
                       GeneralizedSeries.monomial(2), Fraction(-1, 2))
        self.assertEqual(exp_apply(form), GeneralizedSeries(2, {0: 1, -2: Fraction(-1, 3)}))

    def test_resolvent_pole(self):
        """1/(D + c) on x^(-c) has no value"""
        form = ExpForm([Resolvent(Fraction(0)), MonoOp(Fraction(1), 0, 2)],
                       GeneralizedSeries.monomial(2))
        with self.assertRaises(ResolventPole):
            exp_apply(form)

    def test_degree_zero_rejected(self):
        with self.assertRaises(ValidationError):
            ExpForm([Resolvent(Fraction(1))], GeneralizedSeries.monomial(0))

    def test_raising_form_truncates(self):
        """A raising generator stops after order_cap applications"""
        form = ExpForm([MonoOp(Fraction(1), 1, 0)], GeneralizedSeries.monomial(0))
        s = exp_apply(form, 5)
        self.assertEqual(s.truncation_order, 6)
        self.assertEqual(s.coefficient(5), Fraction(1, 120))

    def test_hermite_equivalence(self):
        """exp(-d^2/4) x^n equals the master series for n <= 15"""
        for n in range(16):
            form = ExpForm([MonoOp(Fraction(-1, 4), 0, 2)], GeneralizedSeries.monomial(n))
            self.assertEqual(exp_apply(form), master_solve(hermite_operator(n), n).solution, n)

    def test_bch_identity(self):
        """exp(d^2/4) (-1/2 d^2 + D - n) exp(-d^2/4) x^k = (D - n) x^k"""
        n = 5
        op = hermite_operator(n)
        for k in range(13):
            inner = exp_apply(ExpForm([MonoOp(Fraction(-1, 4), 0, 2)], GeneralizedSeries.monomial(k)))
            middle = apply(op, inner)
            if middle.is_zero():
                outer = middle
            else:
                outer = exp_apply(ExpForm([MonoOp(Fraction(1, 4), 0, 2)], middle))
            self.assertEqual(outer, GeneralizedSeries(k, {0: k - n}), k)

    def test_resummation(self):
        """exp_form_from_operator reproduces master_solve"""
        for n in range(6):
            op = hermite_operator(n)
            self.assertEqual(exp_apply(exp_form_from_operator(op, n)), master_solve(op, n).solution)
        legendre = LinDiffOp({(2, 2): 1, (1, 1): 2, (0, 0): -12, (0, 2): -1})
        self.assertEqual(exp_apply(exp_form_from_operator(legendre, 3)),
                         master_solve(legendre, 3).solution)

    def test_not_resummable(self):
        """A remainder of mixed degree has no single generator"""
        with self.assertRaises(NotResummable):
            exp_form_from_operator(oscillator_operator(Fraction(1, 2)), 0)


if __name__ == "__main__":
    unittest.main()
