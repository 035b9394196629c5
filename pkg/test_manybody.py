"""
Tests for symmetric polynomials, Jack polynomials and CSM states
"""

import unittest
from fractions import Fraction

import sympy

from errors import DegenerateEigenvalue, NotDivisible, TooManyParts, ValidationError
from manybody import (
    Partition, SymPoly, csm_A_apply, csm_exponential, csm_ground_energy, csm_residual, csm_state,
    diagonal_entry, jack, msym, pair_divide, partitions, power_sum_square, sutherland_apply,
    sutherland_energy, sutherland_matrix, sutherland_neumann, symbolic_beta,
)


class TestPartitions(unittest.TestCase):
    def test_reverse_lexicographic(self):
        self.assertEqual(partitions(4, 2), [Partition.of(4), Partition.of(3, 1), Partition.of(2, 2)])
        self.assertEqual(len(partitions(5, 5)), 7)

    def test_trailing_zeros(self):
        self.assertEqual(Partition.of(2, 0, 0), Partition.of(2))
        self.assertEqual(str(Partition.of(2, 1)), "(2,1)")
        with self.assertRaises(ValidationError):
            Partition.of(1, 2)

    def test_dominance(self):
        self.assertTrue(Partition.of(2, 2).dominates(Partition.of(2, 1, 1)))
        self.assertFalse(Partition.of(2, 1, 1).dominates(Partition.of(2, 2)))
        self.assertFalse(Partition.of(3, 1, 1, 1).dominates(Partition.of(2, 2, 2)))
        self.assertFalse(Partition.of(2, 2, 2).dominates(Partition.of(3, 1, 1, 1)))

    def test_too_many_parts(self):
        with self.assertRaises(TooManyParts):
            Partition.of(1, 1, 1).padded(2)


class TestSymmetricPolynomials(unittest.TestCase):
    def test_monomial_symmetric(self):
        m = msym(Partition.of(2, 1), 3)
        self.assertEqual(len(m.terms), 6)
        self.assertTrue(m.is_symmetric())
        self.assertEqual(m.degree(), 3)

    def test_power_sum_square(self):
        """m_(1)^2 = m_(2) + 2 m_(1,1)"""
        coeffs = power_sum_square(3).m_coefficients()
        self.assertEqual(coeffs, {Partition.of(2): 1, Partition.of(1, 1): 2})

    def test_asymmetric_rejected(self):
        with self.assertRaises(ValidationError):
            SymPoly(2, {(1, 0): 1})

    def test_pair_divide(self):
        """(z1^2 - z2^2) / (z1 - z2) = z1 + z2"""
        self.assertEqual(pair_divide({(2, 0): 1, (0, 2): -1}, 0, 1), {(1, 0): 1, (0, 1): 1})
        with self.assertRaises(NotDivisible):
            pair_divide({(2, 0): 1, (0, 2): 1}, 0, 1)


class TestSutherland(unittest.TestCase):
    def setUp(self):
        self.beta = symbolic_beta()

    def test_action_two_particles(self):
        """S m_(2) = (4 + 2 beta) m_(2) + 4 beta m_(1,1)"""
        image = sutherland_apply(self.beta, msym(Partition.of(2), 2)).m_coefficients()
        self.assertEqual(image[Partition.of(2)], 4 + 2 * self.beta)
        self.assertEqual(image[Partition.of(1, 1)], 4 * self.beta)

    def test_action_edge_cases(self):
        """Constants are annihilated and m_(1,1) is an eigenvector with eigenvalue 2"""
        self.assertTrue(sutherland_apply(self.beta, SymPoly(2, {(0, 0): 1})).is_zero())
        m11 = msym(Partition.of(1, 1), 2)
        self.assertEqual(sutherland_apply(self.beta, m11), m11.scaled(2))

    def test_matrix_triangular(self):
        """Rows map only to dominated partitions and the diagonal is explicit"""
        for N in (2, 3, 4):
            basis, M = sutherland_matrix(4, N, Fraction(2, 3))
            for i, lam in enumerate(basis):
                self.assertEqual(M[i, i], diagonal_entry(lam, N, Fraction(2, 3)))
                for j in range(i):
                    self.assertEqual(M[i, j], 0)

    def test_jack_two_particles(self):
        """J_(2) = m_(2) + 2 beta / (1 + beta) m_(1,1)"""
        result = jack(Partition.of(2), 2, self.beta)
        self.assertEqual(result.coefficients[Partition.of(1, 1)], 2 * self.beta / (1 + self.beta))
        self.assertEqual(str(result.coefficients[Partition.of(1, 1)]), "(2*beta)/(beta + 1)")
        self.assertEqual(result.eigenvalue_shift, 4 + 2 * self.beta)

    def test_jack_schur_point(self):
        """At beta = 1 Jack polynomials are Schur functions"""
        result = jack(Partition.of(2, 1), 3, 1)
        self.assertEqual(result.coefficients, {Partition.of(2, 1): 1, Partition.of(1, 1, 1): 2})
        self.assertEqual(str(jack(Partition.of(2), 2, 1).polynomial), "m(2) + m(1,1)")

    def test_jack_skips_incomparable(self):
        """Only partitions dominated by lambda can appear"""
        lam = Partition.of(3, 1, 1, 1)
        result = jack(lam, 6, Fraction(1, 2))
        for mu in result.coefficients:
            self.assertTrue(lam.dominates(mu), str(mu))
        self.assertNotIn(Partition.of(2, 2, 2), result.coefficients)

    def test_jack_minimal_partitions(self):
        """Dominance-minimal partitions are their own Jack polynomials"""
        result = jack(Partition.of(1, 1), 2, self.beta)
        self.assertEqual(result.coefficients, {Partition.of(1, 1): 1})
        self.assertEqual(result.eigenvalue_shift, 2)
        self.assertEqual(jack(Partition.of(1), 2, self.beta).eigenvalue_shift, 1 + self.beta)

    def test_degenerate(self):
        """beta = -1 makes (2) and (1,1) collide for two particles"""
        with self.assertRaises(DegenerateEigenvalue):
            jack(Partition.of(2), 2, -1)

    def test_too_many_parts(self):
        with self.assertRaises(TooManyParts):
            jack(Partition.of(1, 1, 1), 2, 1)

    def test_printed_power_sum_form(self):
        """m_(2) + 2 beta / (1 + beta) m_(1)^2 is an eigenfunction only at beta = 1"""
        for beta in (Fraction(1, 2), 2, 5):
            c = Fraction(2 * beta) / (1 + beta)
            printed = msym(Partition.of(2), 2) + power_sum_square(2).scaled(c)
            check = sutherland_apply(beta, printed) - printed.scaled(4 + 2 * beta)
            self.assertFalse(check.is_zero(), beta)
            J = jack(Partition.of(2), 2, beta).polynomial
            self.assertTrue((sutherland_apply(beta, J) - J.scaled(4 + 2 * beta)).is_zero(), beta)
        printed = msym(Partition.of(2), 2) + power_sum_square(2)
        self.assertTrue((sutherland_apply(1, printed) - printed.scaled(6)).is_zero())

    def test_jack_sweep(self):
        """Every Jack polynomial up to three particles and weight four is an eigenfunction"""
        for N in (1, 2, 3):
            for weight in range(1, 5):
                for lam in partitions(weight, N):
                    for beta in (Fraction(1, 2), 1, 2, 5):
                        result = jack(lam, N, beta)
                        J = result.polynomial
                        self.assertTrue(J.is_symmetric(), (lam, N, beta))
                        check = sutherland_apply(beta, J) - J.scaled(result.eigenvalue_shift)
                        self.assertTrue(check.is_zero(), (lam, N, beta))
                        self.assertEqual(result.eigenvalue_shift, diagonal_entry(lam, N, beta))

    def test_symmetry_preserved(self):
        """The Sutherland operator maps symmetric polynomials to symmetric polynomials"""
        for N in (2, 3):
            for lam in partitions(3, N):
                self.assertTrue(sutherland_apply(self.beta, msym(lam, N)).is_symmetric(), (lam, N))

    def test_two_particle_energy(self):
        self.assertEqual(sutherland_energy(Partition.of(3, 1), 2, self.beta), 10 + 2 * self.beta)

    def test_neumann_geometric_sum(self):
        """k iterations give the truncated geometric series 2 beta sum_{n<k} (-beta)^n"""
        lam = Partition.of(2)
        for k in range(1, 6):
            J = sutherland_neumann(lam, 2, self.beta, k)
            expected = sum(((-self.beta) ** n for n in range(k)), Fraction(0)) * 2 * self.beta
            self.assertEqual(J.m_coefficients()[Partition.of(1, 1)], expected, k)

    def test_neumann_converges_to_jack(self):
        """The gap to the triangular solve is 2 beta (-beta)^k / (1 + beta)"""
        beta = Fraction(1, 3)
        exact = jack(Partition.of(2), 2, beta).coefficients[Partition.of(1, 1)]
        approx = sutherland_neumann(Partition.of(2), 2, beta, 6).m_coefficients()[Partition.of(1, 1)]
        self.assertEqual(exact - approx, 2 * beta * (-beta) ** 6 / (1 + beta))


class TestCsm(unittest.TestCase):
    def test_ground_energy(self):
        self.assertEqual(csm_ground_energy(2, 1), 2)
        self.assertEqual(csm_ground_energy(3, 2), Fraction(15, 2))

    def test_A_action(self):
        beta = symbolic_beta()
        x1x2 = msym(Partition.of(1, 1), 2)
        self.assertEqual(csm_A_apply(beta, x1x2), SymPoly(2, {(0, 0): -beta}))
        self.assertTrue(csm_A_apply(beta, msym(Partition.of(1), 2)).is_zero())
        self.assertEqual(csm_A_apply(0, msym(Partition.of(2), 1)), SymPoly(1, {(0,): 1}))

    def test_one_particle_reduces_to_hermite(self):
        """N = 1, beta = 0: x^2 - 1/2 with E = 5/2"""
        P, E = csm_state(Partition.of(2), 1, 0)
        self.assertEqual(P, SymPoly(1, {(2,): 1, (0,): Fraction(-1, 2)}))
        self.assertEqual(E, Fraction(5, 2))

    def test_pair_state(self):
        """(1,1): x1 x2 + beta/2"""
        beta = symbolic_beta()
        P, E = csm_state(Partition.of(1, 1), 2, beta)
        self.assertEqual(P, SymPoly(2, {(1, 1): 1, (0, 0): beta / 2}))
        self.assertEqual(E, csm_ground_energy(2, beta) + 2)

    def test_two_particle_state(self):
        """exp(-A/2) m_(2) = m_(2) - (1 + beta)"""
        P, E = csm_state(Partition.of(2), 2, 1)
        self.assertEqual(P, SymPoly(2, {(2, 0): 1, (0, 2): 1, (0, 0): -2}))
        self.assertEqual(E, 4)

    def test_symbolic_state(self):
        beta = symbolic_beta()
        P, E = csm_state(Partition.of(2, 1), 3, beta)
        self.assertTrue(csm_residual(P, 3, beta).is_zero())
        self.assertEqual(E, Fraction(3, 2) + 3 * beta + 3)

    def test_state_sweep(self):
        """exp(-A/2) m_lam has zero residual up to three particles and weight four"""
        for N in (1, 2, 3):
            for weight in range(5):
                for lam in partitions(weight, N):
                    for beta in (0, 1, 2):
                        P, E = csm_state(lam, N, beta)
                        self.assertTrue(P.is_symmetric(), (lam, N, beta))
                        self.assertTrue(csm_residual(P, weight, beta).is_zero(), (lam, N, beta))
                        self.assertEqual(E, csm_ground_energy(N, beta) + weight)

    def test_symbolic_sweep(self):
        beta = symbolic_beta()
        for weight in range(5):
            for lam in partitions(weight, 2):
                P, _ = csm_state(lam, 2, beta)
                self.assertTrue(csm_residual(P, weight, beta).is_zero(), lam)

    def test_hermite_polynomials(self):
        """N = 1, beta = 0 gives H_n(x) / 2^n"""
        x = sympy.Symbol("x")
        for n in range(7):
            oracle = sympy.Poly(sympy.hermite(n, x) / 2 ** n, x)
            expected = {k: Fraction(int(c.p), int(c.q)) for k, c in oracle.terms()}
            P, E = csm_state(Partition.of(n), 1, 0)
            self.assertEqual(P, SymPoly(1, expected), n)
            self.assertEqual(E, n + Fraction(1, 2))

    def test_A_preserves_symmetry(self):
        beta = symbolic_beta()
        for N in (2, 3):
            for lam in partitions(4, N):
                self.assertTrue(csm_A_apply(beta, msym(lam, N)).is_symmetric(), (lam, N))

    def test_wrong_scale(self):
        """exp(-A) instead of exp(-A/2) leaves a residual"""
        P = csm_exponential(msym(Partition.of(2), 1), 0, Fraction(-1))
        self.assertEqual(P, SymPoly(1, {(2,): 1, (0,): -1}))
        self.assertEqual(csm_residual(P, 2, 0), SymPoly(1, {(0,): 1}))


if __name__ == "__main__":
    unittest.main()
