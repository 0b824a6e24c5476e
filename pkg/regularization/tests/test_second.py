import math

import mpmath
import numpy as np
from django.test import SimpleTestCase

from regularization.exceptions import DomainError
from regularization.kernels import kernel_I
from regularization.model import pt_self_energy
from regularization.second import (
    MASS2_LIMIT_COEFFICIENT,
    ComplexEnergy,
    _Integrands,
    analytic_bracket,
    analytic_f,
    cutoff_k0,
    e2_analytic,
    e2_exact,
    e2_moving_shift,
    e2_singular,
    iterate,
    k0_asymptotic,
    mass2,
    mass2_coefficient,
    mass2_first_order,
    pole_contribution,
    solve_cutoff_log_equation,
    switch_point,
    transition_half_rate,
)
from regularization.zeroth import LAMBDA_WEAK, e0_weak, lambda_opt


class CutoffTests(SimpleTestCase):
    def test_asymptotic_cutoff(self):
        expected = 2.0 * math.sqrt(3.0 * math.log(1e4))
        self.assertAlmostEqual(k0_asymptotic(1e-4, 2.0), expected, delta=1e-14)

    def test_root_of_denominator(self):
        g = 1e-2
        lam = lambda_opt(g)
        cutoff = cutoff_k0(g, lam)
        self.assertLess(abs(cutoff.residual), 1e-10)
        k0 = cutoff.k0
        free = k0 * k0 / 2.0 + k0
        shift = (kernel_I(k0, lam) * (g * g)).to_float()
        self.assertLess(abs(free + shift - e0_weak(g, lam)) / free, 1e-9)

    def test_reference_values(self):
        for g, expected in ((1e-2, 20.8), (1e-4, 25.76), (1e-6, 29.9)):
            k0 = cutoff_k0(g, lambda_opt(g)).k0
            self.assertAlmostEqual(k0, expected, delta=0.15, msg=g)

    def test_cutoff_grows_as_coupling_falls(self):
        values = [cutoff_k0(g, LAMBDA_WEAK).k0 for g in (1e-1, 1e-3, 1e-5)]
        self.assertEqual(values, sorted(values))

    def test_log_equation_tracks_exact_root(self):
        g = 1e-6
        exact = cutoff_k0(g, LAMBDA_WEAK).k0
        approximate = solve_cutoff_log_equation(g, LAMBDA_WEAK)
        self.assertAlmostEqual(approximate / exact, 1.0, delta=5e-3)

    def test_asymptotic_cutoff_is_approached_from_above(self):
        ratios = []
        for g in (1e-2, 1e-4, 1e-6):
            lam = lambda_opt(g)
            ratios.append(cutoff_k0(g, lam).k0 / k0_asymptotic(g, lam))
        self.assertEqual(ratios, sorted(ratios, reverse=True))
        self.assertGreater(ratios[-1], 1.0)

    def test_domain(self):
        for g in (0.0, 1.0, -0.5):
            with self.assertRaises(DomainError):
                cutoff_k0(g, LAMBDA_WEAK)


class PoleTests(SimpleTestCase):
    def test_pole_contribution_sign(self):
        self.assertEqual(pole_contribution(-2.0), complex(0.0, -2.0 * math.pi))

    def test_switch_point(self):
        self.assertEqual(switch_point(None, 2.0), 12.0)
        self.assertEqual(switch_point(20.0, 4.0), 28.0)
        self.assertEqual(switch_point(5.0, 4.0), 24.0)


class SecondIterationTests(SimpleTestCase):
    g = 1e-2

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.lam = lambda_opt(cls.g)
        cls.result = iterate(cls.g)

    def test_bundle(self):
        result = self.result
        self.assertTrue(result.has_pole)
        self.assertEqual(result.params.g, self.g)
        self.assertEqual(result.params.lam, self.lam)
        self.assertEqual(result.e0, e0_weak(self.g, self.lam))
        expected = cutoff_k0(self.g, self.lam).k0
        self.assertAlmostEqual(result.k0.k0, expected, delta=1e-12)

    def test_energy_is_ratio_of_a_and_b(self):
        e2 = complex(self.result.a) / complex(self.result.b)
        self.assertAlmostEqual(abs(e2 - complex(self.result.e2)), 0.0, delta=1e-18)

    def test_energy_decays(self):
        self.assertLess(self.result.e2.im, 0.0)

    def test_imaginary_part_is_half_the_rate(self):
        rate = self.result.transition_half_rate
        self.assertGreater(rate, 0.0)
        self.assertAlmostEqual(abs(self.result.e2.im) / rate, 1.0, delta=1e-2)

    def test_close_to_closed_form(self):
        self.assertAlmostEqual(self.result.ratio, 1.0, delta=0.15)

    def test_singular_energy_is_cut_perturbation_theory(self):
        k0 = self.result.k0.k0
        self.assertEqual(self.result.e2_singular, pt_self_energy(0.0, k0, self.g))
        self.assertEqual(e2_singular(self.g, self.lam, k0), self.result.e2_singular)

    def test_mass(self):
        k0 = self.result.k0.k0
        coefficient = mass2_coefficient(k0)
        self.assertAlmostEqual(
            self.result.mass2, 1.0 / (1.0 - self.g ** 2 * coefficient), delta=1e-15
        )
        self.assertGreater(self.result.mass2, mass2_first_order(self.g, self.lam, k0))

    def test_j_kernel_is_a_small_correction(self):
        _, _, without_j = e2_exact(self.g, self.lam, self.result.k0, include_j=False)
        self.assertAlmostEqual(without_j.re / self.result.e2.re, 1.0, delta=1e-3)

    def test_split_point_invariance(self):
        split = 1.2 * switch_point(self.result.k0.k0, self.lam)
        _, _, moved = e2_exact(self.g, self.lam, self.result.k0, split=split)
        difference = abs(complex(moved) - complex(self.result.e2))
        self.assertLess(difference, 1e-6 * abs(complex(self.result.e2)))

    def test_split_below_pole(self):
        with self.assertRaises(DomainError):
            e2_exact(self.g, self.lam, self.result.k0, split=0.5 * self.result.k0.k0)

class SecondIterationSweepTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.results = {g: iterate(g) for g in np.geomspace(1e-4, 1e-1, 10)}

    def test_ratio_stays_flat(self):
        ratios = [result.ratio for result in self.results.values()]
        for ratio in ratios:
            self.assertGreaterEqual(ratio, 0.8)
            self.assertLessEqual(ratio, 1.2)
        self.assertLess((max(ratios) - min(ratios)) / min(ratios), 0.15)

    def test_imaginary_part_tracks_rate(self):
        for g, result in self.results.items():
            # Corrections of order |E0| exp(k0^2/4 lambda^2)/k0 grow with g.
            tolerance = 1e-2 if g <= 1.01e-2 else 2.5e-2
            ratio = abs(result.e2.im) / result.transition_half_rate
            self.assertAlmostEqual(ratio, 1.0, delta=tolerance, msg=g)

    def test_weak_coupling_normalization(self):
        result = iterate(1e-3)
        self.assertLess(abs(result.b.re - 1.0), 0.02)
        self.assertAlmostEqual(
            abs(result.e2.im) / result.transition_half_rate, 1.0, delta=1e-2
        )

    def test_strongest_coupling(self):
        result = self.results[max(self.results)]
        self.assertAlmostEqual(
            abs(result.e2.im) / result.transition_half_rate, 1.0, delta=2.5e-2
        )
        _, _, without_j = e2_exact(
            result.params.g, result.params.lam, result.k0, include_j=False
        )
        self.assertLess(abs(without_j.re / result.e2.re - 1.0), 5e-3)

    def test_singular_limit_is_approached(self):
        gaps = []
        for g in (1e-2, 1e-4, 1e-6):
            result = iterate(g)
            gaps.append(abs(result.e2.re - result.e2_singular) / g ** 2)
        self.assertEqual(gaps, sorted(gaps, reverse=True))

    def test_b_integrand_regular_at_small_momentum(self):
        lam = lambda_opt(1e-2)
        integrands = _Integrands(1e-2, lam, include_j=True)
        small = integrands.full_b(1e-6 * lam)
        self.assertTrue(math.isfinite(small))
        self.assertLess(abs(small), 1e6 * abs(integrands.full_b(lam)))



class ClosedFormTests(SimpleTestCase):
    def test_bracket_cancels_weak_energy(self):
        lam = LAMBDA_WEAK
        value = analytic_bracket(0.3, lam, 1e3 * lam)
        self.assertAlmostEqual(value / e0_weak(0.3, lam), 1.0, delta=1e-12)

    def test_f_matches_mpmath(self):
        with mpmath.workdps(30):
            exact = mpmath.quad(
                lambda t: t * mpmath.exp(-3 * t * t / 4) / (1 + t / 2), [0, 3]
            ) / (4 * mpmath.pi ** 2)
        self.assertAlmostEqual(analytic_f(3.0) / float(exact), 1.0, delta=1e-9)
        self.assertEqual(analytic_f(0.0), 0.0)

    def test_domain(self):
        with self.assertRaises(DomainError):
            e2_analytic(1e-2, LAMBDA_WEAK, 0.0)


class MassTests(SimpleTestCase):
    def test_coefficient_closed_form(self):
        for k0 in (1.0, 20.0, 30.0):
            expected = MASS2_LIMIT_COEFFICIENT * (1.0 - (1.0 + k0 / 2.0) ** -2)
            self.assertAlmostEqual(mass2_coefficient(k0) / expected, 1.0, delta=1e-10)

    def test_coefficient_domain(self):
        with self.assertRaises(DomainError):
            mass2_coefficient(0.0)

    def test_free_particle(self):
        self.assertEqual(mass2(0.0, LAMBDA_WEAK), 1.0)
        self.assertEqual(mass2_first_order(0.0, LAMBDA_WEAK), 1.0)

    def test_moving_shift_is_quadratic(self):
        g, k0 = 0.1, 20.0
        self.assertEqual(e2_moving_shift(0.0, g, LAMBDA_WEAK, k0), 0.0)
        small = e2_moving_shift(0.05, g, LAMBDA_WEAK, k0)
        large = e2_moving_shift(0.1, g, LAMBDA_WEAK, k0)
        self.assertAlmostEqual(large / small, 4.0, delta=1e-9)

    def test_moving_shift_gives_mass(self):
        g, k0, p = 0.1, 20.0, 0.05
        shift = e2_moving_shift(p, g, LAMBDA_WEAK, k0)
        self.assertAlmostEqual(
            p * p / (2.0 * shift) / mass2(g, LAMBDA_WEAK, k0), 1.0, delta=1e-9
        )


class ComplexEnergyTests(SimpleTestCase):
    def test_round_trip(self):
        value = ComplexEnergy.from_complex(complex(-1.5, -0.25))
        self.assertEqual((value.re, value.im), (-1.5, -0.25))
        self.assertEqual(complex(value), complex(-1.5, -0.25))


class IterateDomainTests(SimpleTestCase):
    def test_rejects_coupling_outside_unit_interval(self):
        for g in (0.0, 1.0, -0.1):
            with self.assertRaises(DomainError):
                iterate(g)
        with self.assertRaises(DomainError):
            transition_half_rate(1.5, LAMBDA_WEAK)
