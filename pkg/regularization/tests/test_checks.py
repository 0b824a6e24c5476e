from unittest import mock

from django.test import SimpleTestCase

from regularization import checks
from regularization.checks import (
    CheckOutcome,
    check_asymptotic,
    check_bracket_cancellation,
    check_kernel_anchor,
    run_checks,
)


class CheckTests(SimpleTestCase):
    def test_outcome_records_both_values(self):
        outcome = check_kernel_anchor()
        self.assertIsInstance(outcome, CheckOutcome)
        self.assertTrue(outcome.passed, outcome)
        self.assertEqual(outcome.expected, 0.0)

    def test_closed_form_checks(self):
        for check in (check_asymptotic, check_bracket_cancellation):
            outcome = check()
            self.assertTrue(outcome.passed, outcome)

    def test_fast_suite_passes(self):
        outcomes = run_checks("fast", samples=100_000)
        failed = [outcome for outcome in outcomes if not outcome.passed]
        self.assertEqual(failed, [])
        self.assertEqual(len({outcome.name for outcome in outcomes}), len(outcomes))

    def test_fast_suite_forwards_tolerance(self):
        with mock.patch(
            "regularization.checks.mass0_from_fit", wraps=checks.mass0_from_fit
        ) as fit, mock.patch(
            "regularization.checks.mass2_coefficient", wraps=checks.mass2_coefficient
        ) as coefficient:
            outcomes = run_checks("fast", rel_tol=1e-9, samples=10_000)
        self.assertEqual(fit.call_args.kwargs["rel_tol"], 1e-9)
        self.assertEqual(coefficient.call_args.kwargs["rel_tol"], 1e-9)
        by_name = {outcome.name: outcome for outcome in outcomes}
        self.assertTrue(by_name["c(k0) closed form"].passed)

    def test_unknown_level(self):
        with self.assertRaises(ValueError):
            run_checks("thorough")
