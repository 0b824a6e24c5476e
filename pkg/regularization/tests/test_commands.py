import json
import math
import os
import tempfile
from io import StringIO
from unittest import mock

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from regularization.checks import CheckOutcome
from regularization.exceptions import NonConvergence
from regularization.second import mass2, mass2_first_order
from regularization.sweep import COLUMNS, failed_row
from regularization.zeroth import LAMBDA_WEAK, MASS0_COEFFICIENT
from uvreg.cli import main


def run(*args):
    out = StringIO()
    call_command(*args, stdout=out)
    return out.getvalue()


def run_json(*args):
    return json.loads(run(*args, "--format", "json"))


class CommandTestCase(SimpleTestCase):
    def assertExitCode(self, code, *args):
        with self.assertRaises(CommandError) as caught:
            run(*args)
        self.assertEqual(caught.exception.returncode, code)
        return caught.exception


class ZerothCommandTests(CommandTestCase):
    def test_free_particle_text(self):
        text = run("e0", "--g", "0")
        self.assertIn("lambda_source: optimized", text)
        self.assertIn("mass0:", text)
        lines = dict(line.split(":", 1) for line in text.splitlines())
        self.assertEqual(float(lines["mass0"]), 1.0)
        self.assertEqual(float(lines["e0_weak"]), 0.0)
        for key in ("e0_weak", "e0_full"):
            self.assertFalse(lines[key].strip().startswith("-"), lines[key])

    def test_given_width(self):
        report = run_json("e0", "--g", "0.1", "--lambda", "2.5")
        self.assertEqual(report["lambda"], 2.5)
        self.assertEqual(report["lambda_source"], "given")

    def test_negative_coupling(self):
        self.assertExitCode(2, "e0", "--g", "-1")

    def test_non_positive_tolerance(self):
        self.assertExitCode(2, "e0", "--g", "0.1", "--tol", "0")


class SecondIterationCommandTests(CommandTestCase):
    def test_invalid_coupling(self):
        error = self.assertExitCode(2, "e2", "--g", "-1")
        self.assertIn("0 < g < 1", str(error))

    @mock.patch("regularization.management.commands.e2.iterate")
    def test_non_convergence(self, iterate):
        iterate.side_effect = NonConvergence("Integral on [0, 30] did not converge")
        error = self.assertExitCode(3, "e2", "--g", "0.01")
        self.assertIn("NonConvergence", str(error))

    def test_single_row(self):
        row = run_json("e2", "--g", "0.01")
        self.assertEqual(tuple(row), COLUMNS)
        self.assertLess(row["e2_im"], 0.0)
        self.assertAlmostEqual(abs(row["e2_im"]) / row["w_half"], 1.0, delta=1e-2)
        self.assertIsNone(row["error"])


class SweepCommandTests(CommandTestCase):
    grid = ("sweep", "--g-min", "0.001", "--g-max", "0.01", "--points", "2")
    rows = [
        failed_row(0.001, NonConvergence("no root")),
        failed_row(0.01, NonConvergence("no root")),
    ]

    @mock.patch("regularization.management.commands.sweep.run_sweep")
    def test_writes_csv_file(self, run_sweep):
        run_sweep.return_value = self.rows
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "sweep.csv")
            run(*self.grid, "--out", path)
            with open(path, encoding="utf-8") as handle:
                lines = handle.read().splitlines()
        self.assertEqual(lines[0], ",".join(COLUMNS))
        self.assertEqual(len(lines), 3)
        grid = run_sweep.call_args[0][0]
        self.assertAlmostEqual(grid[0], 0.001, delta=1e-18)
        self.assertAlmostEqual(grid[1], 0.01, delta=1e-17)

    @mock.patch("regularization.management.commands.sweep.run_sweep")
    def test_json_to_stdout(self, run_sweep):
        run_sweep.return_value = self.rows
        rows = json.loads(run(*self.grid, "--format", "json"))
        self.assertEqual([row["g"] for row in rows], [0.001, 0.01])
        self.assertEqual(rows[0]["error"], "NonConvergence: no root")
        self.assertIsNone(rows[0]["e2_re"])

    @mock.patch("regularization.management.commands.sweep.run_sweep")
    def test_unwritable_output(self, run_sweep):
        run_sweep.return_value = self.rows
        missing = os.path.join(tempfile.gettempdir(), "missing-dir", "x", "s.csv")
        self.assertExitCode(4, *self.grid, "--out", missing)

    def test_invalid_grid(self):
        self.assertExitCode(
            2, "sweep", "--g-min", "0.5", "--g-max", "0.1", "--points", "3"
        )

    def test_invalid_jobs(self):
        self.assertExitCode(2, *self.grid, "--jobs", "0")


class VerifyCommandTests(CommandTestCase):
    @mock.patch("regularization.management.commands.verify.run_checks")
    def test_failure_exits_one(self, run_checks):
        run_checks.return_value = [
            CheckOutcome("alpha constant", True, 0.736559, 0.736559, 1e-4),
            CheckOutcome("cutoff residual", False, 1e-6, 0.0, 1e-10),
        ]
        out = StringIO()
        with self.assertRaises(CommandError) as caught:
            call_command("verify", stdout=out)
        self.assertEqual(caught.exception.returncode, 1)
        self.assertIn("cutoff residual", str(caught.exception))
        self.assertIn("alpha constant", out.getvalue())

    @mock.patch("regularization.management.commands.verify.run_checks")
    def test_passing_suite(self, run_checks):
        run_checks.return_value = [
            CheckOutcome("alpha constant", True, 0.736559, 0.736559, 1e-4),
        ]
        outcomes = run_json("verify", "--level", "full", "--seed", "7")
        self.assertEqual(outcomes[0]["name"], "alpha constant")
        kwargs = run_checks.call_args[1]
        self.assertEqual((kwargs["level"], kwargs["seed"]), ("full", 7))


class KernelCommandTests(CommandTestCase):
    def test_rows(self):
        rows = run_json("kernels", "--k", "0", "1", "40")
        self.assertEqual([row["k"] for row in rows], [0.0, 1.0, 40.0])
        self.assertIsNone(rows[0]["i_derivative"])
        self.assertIsNone(rows[0]["i_asymptotic"])
        self.assertIn("*exp(", rows[1]["i"])
        self.assertAlmostEqual(rows[2]["asymptotic_ratio"], 1.0, delta=0.05)

    def test_text_marks_missing_values(self):
        text = run("kernels", "--k", "0", "--lambda", "2")
        header, row = text.splitlines()
        self.assertTrue(header.startswith("k "))
        self.assertIn(" - ", row)

    def test_far_j_is_null(self):
        rows = run_json("kernels", "--k", str(30 * LAMBDA_WEAK))
        self.assertIsNone(rows[0]["j"])

    def test_needs_momenta(self):
        self.assertExitCode(2, "kernels")

    def test_negative_momentum(self):
        self.assertExitCode(2, "kernels", "--k", "-1")


class MassCommandTests(CommandTestCase):
    def test_free_particle(self):
        report = run_json("mass", "--g", "0")
        self.assertEqual(report["mass0"], 1.0)
        self.assertEqual(report["mass2"], 1.0)
        self.assertIsNone(report["k0"])
        self.assertEqual(report["mass0_coefficient"], MASS0_COEFFICIENT)

    def test_weak_coupling(self):
        report = run_json("mass", "--g", "0.1")
        self.assertGreater(report["k0"], 0.0)
        self.assertGreater(report["mass2"], report["mass2_first_order"])
        self.assertGreater(report["mass2_first_order"], 1.0)

    def test_masses_match_second_iteration(self):
        report = run_json("mass", "--g", "0.1", "--tol", "1e-9")
        args = (0.1, report["lambda"], report["k0"], 1e-9)
        self.assertEqual(report["mass2"], mass2(*args))
        self.assertEqual(report["mass2_first_order"], mass2_first_order(*args))
        coefficient = report["mass2_coefficient"]
        self.assertEqual(report["mass2"], 1.0 / (1.0 - 0.1 * 0.1 * coefficient))


class PerturbationCommandTests(CommandTestCase):
    def test_rest_self_energy(self):
        report = run_json("pt", "--g", "1", "--cutoff", "2")
        expected = -math.log(2.0) / (2.0 * math.pi ** 2)
        self.assertAlmostEqual(report["self_energy"], expected, delta=1e-16)
        self.assertAlmostEqual(report["pt_mass"], 1.0 + 1.0 / (6.0 * math.pi ** 2))

    def test_above_threshold(self):
        self.assertExitCode(2, "pt", "--g", "1", "--cutoff", "2", "--p", "1.5")


class ConsoleScriptTests(SimpleTestCase):
    @mock.patch("django.core.management.execute_from_command_line")
    def test_check_runs_verify(self, execute):
        main(["uvreg", "check", "--level", "fast"])
        execute.assert_called_once_with(["uvreg", "verify", "--level", "fast"])

    @mock.patch("django.core.management.execute_from_command_line")
    def test_other_commands_pass_through(self, execute):
        main(["uvreg", "e0", "--g", "0.1"])
        execute.assert_called_once_with(["uvreg", "e0", "--g", "0.1"])
