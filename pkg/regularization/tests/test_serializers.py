import io

from django.test import SimpleTestCase
from rest_framework.parsers import JSONParser

from regularization.checks import CheckOutcome
from regularization.second import iterate
from regularization.serializers import (
    CheckOutcomeSerializer,
    SweepRowSerializer,
    ZerothReportSerializer,
    render_json,
)
from regularization.sweep import COLUMNS, row_from_result


def sweep_row(**values):
    row = dict.fromkeys(COLUMNS)
    row.update(values)
    return row


class SweepRowSerializerTests(SimpleTestCase):
    def test_field_names_follow_the_columns(self):
        data = SweepRowSerializer(sweep_row(g=0.1, **{"lambda": 3.9})).data
        self.assertEqual(tuple(data), COLUMNS)
        self.assertEqual(data["lambda"], 3.9)
        self.assertIsNone(data["k0"])

    def test_json_round_trip(self):
        rows = [
            sweep_row(g=1e-3, e2_re=-1.2345678901234567e-5, e2_im=-3.3e-9),
            sweep_row(g=1e-2, error="NonConvergence: Integral did not converge"),
        ]
        text = render_json(SweepRowSerializer(rows, many=True).data)
        parsed = JSONParser().parse(io.BytesIO(text.encode()))
        self.assertEqual(parsed, rows)

    def test_computed_row_round_trip(self):
        row = row_from_result(iterate(1e-2))
        self.assertIsNone(row["error"])
        numeric = [column for column in COLUMNS if column != "error"]
        for column in numeric:
            self.assertIsInstance(row[column], float, column)
        text = render_json(SweepRowSerializer(row).data)
        parsed = JSONParser().parse(io.BytesIO(text.encode()))
        self.assertEqual(parsed, row)
        serializer = SweepRowSerializer(data=parsed)
        self.assertTrue(serializer.is_valid(), serializer.errors)
        for column in numeric:
            self.assertEqual(serializer.validated_data[column], row[column], column)

    def test_validation(self):
        serializer = SweepRowSerializer(data={"g": 0.1, "lambda": 3.9})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        self.assertEqual(serializer.validated_data["lambda"], 3.9)
        serializer = SweepRowSerializer(data={"lambda": 3.9})
        self.assertFalse(serializer.is_valid())
        self.assertIn("g", serializer.errors)


class ReportSerializerTests(SimpleTestCase):
    def test_zeroth_report_rejects_unknown_lambda_source(self):
        data = {
            "g": 0.1,
            "lambda": 3.9,
            "lambda_source": "guessed",
            "e0_weak": -0.1,
            "e0_full": -0.1,
            "mass0": 1.0,
        }
        serializer = ZerothReportSerializer(data=data)
        self.assertFalse(serializer.is_valid())
        self.assertIn("lambda_source", serializer.errors)

    def test_check_outcome(self):
        outcome = CheckOutcome("alpha constant", True, 0.7365, 0.736559, 1e-4)
        data = CheckOutcomeSerializer(outcome).data
        self.assertEqual(data["name"], "alpha constant")
        self.assertIs(data["passed"], True)
        self.assertEqual(data["detail"], "")
