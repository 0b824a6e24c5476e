from regularization.serializers import ZerothReportSerializer
from regularization.zeroth import zeroth_result

from ._numeric import NumericCommand


class Command(NumericCommand):
    help = "Zeroth-order energy, optimal localization width and effective mass."
    serializer_class = ZerothReportSerializer

    def add_command_arguments(self, parser):
        parser.add_argument("--g", type=float, required=True, help="Coupling constant.")
        parser.add_argument(
            "--lambda",
            dest="lam",
            type=float,
            default=None,
            help="Localization width; minimized over when omitted.",
        )

    def compute(self, g, lam=None, **options):
        result = zeroth_result(g, lam)
        return {
            "g": g,
            "lambda": result.lambda_opt,
            "lambda_source": "optimized" if lam is None else "given",
            "e0_weak": result.e0_weak,
            "e0_full": result.e0_full,
            "mass0": result.mass0,
        }
