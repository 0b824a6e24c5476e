from django.conf import settings

from regularization.serializers import SweepRowSerializer
from regularization.second import iterate
from regularization.sweep import row_from_result

from ._numeric import NumericCommand


class Command(NumericCommand):
    help = "Second-iteration energy, decay rate and mass for one coupling value."
    serializer_class = SweepRowSerializer

    def add_command_arguments(self, parser):
        parser.add_argument(
            "--g", type=float, required=True, help="Coupling constant, 0 < g < 1."
        )
        parser.add_argument(
            "--lambda",
            dest="lam",
            type=float,
            default=None,
            help="Localization width (default: the zeroth-order optimum).",
        )
        parser.add_argument(
            "--without-j",
            action="store_true",
            help="Drop the g^4 J kernel from the denominator.",
        )

    def compute(self, g, lam=None, without_j=False, tol=None, **options):
        result = iterate(
            g,
            lam,
            include_j=not without_j,
            rel_tol=tol,
            max_evaluations=settings.UVREG_MAX_EVALUATIONS,
        )
        return row_from_result(result)
