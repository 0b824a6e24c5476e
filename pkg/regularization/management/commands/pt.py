from django.conf import settings

from regularization.model import pt_mass, pt_self_energy
from regularization.serializers import PerturbationReportSerializer

from ._numeric import NumericCommand


class Command(NumericCommand):
    help = "Second-order perturbative self-energy with a momentum cutoff."
    serializer_class = PerturbationReportSerializer

    def add_command_arguments(self, parser):
        parser.add_argument("--g", type=float, required=True)
        parser.add_argument("--cutoff", type=float, required=True, help="K >= 0.")
        parser.add_argument(
            "--p", type=float, default=0.0, help="Total momentum, 0 <= P < 1."
        )

    def compute(self, g, cutoff, p=0.0, tol=None, **options):
        return {
            "g": g,
            "p": p,
            "cutoff": cutoff,
            "self_energy": pt_self_energy(
                p, cutoff, g, tol, settings.UVREG_MAX_EVALUATIONS
            ),
            "pt_mass": pt_mass(g),
        }
