from regularization.model import pt_mass
from regularization.second import (
    MASS2_LIMIT_COEFFICIENT,
    cutoff_k0,
    mass2,
    mass2_coefficient,
    mass2_first_order,
)
from regularization.serializers import MassReportSerializer
from regularization.zeroth import MASS0_COEFFICIENT, lambda_opt, mass0

from ._numeric import NumericCommand


class Command(NumericCommand):
    help = "Zeroth-order, perturbative and second-iteration effective masses."
    serializer_class = MassReportSerializer

    def add_command_arguments(self, parser):
        parser.add_argument("--g", type=float, required=True, help="0 <= g < 1.")
        parser.add_argument("--lambda", dest="lam", type=float, default=None)

    def compute(self, g, lam=None, tol=None, **options):
        lam = lambda_opt(g) if lam is None else lam
        if g == 0.0:
            # No cutoff without coupling; c(k0) takes its k0 -> inf value.
            k0 = None
            coefficient = MASS2_LIMIT_COEFFICIENT
        else:
            k0 = cutoff_k0(g, lam).k0
            coefficient = mass2_coefficient(k0, tol)
        return {
            "g": g,
            "lambda": lam,
            "mass0": mass0(g),
            "mass0_coefficient": MASS0_COEFFICIENT,
            "pt_mass": pt_mass(g),
            "k0": k0,
            "mass2_coefficient": coefficient,
            "mass2": mass2(g, lam, k0, tol),
            "mass2_first_order": mass2_first_order(g, lam, k0, tol),
        }
