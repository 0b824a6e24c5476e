import math

from regularization.exceptions import DomainError
from regularization.kernels import (
    kernel_components,
    kernel_I_asymptotic,
    kernel_I_derivative,
    kernel_J,
)
from regularization.serializers import KernelRowSerializer
from regularization.zeroth import LAMBDA_WEAK

from ._numeric import NumericCommand


def kernel_row(k: float, lam: float) -> dict:
    ki1, i2, i3 = kernel_components(k, lam)
    total = ki1 + i2 + i3
    j = kernel_J(k, lam)
    row = {
        "k": k,
        "k_i1": str(ki1),
        "i2": str(i2),
        "i3": str(i3),
        "i": str(total),
        "i_derivative": None,
        "j": j if math.isfinite(j) else None,
        "i_asymptotic": None,
        "asymptotic_ratio": None,
    }
    if k > 0.0:
        asymptotic = kernel_I_asymptotic(k, lam)
        row["i_derivative"] = str(kernel_I_derivative(k, lam))
        row["i_asymptotic"] = str(asymptotic)
        row["asymptotic_ratio"] = (asymptotic / total).to_float()
    return row


class Command(NumericCommand):
    help = "Tabulate the kernels at the given momenta in m*exp(s) notation."
    serializer_class = KernelRowSerializer
    many = True

    def add_command_arguments(self, parser):
        parser.add_argument(
            "--k", type=float, nargs="*", default=[], help="Momenta, k >= 0."
        )
        parser.add_argument(
            "--lambda",
            dest="lam",
            type=float,
            default=LAMBDA_WEAK,
            help="Localization width (default: the weak-coupling optimum).",
        )

    def compute(self, k, lam=LAMBDA_WEAK, **options):
        if not k:
            raise DomainError("kernels needs at least one --k value")
        if not lam > 0.0:
            raise DomainError(f"Localization width must be positive, got {lam}")
        return [kernel_row(value, lam) for value in k]
