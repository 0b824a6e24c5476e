"""Oracle suite run by the ``verify`` command.

Each check compares a computed quantity with an independent closed form
or limit and records both values, so a failure report shows by how much
it missed.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional

from .kernels import (
    kernel_I,
    kernel_I1_dot_k,
    kernel_I_asymptotic,
    kernel_I_derivative,
    kernel_J,
    kernel_J_oracle,
)
from .quad import DEFAULT_REL_TOL
from .second import (
    CUTOFF_RESIDUAL_TOL,
    MASS2_LIMIT_COEFFICIENT,
    analytic_bracket,
    cutoff_k0,
    e2_analytic,
    e2_exact,
    mass2_coefficient,
    transition_half_rate,
)
from .zeroth import (
    ALPHA_REFERENCE,
    LAMBDA_WEAK,
    MASS0_COEFFICIENT,
    alpha_constant,
    e0_weak,
    g4_coefficient,
    lambda_opt,
    lambda_opt_closed_form,
    mass0_from_fit,
)

logger = logging.getLogger(__name__)

LEVELS = ("fast", "full")


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    passed: bool
    measured: float
    expected: float
    tolerance: float
    detail: str = ""


def _relative(name, measured, expected, tolerance, detail=""):
    passed = abs(measured - expected) <= tolerance * abs(expected)
    return CheckOutcome(name, passed, measured, expected, tolerance, detail)


def _absolute(name, measured, expected, tolerance, detail=""):
    passed = abs(measured - expected) <= tolerance
    return CheckOutcome(name, passed, measured, expected, tolerance, detail)


def check_alpha() -> CheckOutcome:
    return _absolute("alpha constant", alpha_constant(), ALPHA_REFERENCE, 1e-4)


def check_lambda_opt() -> CheckOutcome:
    g = 1e-3
    return _relative(
        "lambda_opt vs stationary point", lambda_opt(g), lambda_opt_closed_form(g), 1e-6
    )


def check_variational_minimum() -> CheckOutcome:
    expected = -((4.0 - math.sqrt(2.0)) ** 2) / (32.0 * math.pi)
    return _relative("e0_weak minimum", e0_weak(1.0, LAMBDA_WEAK), expected, 1e-10)


def check_kernel_anchor() -> CheckOutcome:
    worst = 0.0
    for lam in (1.0, LAMBDA_WEAK, 8.0):
        expected = e0_weak(1.0, lam)
        deviation = abs(kernel_I(0.0, lam).to_float() - expected) / abs(expected)
        worst = max(worst, deviation)
    return _absolute("g^2 I(0) = e0_weak", worst, 0.0, 1e-8, "worst relative deviation")


def check_small_k_law() -> CheckOutcome:
    k = 0.01 * LAMBDA_WEAK
    coefficient = kernel_I1_dot_k(k, LAMBDA_WEAK).to_float() / (k * k)
    return _relative(
        "k I1 ~ -k^2/(18 pi^2)", coefficient, -1.0 / (18.0 * math.pi ** 2), 1e-2
    )


def check_derivative() -> CheckOutcome:
    lam = LAMBDA_WEAK
    k = lam
    h = 1e-5 * lam
    upper = kernel_I(k + h, lam).to_float()
    lower = kernel_I(k - h, lam).to_float()
    numeric = (upper - lower) / (2 * h)
    analytic = kernel_I_derivative(k, lam).to_float()
    return _relative("dI/dk vs central difference", analytic, numeric, 1e-6)


def check_asymptotic() -> CheckOutcome:
    lam = LAMBDA_WEAK
    k = 8.0 * lam
    ratio = (kernel_I(k, lam) / kernel_I_asymptotic(k, lam)).to_float()
    expected = 1.0 - 1.5 / k * (1.0 + 0.75 * lam * lam / (k * k))
    return _relative("I/I_asymptotic at 8 lambda", ratio, expected, 5e-3)


def check_cutoff_residual() -> CheckOutcome:
    cutoff = cutoff_k0(1e-2, LAMBDA_WEAK)
    return _absolute("cutoff residual", abs(cutoff.residual), 0.0, CUTOFF_RESIDUAL_TOL)


def check_bracket_cancellation() -> CheckOutcome:
    lam = LAMBDA_WEAK
    return _relative(
        "closed-form bracket limit",
        analytic_bracket(1.0, lam, 1e3 * lam),
        e0_weak(1.0, lam),
        1e-6,
    )


def check_mass0_fit(rel_tol: float = DEFAULT_REL_TOL) -> CheckOutcome:
    g = 0.1
    coefficient = (mass0_from_fit(g, rel_tol=rel_tol) - 1.0) / (g * g)
    return _relative(
        "mass0 from moving energy fit", coefficient, MASS0_COEFFICIENT, 1e-3
    )


def check_mass2_coefficient(rel_tol: float = DEFAULT_REL_TOL) -> CheckOutcome:
    k0 = 20.0
    expected = MASS2_LIMIT_COEFFICIENT * (1.0 - (1.0 + k0 / 2.0) ** -2)
    return _relative(
        "c(k0) closed form", mass2_coefficient(k0, rel_tol=rel_tol), expected, 1e-8
    )


def check_j_oracle(samples: int, seed: int) -> CheckOutcome:
    lam = LAMBDA_WEAK
    estimate = kernel_J_oracle(0.0, lam, samples=samples, seed=seed)
    expected = -g4_coefficient(lam)
    tolerance = 3.0 * estimate.standard_error
    detail = (
        f"{samples} samples, seed {seed}; closed-form J(0) = "
        f"{format(kernel_J(0.0, lam), '.6g')}"
    )
    return _absolute(
        "J(0) Monte-Carlo vs g^4 term", estimate.value, expected, tolerance, detail
    )


def check_rate(g: float, rel_tol: float) -> CheckOutcome:
    lam = lambda_opt(g)
    cutoff = cutoff_k0(g, lam)
    _, _, e2 = e2_exact(g, lam, cutoff, rel_tol=rel_tol)
    return _relative(
        f"|Im E2| = w/2 at g={g:g}",
        abs(e2.im),
        transition_half_rate(g, lam, cutoff.k0),
        1e-2,
    )


def check_ratio(g: float, rel_tol: float) -> CheckOutcome:
    lam = lambda_opt(g)
    cutoff = cutoff_k0(g, lam)
    _, _, e2 = e2_exact(g, lam, cutoff, rel_tol=rel_tol)
    return _absolute(
        f"E2/E2_analytic at g={g:g}", e2.re / e2_analytic(g, lam, cutoff.k0), 1.0, 0.2
    )


def run_checks(
    level: str = "fast",
    seed: int = 0xC0FFEE,
    rel_tol: float = DEFAULT_REL_TOL,
    samples: Optional[int] = None,
) -> List[CheckOutcome]:
    if level not in LEVELS:
        raise ValueError(f"Unknown check level {level!r}")
    if samples is None:
        samples = 200_000 if level == "fast" else 10_000_000
    checks: List[Callable[[], CheckOutcome]] = [
        check_alpha,
        check_lambda_opt,
        check_variational_minimum,
        check_kernel_anchor,
        check_small_k_law,
        check_derivative,
        check_asymptotic,
        check_cutoff_residual,
        check_bracket_cancellation,
        lambda: check_mass0_fit(rel_tol),
        lambda: check_mass2_coefficient(rel_tol),
        lambda: check_j_oracle(samples, seed),
    ]
    if level == "full":
        checks += [
            lambda: check_rate(1e-3, rel_tol),
            lambda: check_rate(1e-2, rel_tol),
            lambda: check_ratio(1e-2, rel_tol),
        ]
    outcomes = []
    for check in checks:
        outcome = check()
        logger.info("%s: %s", outcome.name, "ok" if outcome.passed else "FAILED")
        outcomes.append(outcome)
    return outcomes
