"""Quadrature, root finding and scalar minimization.

Thin wrappers around QUADPACK and the Brent solvers of scipy that turn
their status codes into ``regularization.exceptions`` errors and report
evaluation counts.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import integrate, optimize

from .exceptions import (
    DegeneratePole,
    DomainError,
    NoSignChange,
    NonConvergence,
    PoleNotBracketed,
)

logger = logging.getLogger(__name__)

DEFAULT_REL_TOL = 1e-10
DEFAULT_MAX_EVALUATIONS = 1_000_000
ABS_FLOOR = 1e-300

# QUADPACK rejects relative tolerances below 50 machine epsilons.
_MIN_REL_TOL = 2e-14
# One Gauss-Kronrod 21-point panel per subdivision.
_EVALUATIONS_PER_PANEL = 21

PV_WINDOW = 0.5
DEGENERATE_SLOPE = 1e-12
_EPS = float(np.finfo(float).eps)

RealFunction = Callable[[float], float]


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    evaluations: int


@dataclass(frozen=True)
class PVResult:
    principal_value: float
    residue_coefficient: float
    error_estimate: float = 0.0
    evaluations: int = 0


def _quad(f, a, b, rel_tol, max_evaluations) -> QuadResult:
    limit = max(50, max_evaluations // _EVALUATIONS_PER_PANEL)
    result = integrate.quad(
        f,
        a,
        b,
        epsabs=ABS_FLOOR,
        epsrel=max(rel_tol, _MIN_REL_TOL),
        limit=limit,
        full_output=1,
    )
    value, error, info = result[:3]
    if len(result) > 3:
        message = result[3]
        # ier 2 and 4: the tolerance sits below the round-off floor of f.
        if "roundoff" in message.lower():
            logger.warning(
                "Accepted round-off limited integral on [%s, %s]: %r +- %.3g",
                a,
                b,
                value,
                error,
            )
        else:
            raise NonConvergence(
                f"Integral on [{a}, {b}] did not converge: {message.splitlines()[0]}"
            )
    evaluations = int(info["neval"])
    if not math.isfinite(value):
        raise NonConvergence(f"Integral on [{a}, {b}] is not finite")
    logger.debug("quad [%s, %s] -> %r (%d evaluations)", a, b, value, evaluations)
    return QuadResult(float(value), float(abs(error)), max(evaluations, 1))


def integrate_finite(
    f: RealFunction,
    a: float,
    b: float,
    rel_tol: float = DEFAULT_REL_TOL,
    max_evaluations: int = DEFAULT_MAX_EVALUATIONS,
) -> QuadResult:
    if not a < b:
        raise DomainError(f"Empty or reversed interval [{a}, {b}]")
    return _quad(f, a, b, rel_tol, max_evaluations)


def integrate_semi_infinite(
    f: RealFunction,
    a: float,
    rel_tol: float = DEFAULT_REL_TOL,
    max_evaluations: int = DEFAULT_MAX_EVALUATIONS,
) -> QuadResult:
    """Integral of f over [a, inf).

    QUADPACK maps the half line onto (0, 1] with x = a + (1 - t)/t, which
    adds no endpoint singularity for integrands that decay like a Gaussian.
    """
    return _quad(f, a, np.inf, rel_tol, max_evaluations)


def _slope(f: RealFunction, x: float, step: float) -> Tuple[float, float]:
    """Central difference of f at x and an estimate of its error.

    The error is the Richardson difference against the doubled step plus
    the round-off of the function values.
    """
    f_x = abs(f(x))
    fine = (f(x + step) - f(x - step)) / (2.0 * step)
    coarse = (f(x + 2.0 * step) - f(x - 2.0 * step)) / (4.0 * step)
    roundoff = _EPS * max(f_x, abs(fine) * step) / step
    return fine, abs(coarse - fine) / 3.0 + roundoff


def integrate_principal_value(
    f_num: RealFunction,
    f_den: RealFunction,
    pole: float,
    a: float,
    b: float,
    rel_tol: float = DEFAULT_REL_TOL,
    max_evaluations: int = DEFAULT_MAX_EVALUATIONS,
    den_derivative: Optional[RealFunction] = None,
    window: float = PV_WINDOW,
) -> PVResult:
    """Principal value of the integral of f_num/f_den over [a, b].

    Inside the window [pole - h, pole + h] the simple pole r/(x - pole),
    r = f_num(pole)/f_den'(pole), is subtracted from the ratio, each
    remainder taken with the offset x - pole of its own rounded abscissa.
    The remainders at pole + t and pole - t are integrated together over
    t in (0, h], so a residue known only to rounding leaves no 1/t term.
    The subtracted pole adds r ln((b' - pole)/(pole - a')) over a window
    [a', b'], which is zero for the symmetric one. Outside the window
    the ratio is integrated directly.
    """
    if not a < pole < b:
        raise PoleNotBracketed(f"Pole {pole} is not inside ({a}, {b})")
    if not 0.0 < window < 1.0:
        raise DomainError(f"PV window must lie in (0, 1), got {window}")

    h = window * min(pole - a, b - pole)
    lo, hi = pole - h, pole + h
    d_lo, d_hi = f_den(lo), f_den(hi)
    if d_lo * d_hi >= 0.0:
        raise PoleNotBracketed(f"Denominator keeps its sign across [{lo}, {hi}]")

    local_scale = (abs(d_lo) + abs(d_hi)) / (2.0 * h)
    if den_derivative is not None:
        slope, slope_error = den_derivative(pole), 0.0
    else:
        slope, slope_error = _slope(f_den, pole, 1e-6 * max(1.0, abs(pole)))
    if not abs(slope) > max(DEGENERATE_SLOPE * local_scale, 10.0 * slope_error):
        raise DegeneratePole(
            f"Denominator slope {slope!r} vanishes at pole {pole} "
            f"(local scale {local_scale!r}, slope error {slope_error!r})"
        )

    signed_residue = f_num(pole) / slope

    def ratio(x):
        return f_num(x) / f_den(x)

    def remainder(x):
        offset = x - pole
        if offset == 0.0:
            return 0.0
        return ratio(x) - signed_residue / offset

    def mirrored(t):
        return remainder(pole + t) + remainder(pole - t)

    pieces = [integrate_finite(mirrored, 0.0, h, rel_tol, max_evaluations)]
    if lo > a:
        pieces.append(integrate_finite(ratio, a, lo, rel_tol, max_evaluations))
    if hi < b:
        pieces.append(integrate_finite(ratio, hi, b, rel_tol, max_evaluations))
    log_term = signed_residue * math.log((hi - pole) / (pole - lo))

    residue = f_num(pole) / abs(slope)
    logger.debug(
        "PV pole at %r: slope %r, residue coefficient %r", pole, slope, residue
    )
    return PVResult(
        principal_value=math.fsum([piece.value for piece in pieces] + [log_term]),
        residue_coefficient=residue,
        error_estimate=math.fsum(piece.error_estimate for piece in pieces),
        evaluations=sum(piece.evaluations for piece in pieces),
    )


def find_root(
    f: RealFunction,
    lo: float,
    hi: float,
    tol: float = 1e-14,
    max_iterations: int = 500,
) -> float:
    """Brent root of f inside the bracket [lo, hi]."""
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if not (math.isfinite(f_lo) and math.isfinite(f_hi)) or f_lo * f_hi > 0.0:
        raise NoSignChange(f"No sign change on [{lo}, {hi}]: f = {f_lo!r}, {f_hi!r}")
    root, status = optimize.brentq(
        f,
        lo,
        hi,
        xtol=tol,
        rtol=4.0 * _EPS,
        maxiter=max_iterations,
        full_output=True,
        disp=False,
    )
    if not status.converged:
        raise NonConvergence(f"Root search on [{lo}, {hi}] failed: {status.flag}")
    logger.debug(
        "root on [%s, %s] -> %r (%d iterations)", lo, hi, root, status.iterations
    )
    return float(root)


def minimize_scalar(
    f: RealFunction,
    lo: float,
    hi: float,
    tol: float = 1e-10,
    seed: Optional[float] = None,
    max_iterations: int = 500,
) -> float:
    """Argmin of a unimodal f on [lo, hi].

    With a ``seed`` whose value undercuts both ends, Brent's method starts
    from the bracket (lo, seed, hi); otherwise bounded Brent is used.
    """
    if not lo < hi:
        raise DomainError(f"Empty or reversed interval [{lo}, {hi}]")
    if seed is not None and lo < seed < hi and f(seed) < min(f(lo), f(hi)):
        result = optimize.minimize_scalar(
            f,
            bracket=(lo, seed, hi),
            method="brent",
            tol=tol,
            options={"maxiter": max_iterations},
        )
    else:
        result = optimize.minimize_scalar(
            f,
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": tol, "maxiter": max_iterations},
        )
    if not getattr(result, "success", True) or not lo <= result.x <= hi:
        message = getattr(result, "message", "iteration cap reached")
        raise NonConvergence(f"Minimization on [{lo}, {hi}] failed: {message}")
    logger.debug("argmin on [%s, %s] -> %r", lo, hi, result.x)
    return float(result.x)
