"""Zeroth-order (variational) energy, optimal width and effective mass."""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .exceptions import DomainError, NoSignChange
from .model import Momentum
from .quad import (
    DEFAULT_MAX_EVALUATIONS,
    DEFAULT_REL_TOL,
    find_root,
    integrate_finite,
    integrate_semi_infinite,
    minimize_scalar,
)

logger = logging.getLogger(__name__)

SQRT_2 = math.sqrt(2.0)
SQRT_3PI = math.sqrt(3.0 * math.pi)
SQRT_6PI = math.sqrt(6.0 * math.pi)

# Width minimizing e0_weak: sqrt(3 pi)(4 - sqrt 2)/2.
LAMBDA_WEAK = SQRT_3PI * (4.0 - SQRT_2) / 2.0

# e0_full is quadratic in lambda with a positive leading coefficient
# as long as 3 alpha g^2 < 32 pi^2, i.e. g < 11.9.
MAX_COUPLING = 10.0
LAMBDA_BRACKET = (0.5, 20.0)
_POLISH_WINDOW = 0.01

MASS0_COEFFICIENT = (17.0 - SQRT_2) / (189.0 * math.pi ** 2)
MASS_FIT_MOMENTA = (0.0, 0.02, 0.04, 0.06)

ALPHA_REFERENCE = 0.736559
ALPHA_REL_TOL = 1e-12
_ALPHA_SERIES_LIMIT = 1.0


@dataclass(frozen=True)
class ZerothResult:
    lambda_opt: float
    e0_weak: float
    e0_full: float
    mass0: float


def _check_coupling(g: float) -> None:
    if not g >= 0.0:
        raise DomainError(f"Coupling constant must be non-negative, got {g}")


def e0_weak(g: float, lam: float) -> float:
    """g^2/(24 pi^2) (lam (sqrt 2 - 4) sqrt(3 pi) + lam^2)."""
    bracket = lam * (SQRT_2 - 4.0) * SQRT_3PI + lam * lam
    # + 0.0 so that g = 0 gives +0.0 rather than -0.0
    return g * g / (24.0 * math.pi ** 2) * bracket + 0.0


def alpha_integrand(u: float) -> float:
    """Integrand of alpha; the leading 4u terms are cancelled exactly.

    Below u = 1 it is summed as
    4 e^{-3u^2/2} sum_{n>=1} (4/3)^n u^{2n-1}/(2n+1)!!.
    """
    if u == 0.0:
        return 0.0
    if u < _ALPHA_SERIES_LIMIT:
        u2 = u * u
        term = (4.0 / 3.0) * u / 3.0
        total = term
        n = 1
        while abs(term) > 1e-17 * abs(total):
            n += 1
            term *= (4.0 / 3.0) * u2 / (2 * n + 1)
            total += term
        return 4.0 * math.exp(-1.5 * u2) * total
    z = math.sqrt(2.0 / 3.0) * u
    return (
        SQRT_6PI * math.erf(z) * math.exp(-5.0 * u * u / 6.0)
        - 4.0 * u * math.exp(-1.5 * u * u)
    ) / (u * u)


@lru_cache(maxsize=None)
def alpha_constant(rel_tol: float = ALPHA_REL_TOL) -> float:
    """alpha of the g^4 zeroth-order term, approximately 0.736559."""
    head = integrate_finite(alpha_integrand, 0.0, _ALPHA_SERIES_LIMIT, rel_tol)
    tail = integrate_semi_infinite(alpha_integrand, _ALPHA_SERIES_LIMIT, rel_tol)
    alpha = head.value + tail.value
    logger.debug("alpha = %r", alpha)
    return alpha


def g4_coefficient(lam: float) -> float:
    """lam^2 alpha/(2^8 pi^4): minus the g^4 term of e0_full divided by g^4."""
    return lam * lam * alpha_constant() / (256.0 * math.pi ** 4)


def e0_full(g: float, lam: float) -> float:
    return e0_weak(g, lam) - g ** 4 * g4_coefficient(lam)


def e0_full_dlambda(g: float, lam: float) -> float:
    """Analytic d e0_full / d lambda."""
    weak = g * g / (24.0 * math.pi ** 2) * ((SQRT_2 - 4.0) * SQRT_3PI + 2.0 * lam)
    return weak - 2.0 * g ** 4 * lam * alpha_constant() / (256.0 * math.pi ** 4)


def lambda_opt_closed_form(g: float) -> float:
    """Stationary point of e0_full, LAMBDA_WEAK/(1 - 3 alpha g^2/(32 pi^2))."""
    _check_coupling(g)
    return LAMBDA_WEAK / (1.0 - 3.0 * alpha_constant() * g * g / (32.0 * math.pi ** 2))


def lambda_opt(g: float, tol: float = 1e-12) -> float:
    """Width minimizing e0_full(g, lambda).

    Golden-section/Brent search on LAMBDA_BRACKET seeded with the closed
    form, then polished by a bracketed root of the analytic derivative.
    """
    _check_coupling(g)
    if g > MAX_COUPLING:
        raise DomainError(
            f"lambda_opt is only unimodal for g <= {MAX_COUPLING}, got {g}"
        )
    if g == 0.0:
        return LAMBDA_WEAK

    lo, hi = LAMBDA_BRACKET
    seed = lambda_opt_closed_form(g)
    lam = minimize_scalar(lambda x: e0_full(g, x) / (g * g), lo, hi, tol, seed=seed)
    try:
        lam = find_root(
            lambda x: e0_full_dlambda(g, x) / (g * g),
            max(lo, lam - _POLISH_WINDOW),
            min(hi, lam + _POLISH_WINDOW),
        )
    except NoSignChange:
        logger.debug("lambda_opt(%r): derivative has no sign change near %r", g, lam)
    return lam


def e0_weak_moving(
    p: float,
    g: float,
    lam: float,
    rel_tol: float = DEFAULT_REL_TOL,
    max_evaluations: int = DEFAULT_MAX_EVALUATIONS,
) -> float:
    """Weak-coupling energy at total momentum P, without the free P^2/2.

    Momentum, field and interaction sums are integrated over k and the
    polar cosine c of k relative to P:

        g^2/(8 pi^2) int_0^inf dk int_{-1}^{1} dc [
            -P c q(k, c) + (1 + k/2) q(k, c)
            - e^{-k^2/4l^2} (e^{-(k^2 - 2Pkc)/2l^2} + e^{-(k^2 + 2Pkc)/2l^2}) ]

    with q(k, c) = e^{-k^2/2l^2} e^{-(k^2 - 2Pkc)/l^2}.
    """
    p = Momentum(p).p
    _check_coupling(g)
    if g == 0.0:
        return 0.0
    l2 = lam * lam

    def angular(k, c):
        shift = 2.0 * p * k * c
        q = math.exp(-k * k / (2.0 * l2) - (k * k - shift) / l2)
        interaction = math.exp(-k * k / (4.0 * l2)) * (
            math.exp(-(k * k - shift) / (2.0 * l2))
            + math.exp(-(k * k + shift) / (2.0 * l2))
        )
        return (1.0 + k / 2.0 - p * c) * q - interaction

    def radial(k):
        return integrate_finite(
            lambda c: angular(k, c), -1.0, 1.0, rel_tol, max_evaluations
        ).value

    integral = integrate_semi_infinite(radial, 0.0, rel_tol, max_evaluations).value
    return g * g / (8.0 * math.pi ** 2) * integral


def mass0(g: float) -> float:
    """1 + g^2 (17 - sqrt 2)/(189 pi^2)."""
    _check_coupling(g)
    return 1.0 + g * g * MASS0_COEFFICIENT


def fit_moving_energy(
    g: float,
    lam: float,
    momenta: Sequence[float] = MASS_FIT_MOMENTA,
    rel_tol: float = DEFAULT_REL_TOL,
) -> np.ndarray:
    """Quadratic fit coefficients (P^2, P, 1) of P^2/2 + e0_weak_moving(P)."""
    momenta = np.asarray(momenta, dtype=float)
    energies = [p * p / 2.0 + e0_weak_moving(p, g, lam, rel_tol) for p in momenta]
    return np.polyfit(momenta, energies, 2)


def mass0_from_fit(
    g: float,
    lam: Optional[float] = None,
    momenta: Sequence[float] = MASS_FIT_MOMENTA,
    rel_tol: float = DEFAULT_REL_TOL,
) -> float:
    """Effective mass 1/(2 c2) from the quadratic fit of the moving energy."""
    lam = LAMBDA_WEAK if lam is None else lam
    curvature = fit_moving_energy(g, lam, momenta, rel_tol)[0]
    return 1.0 / (2.0 * curvature)


def zeroth_result(g: float, lam: Optional[float] = None) -> ZerothResult:
    lam = lambda_opt(g) if lam is None else lam
    if not lam > 0.0:
        raise DomainError(f"Localization width must be positive, got {lam}")
    return ZerothResult(
        lambda_opt=lam,
        e0_weak=e0_weak(g, lam),
        e0_full=e0_full(g, lam),
        mass0=mass0(g),
    )
