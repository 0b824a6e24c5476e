"""Model parameters, the Gaussian trial state and the perturbative baseline.

Units are m = hbar = c = 1 with phonon dispersion w_k = k. The
normalization volume is eliminated analytically: every sum over modes is
Omega * int d^3k/(2 pi)^3 and every field amplitude carries 1/sqrt(Omega),
so nothing here depends on it.
"""
import math
from dataclasses import dataclass

from .exceptions import DomainError
from .quad import (
    DEFAULT_MAX_EVALUATIONS,
    DEFAULT_REL_TOL,
    integrate_finite,
    integrate_semi_infinite,
)

# Below this argument sinc(z) - 1 is summed as a series.
_SINC_SERIES_LIMIT = 1e-3


@dataclass(frozen=True)
class ModelParams:
    """Coupling constant g and localization width lambda."""

    g: float
    lam: float

    def __post_init__(self):
        if not self.g >= 0.0:
            raise DomainError(f"Coupling constant must be non-negative, got {self.g}")
        if not self.lam > 0.0:
            raise DomainError(f"Localization width must be positive, got {self.lam}")


@dataclass(frozen=True)
class Momentum:
    p: float

    def __post_init__(self):
        if not self.p >= 0.0:
            raise DomainError(f"Momentum magnitude must be non-negative, got {self.p}")


def u_reduced(k: float, lam: float) -> float:
    """Reduced field amplitude v_k = u_k sqrt(2 Omega)/g = -e^{-k^2/4l^2}/k^{3/2}."""
    if not k > 0.0:
        raise DomainError(f"u_reduced needs k > 0, got {k}")
    return -math.exp(-k * k / (4.0 * lam * lam)) / k ** 1.5


def phi_ratio(q: float, lam: float) -> float:
    """phi_q / phi_0 of the Gaussian trial state."""
    if not q >= 0.0:
        raise DomainError(f"phi_ratio needs q >= 0, got {q}")
    return math.exp(-q * q / (2.0 * lam * lam))


def density_form_factor(
    k: float, lam: float, rel_tol: float = DEFAULT_REL_TOL
) -> float:
    """Fourier transform of the trial probability density by radial quadrature.

    The normalized density is (lam^2/pi)^{3/2} e^{-lam^2 r^2}, whose transform
    is e^{-k^2/(4 lam^2)}: the factor every u_k carries.
    """
    norm = (lam * lam / math.pi) ** 1.5

    def integrand(r):
        weight = 4.0 * math.pi * r * r * norm * math.exp(-lam * lam * r * r)
        return weight * _sinc(k * r)

    return integrate_semi_infinite(integrand, 0.0, rel_tol).value


def _sinc(z: float) -> float:
    if abs(z) < _SINC_SERIES_LIMIT:
        z2 = z * z
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0
    return math.sin(z) / z


def _sinc_minus_one(z: float) -> float:
    if abs(z) < _SINC_SERIES_LIMIT:
        z2 = z * z
        return -z2 / 6.0 + z2 * z2 / 120.0 - z2 * z2 * z2 / 5040.0
    return math.sin(z) / z - 1.0


def phi_big(
    r: float,
    params: ModelParams,
    rel_tol: float = DEFAULT_REL_TOL,
    max_evaluations: int = DEFAULT_MAX_EVALUATIONS,
) -> float:
    """Phi(R) = g^2/(4 pi^2) int_0^inf e^{-t^2/2}/t (sinc(lam R t) - 1) dt."""
    if not r >= 0.0:
        raise DomainError(f"phi_big needs R >= 0, got {r}")
    if r == 0.0 or params.g == 0.0:
        return 0.0
    scale = params.lam * r

    def integrand(t):
        return math.exp(-0.5 * t * t) * _sinc_minus_one(scale * t) / t

    integral = integrate_semi_infinite(integrand, 0.0, rel_tol, max_evaluations).value
    return params.g ** 2 / (4.0 * math.pi ** 2) * integral


def pt_self_energy(
    p: float,
    cutoff: float,
    g: float,
    rel_tol: float = DEFAULT_REL_TOL,
    max_evaluations: int = DEFAULT_MAX_EVALUATIONS,
) -> float:
    """Second-order self-energy with the momentum integral cut at |k| <= K.

    The angular integral is done in closed form; at P = 0 the radial one is
    too and Sigma = -g^2/(2 pi^2) ln(K/2 + 1).
    """
    if not cutoff >= 0.0:
        raise DomainError(f"Cutoff must be non-negative, got {cutoff}")
    p = Momentum(p).p
    if not p < 1.0:
        raise DomainError(
            f"Total momentum {p} is at or above the one-phonon emission threshold 1"
        )
    if cutoff == 0.0 or g == 0.0:
        return 0.0
    if p == 0.0:
        return -g * g / (2.0 * math.pi ** 2) * math.log1p(cutoff / 2.0)

    def integrand(k):
        return 2.0 * math.atanh(p / (k / 2.0 + 1.0))

    integral = integrate_finite(integrand, 0.0, cutoff, rel_tol, max_evaluations).value
    return -g * g / (8.0 * math.pi ** 2 * p) * integral


def pt_mass(g: float) -> float:
    """Perturbative effective mass 1 + g^2/(6 pi^2)."""
    if not g >= 0.0:
        raise DomainError(f"Coupling constant must be non-negative, got {g}")
    return 1.0 + g * g / (6.0 * math.pi ** 2)


def pt_mass_coefficient_quadrature(rel_tol: float = DEFAULT_REL_TOL) -> float:
    """(m* - 1)/g^2 from the P^2 part of the second-order energy.

    Integrates (1/8 pi^3) int d^3k (P.k)^2/(P^2 k^4 (1 + k/2)^3) over the
    polar angle and the radius instead of using (P.k)^2 -> P^2 k^2/3.
    """

    def radial(k):
        angular = integrate_finite(lambda c: c * c, -1.0, 1.0, rel_tol).value
        return angular / (1.0 + k / 2.0) ** 3

    integral = integrate_semi_infinite(radial, 0.0, rel_tol).value
    return 2.0 * math.pi / (8.0 * math.pi ** 3) * integral
