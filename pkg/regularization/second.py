"""Second iteration: self-consistent cutoff, complex energy, rate and mass.

Mode sums are reduced to radial integrals,

    A = E + g^2/(4 pi^2) int_0^inf k^2 N1 N2 / D dk
    B = 1 + g^2/(4 pi^2) int_0^inf k^2 N1 v (s - 1/s) / D dk

with s = phi_k/phi_0, v the reduced field amplitude, eps = k^2/2 + k,
X = g^2 I_k (+ g^4 J_k) and

    D  = eps + X - E
    N1 = -(v s eps + 1/sqrt(k) + v s (X - E))
    N2 =   v s eps + 1/sqrt(k) + v s (X - E) + E v (s - 1/s).

D vanishes at the cutoff k0; below it the full kernels are used, above
``k_switch`` their large-k forms. The pole is taken under D -> D - i0.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .exceptions import DomainError, NoSignChange
from .kernels import (
    asymptotic_amplitude,
    kernel_I,
    kernel_I_asymptotic,
    kernel_I_derivative,
    kernel_J,
    kernel_J_derivative,
)
from .model import ModelParams, Momentum, pt_self_energy
from .quad import (
    DEFAULT_MAX_EVALUATIONS,
    DEFAULT_REL_TOL,
    find_root,
    integrate_finite,
    integrate_principal_value,
    integrate_semi_infinite,
)
from .specfun import ScaledReal, erf
from .zeroth import e0_weak, lambda_opt, mass0

logger = logging.getLogger(__name__)

CUTOFF_BRACKET = (1.0, 40.0)
SWITCH_MIN = 6.0
SWITCH_MARGIN = 2.0
# Integrands vanish to double precision beyond this k/lambda.
TAIL_END = 30.0
CUTOFF_RESIDUAL_TOL = 1e-10

MASS2_LIMIT_COEFFICIENT = 1.0 / (6.0 * math.pi ** 2)


@dataclass(frozen=True)
class CutoffResult:
    k0: float
    k0_asymptotic: float
    residual: float


@dataclass(frozen=True)
class ComplexEnergy:
    re: float
    im: float = 0.0

    @classmethod
    def from_complex(cls, value: complex) -> "ComplexEnergy":
        return cls(float(value.real), float(value.imag))

    def __complex__(self):
        return complex(self.re, self.im)


@dataclass(frozen=True)
class IterationResult:
    params: ModelParams
    e0: float
    mass0: float
    has_pole: bool
    k0: Optional[CutoffResult]
    a: ComplexEnergy
    b: ComplexEnergy
    e2: ComplexEnergy
    e2_analytic: Optional[float]
    e2_singular: Optional[float]
    transition_half_rate: Optional[float]
    mass2: Optional[float]

    @property
    def ratio(self) -> Optional[float]:
        if not self.e2_analytic:
            return None
        return self.e2.re / self.e2_analytic


def _check_coupling(g: float) -> None:
    if not 0.0 < g < 1.0:
        raise DomainError(f"The second iteration needs 0 < g < 1, got {g}")


def _signed_log1p(value: ScaledReal) -> float:
    """sign(v) log(1 + |v|), finite for any scaled value."""
    log_abs = value.log_abs()
    if log_abs > 30.0:
        magnitude = log_abs + math.log1p(math.exp(-log_abs))
    else:
        magnitude = math.log1p(math.exp(log_abs))
    return value.sign * magnitude


def k0_asymptotic(g: float, lam: float) -> float:
    """lambda sqrt(3 |ln g|), the small-g limit of the cutoff."""
    return lam * math.sqrt(3.0 * abs(math.log(g)))


def _denominator_scaled(k: float, g: float, lam: float, energy: float) -> ScaledReal:
    return kernel_I(k, lam) * (g * g) + (k * k / 2.0 + k - energy)


def cutoff_k0(g: float, lam: float) -> CutoffResult:
    """Root k0 of k^2/2 + k + g^2 I_k - E = 0.

    The equation is solved on sign(D) log(1 + |D|), which stays finite
    where g^2 I_k itself overflows.
    """
    _check_coupling(g)
    energy = e0_weak(g, lam)
    lo, hi = (lam * edge for edge in CUTOFF_BRACKET)

    def scaled(k):
        return _signed_log1p(_denominator_scaled(k, g, lam, energy))

    k0 = find_root(scaled, lo, hi, tol=1e-14 * hi)
    kernel = (kernel_I(k0, lam) * (g * g)).to_float()
    residual = (k0 * k0 / 2.0 + k0 + kernel - energy) / (
        k0 * k0 / 2.0 + k0 + abs(energy) + abs(kernel)
    )
    logger.debug("cutoff g=%r lambda=%r: k0=%r residual=%r", g, lam, k0, residual)
    return CutoffResult(k0=k0, k0_asymptotic=k0_asymptotic(g, lam), residual=residual)


def solve_cutoff_log_equation(g: float, lam: float) -> float:
    """Root of ln((k^2/2 + k) k/a) = -2|ln g| + (2/3) k^2/lambda^2.

    This is the cutoff equation with I_k replaced by its large-k form.
    """
    _check_coupling(g)
    a = asymptotic_amplitude(lam)

    def equation(k):
        return (
            math.log((k * k / 2.0 + k) * k / a)
            + 2.0 * abs(math.log(g))
            - 2.0 * k * k / (3.0 * lam * lam)
        )

    lo, hi = (lam * edge for edge in CUTOFF_BRACKET)
    return find_root(equation, lo, hi, tol=1e-14 * hi)


class _Integrands:
    """N1, N2 and D of the second iteration for one (g, lambda)."""

    def __init__(self, g: float, lam: float, include_j: bool):
        self.g = g
        self.lam = lam
        self.include_j = include_j
        self.g2 = g * g
        self.prefactor = self.g2 / (4.0 * math.pi ** 2)
        # D(0) = 0 requires the reference energy to carry J(0) as well.
        self.j0 = kernel_J(0.0, lam) if include_j else 0.0
        self.energy = e0_weak(g, lam) + g ** 4 * self.j0

    def shift(self, k: float, asymptotic: bool) -> float:
        """X = g^2 I_k (+ g^4 J_k in the full-kernel region)."""
        if asymptotic:
            return self.g2 * kernel_I_asymptotic(k, self.lam).to_float()
        value = self.g2 * kernel_I(k, self.lam).to_float()
        if self.include_j:
            value += self.g ** 4 * kernel_J(k, self.lam)
        return value

    def slope(self, k: float) -> float:
        value = k + 1.0 + self.g2 * kernel_I_derivative(k, self.lam).to_float()
        if self.include_j:
            value += self.g ** 4 * kernel_J_derivative(k, self.lam)
        return value

    def terms(
        self, k: float, asymptotic: bool = False
    ) -> Tuple[float, float, float, float]:
        """(N1, N2, D, v (s - 1/s)) at k > 0."""
        x2 = (k / self.lam) ** 2
        root_k = math.sqrt(k)
        vs = -math.exp(-0.75 * x2) / (k * root_k)
        # v s eps + 1/sqrt(k) without cancellation at small k
        head = -(math.expm1(-0.75 * x2) + 0.5 * k * math.exp(-0.75 * x2)) / root_k
        overlap = 2.0 * math.exp(-0.25 * x2) * math.sinh(0.5 * x2) / (k * root_k)
        excess = self.shift(k, asymptotic) - self.energy
        n1 = -(head + vs * excess)
        n2 = head + vs * excess + self.energy * overlap
        d = k * k / 2.0 + k + excess
        return n1, n2, d, overlap

    def denominator(self, k: float) -> float:
        return k * k / 2.0 + k + self.shift(k, False) - self.energy

    def numerator_a(self, k: float, asymptotic: bool = False) -> float:
        n1, n2, _, _ = self.terms(k, asymptotic)
        return self.prefactor * k * k * n1 * n2

    def numerator_b(self, k: float, asymptotic: bool = False) -> float:
        n1, _, _, overlap = self.terms(k, asymptotic)
        return self.prefactor * k * k * n1 * overlap

    def tail_a(self, k: float) -> float:
        if k <= 0.0 or k > TAIL_END * self.lam:
            return 0.0
        n1, n2, d, _ = self.terms(k, asymptotic=True)
        return self.prefactor * k * k * n1 * n2 / d

    def tail_b(self, k: float) -> float:
        if k <= 0.0 or k > TAIL_END * self.lam:
            return 0.0
        n1, _, d, overlap = self.terms(k, asymptotic=True)
        return self.prefactor * k * k * n1 * overlap / d

    def full_a(self, k: float) -> float:
        if k <= 0.0:
            return 0.0
        n1, n2, d, _ = self.terms(k)
        return self.prefactor * k * k * n1 * n2 / d

    def full_b(self, k: float) -> float:
        if k <= 0.0:
            return 0.0
        n1, _, d, overlap = self.terms(k)
        return self.prefactor * k * k * n1 * overlap / d


def pole_contribution(residue_coefficient: float) -> complex:
    """Imaginary part picked up at a simple zero of D under D -> D - i0.

    1/(D - i0) = PV 1/D + i pi delta(D), so the pole adds
    +i pi num(k0)/|D'(k0)|; num(k0) < 0 makes the energy decay.
    """
    return complex(0.0, math.pi * residue_coefficient)


def switch_point(k0: Optional[float], lam: float) -> float:
    """Start of the large-k region: max(6 lambda, k0 + 2 lambda)."""
    switch = SWITCH_MIN * lam
    if k0 is not None:
        switch = max(switch, k0 + SWITCH_MARGIN * lam)
    return switch


def _pole_of(integrands: _Integrands, cutoff: CutoffResult) -> float:
    """Zero of the denominator actually integrated (J shifts it slightly)."""
    if not integrands.include_j:
        return cutoff.k0
    half = 0.5 * integrands.lam
    return find_root(
        integrands.denominator,
        cutoff.k0 - half,
        cutoff.k0 + half,
        tol=1e-14 * cutoff.k0,
    )


def e2_exact(
    g: float,
    lam: float,
    cutoff: Optional[CutoffResult] = None,
    include_j: bool = True,
    split: Optional[float] = None,
    rel_tol: float = DEFAULT_REL_TOL,
    max_evaluations: int = DEFAULT_MAX_EVALUATIONS,
) -> Tuple[ComplexEnergy, ComplexEnergy, ComplexEnergy]:
    """(A, B, E2 = A/B) by principal value plus pole contribution.

    When D has no zero (``cutoff`` is None and none can be found) both
    integrals are regular and the energy is real.
    """
    _check_coupling(g)
    integrands = _Integrands(g, lam, include_j)
    if cutoff is None:
        try:
            cutoff = cutoff_k0(g, lam)
        except NoSignChange:
            logger.info("No denominator root for g=%r, integrating without a pole", g)

    k0 = _pole_of(integrands, cutoff) if cutoff is not None else None
    k_switch = switch_point(k0, lam) if split is None else split
    if k0 is not None and not k0 < k_switch:
        raise DomainError(f"Split point {k_switch} must lie above the pole {k0}")

    if k0 is not None:
        a_pv = integrate_principal_value(
            integrands.numerator_a,
            integrands.denominator,
            k0,
            0.0,
            k_switch,
            rel_tol,
            max_evaluations,
            den_derivative=integrands.slope,
        )
        b_pv = integrate_principal_value(
            integrands.numerator_b,
            integrands.denominator,
            k0,
            0.0,
            k_switch,
            rel_tol,
            max_evaluations,
            den_derivative=integrands.slope,
        )
        a_head = a_pv.principal_value + pole_contribution(a_pv.residue_coefficient)
        b_head = b_pv.principal_value + pole_contribution(b_pv.residue_coefficient)
    else:
        a_head = integrate_finite(
            integrands.full_a, 0.0, k_switch, rel_tol, max_evaluations
        ).value
        b_head = integrate_finite(
            integrands.full_b, 0.0, k_switch, rel_tol, max_evaluations
        ).value

    a_tail = integrate_semi_infinite(
        integrands.tail_a, k_switch, rel_tol, max_evaluations
    )
    b_tail = integrate_semi_infinite(
        integrands.tail_b, k_switch, rel_tol, max_evaluations
    )

    a = complex(integrands.energy) + a_head + a_tail.value
    b = complex(1.0) + b_head + b_tail.value
    e2 = a / b
    logger.debug("g=%r: A=%r B=%r E2=%r (split %r)", g, a, b, e2, k_switch)
    return (
        ComplexEnergy.from_complex(a),
        ComplexEnergy.from_complex(b),
        ComplexEnergy.from_complex(e2),
    )


def analytic_f(x: float, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """f(x) = 1/(4 pi^2) int_0^x t e^{-3t^2/4}/(1 + t/2) dt."""
    if x <= 0.0:
        return 0.0
    integral = integrate_finite(
        lambda t: t * math.exp(-0.75 * t * t) / (1.0 + t / 2.0), 0.0, x, rel_tol
    ).value
    return integral / (4.0 * math.pi ** 2)


def analytic_bracket(g: float, lam: float, k0: float) -> float:
    """Square bracket of the closed-form A; tends to e0_weak as k0 grows."""
    x = k0 / lam
    first = (
        g * g * lam / (24.0 * math.pi ** 2)
        * (
            math.sqrt(6.0 * math.pi) * erf(math.sqrt(1.5) * x)
            + lam
            - lam * math.exp(-1.5 * x * x)
        )
    )
    second = (
        g * g * lam / (2.0 * math.sqrt(3.0) * math.pi ** 1.5)
        * erf(math.sqrt(3.0) * x / 2.0)
    )
    return first - second


def analytic_a(g: float, lam: float, k0: float) -> float:
    energy = e0_weak(g, lam)
    x = k0 / lam
    return (
        energy
        - analytic_bracket(g, lam, k0)
        - g * g / (2.0 * math.pi ** 2) * math.log1p(k0 / 2.0)
        + energy * 12.0 * math.sqrt(6.0 * math.pi) / (5.0 * lam * math.pi)
        * math.exp(-5.0 * x * x / 12.0)
    )


def analytic_b(
    g: float, lam: float, k0: float, rel_tol: float = DEFAULT_REL_TOL
) -> float:
    x = k0 / lam
    return (
        1.0
        + g * g / (12.0 * math.pi ** 2) * (-math.expm1(-1.5 * x * x))
        - g * g * analytic_f(x, rel_tol)
        - 144.0 * math.sqrt(6.0 * math.pi) / (25.0 * lam * math.pi)
        * (1.0 + 5.0 * x * x / 12.0)
        * math.exp(-5.0 * x * x / 12.0)
    )


def e2_analytic(
    g: float, lam: float, k0: float, rel_tol: float = DEFAULT_REL_TOL
) -> float:
    """Closed-form approximation A/B of the second-iteration energy."""
    if not k0 > 0.0:
        raise DomainError(f"e2_analytic needs k0 > 0, got {k0}")
    return analytic_a(g, lam, k0) / analytic_b(g, lam, k0, rel_tol)


def e2_singular(g: float, lam: float, k0: Optional[float] = None) -> float:
    """-g^2/(2 pi^2) ln(k0/2 + 1): perturbation theory cut at the exact k0."""
    if k0 is None:
        k0 = cutoff_k0(g, lam).k0
    return pt_self_energy(0.0, k0, g)


def transition_half_rate(g: float, lam: float, k0: Optional[float] = None) -> float:
    """Half the one-phonon emission rate on the shell D(k0) = 0.

    (g^2/4 pi) k0^2 N2(k0)^2/|k0 + 1 + g^2 I'(k0)|, without the J term.
    """
    _check_coupling(g)
    if k0 is None:
        k0 = cutoff_k0(g, lam).k0
    integrands = _Integrands(g, lam, include_j=False)
    _, n2, _, _ = integrands.terms(k0)
    return g * g / (4.0 * math.pi) * k0 * k0 * n2 * n2 / abs(integrands.slope(k0))


def mass2_coefficient(k0: float, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """c(k0) = 1/(6 pi^2) int_0^k0 dk/(1 + k/2)^3, tending to 1/(6 pi^2)."""
    if not k0 > 0.0:
        raise DomainError(f"mass2_coefficient needs k0 > 0, got {k0}")
    integral = integrate_finite(lambda k: (1.0 + k / 2.0) ** -3, 0.0, k0, rel_tol).value
    return MASS2_LIMIT_COEFFICIENT * integral


def mass2(
    g: float,
    lam: float,
    k0: Optional[float] = None,
    rel_tol: float = DEFAULT_REL_TOL,
) -> float:
    """Second-iteration mass 1/(1 - g^2 c(k0))."""
    if g == 0.0:
        return 1.0
    if k0 is None:
        k0 = cutoff_k0(g, lam).k0
    return 1.0 / (1.0 - g * g * mass2_coefficient(k0, rel_tol))


def mass2_first_order(
    g: float,
    lam: float,
    k0: Optional[float] = None,
    rel_tol: float = DEFAULT_REL_TOL,
) -> float:
    if g == 0.0:
        return 1.0
    if k0 is None:
        k0 = cutoff_k0(g, lam).k0
    return 1.0 + g * g * mass2_coefficient(k0, rel_tol)


def e2_moving_shift(
    p: float,
    g: float,
    lam: float,
    k0: Optional[float] = None,
    rel_tol: float = DEFAULT_REL_TOL,
) -> float:
    """E2(P) - E2(0) = P^2/2 - g^2/(8 pi^2) int_0^k0 dk int dc P^2 c^2/(1 + k/2)^3."""
    p = Momentum(p).p
    if k0 is None:
        k0 = cutoff_k0(g, lam).k0

    def radial(k):
        angular = integrate_finite(lambda c: p * p * c * c, -1.0, 1.0, rel_tol).value
        return angular / (1.0 + k / 2.0) ** 3

    if p == 0.0:
        return 0.0
    integral = integrate_finite(radial, 0.0, k0, rel_tol).value
    return p * p / 2.0 - g * g / (8.0 * math.pi ** 2) * integral


def iterate(
    g: float,
    lam: Optional[float] = None,
    include_j: bool = True,
    split: Optional[float] = None,
    rel_tol: float = DEFAULT_REL_TOL,
    max_evaluations: int = DEFAULT_MAX_EVALUATIONS,
) -> IterationResult:
    """All second-iteration quantities for one coupling value."""
    _check_coupling(g)
    lam = lambda_opt(g) if lam is None else lam
    params = ModelParams(g=g, lam=lam)

    try:
        cutoff = cutoff_k0(g, lam)
    except NoSignChange:
        cutoff = None
    a, b, e2 = e2_exact(
        g, lam, cutoff, include_j, split, rel_tol, max_evaluations
    )

    if cutoff is None:
        return IterationResult(
            params=params,
            e0=e0_weak(g, lam),
            mass0=mass0(g),
            has_pole=False,
            k0=None,
            a=a,
            b=b,
            e2=e2,
            e2_analytic=None,
            e2_singular=None,
            transition_half_rate=None,
            mass2=None,
        )

    return IterationResult(
        params=params,
        e0=e0_weak(g, lam),
        mass0=mass0(g),
        has_pole=True,
        k0=cutoff,
        a=a,
        b=b,
        e2=e2,
        e2_analytic=e2_analytic(g, lam, cutoff.k0, rel_tol),
        e2_singular=e2_singular(g, lam, cutoff.k0),
        transition_half_rate=transition_half_rate(g, lam, cutoff.k0),
        mass2=mass2(g, lam, cutoff.k0, rel_tol),
    )
