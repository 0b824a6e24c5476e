"""Kernels of the second iteration: k I1, I2, I3, I = their sum, and J.

With x = k/lambda, z = sqrt(2/3) x and y = x/sqrt(3):

    k I1 = (lam^2/32 pi^2) T1,   T1 = 4 - sqrt(6 pi) e^{z^2} Erf(z)/x
    I2   = (lam^2/96 pi^2) [F2 + (6 pi/lam) G2],
           F2 = sqrt(6 pi) e^{z^2} Erf(z)/x,   G2 = Erfi(z)/x
    I3   = -(lam/4 pi) G3,   G3 = Erfi(y)/x

I grows like e^{2x^2/3}/k, so every kernel is returned as a
``KernelValue``. Below x = 1 the closed forms lose digits to cancellation
and the all-positive power series of T1, F2, G2, G3 are summed instead.

The defining mode sums depend on the momentum only through its magnitude,
so the kernel at a vector argument q is the kernel at |q|.
"""
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .exceptions import DomainError
from .specfun import (
    TWO_OVER_SQRT_PI,
    ScaledReal,
    dawson,
    erf_scaled_product,
    erfi_scaled,
)

logger = logging.getLogger(__name__)

KernelValue = ScaledReal

SQRT_6PI = math.sqrt(6.0 * math.pi)
SQRT_2_3 = math.sqrt(2.0 / 3.0)
SQRT_3 = math.sqrt(3.0)

SERIES_SWITCH = 1.0
_SERIES_TERMS = 60

J_PREFACTOR = math.sqrt(5.0) / (4.0 * (2.0 * math.pi) ** 3 * 3 ** 5)

MIN_ORACLE_SAMPLES = 100_000
_ORACLE_BATCH = 100_000


@dataclass(frozen=True)
class MonteCarloEstimate:
    value: float
    standard_error: float
    samples: int


def _series(x: float, ratio, first: float) -> Tuple[float, float, float]:
    """Sum, x-derivative and n >= 1 tail of sum_n t_n x^{2n}.

    The terms are generated from t_0 = first and t_n/t_{n-1} = ratio(n).
    """
    x2 = x * x
    term = first
    tail = 0.0
    derivative = 0.0
    power = 1.0
    for n in range(1, _SERIES_TERMS):
        term *= ratio(n)
        power *= x2
        value = term * power
        tail += value
        derivative += 2 * n * value
        if abs(value) <= 1e-17 * abs(first + tail):
            break
    return first + tail, (derivative / x if x > 0.0 else 0.0), tail


def _f2_series(x):
    # 4 sum_{n>=0} (4/3)^n x^{2n}/(2n+1)!!
    return _series(x, lambda n: (4.0 / 3.0) / (2 * n + 1), 4.0)


def _erfi_over_x_series(x, c2):
    # Erfi(s x)/x for s^2 = c2: (2/sqrt(pi)) s sum c2^n x^{2n}/(n! (2n+1))
    def ratio(n):
        return c2 * (2 * n - 1) / (n * (2 * n + 1))

    return _series(x, ratio, TWO_OVER_SQRT_PI * math.sqrt(c2))


def _check_k(k: float, name: str, allow_zero: bool = False) -> None:
    if not (k >= 0.0 if allow_zero else k > 0.0):
        bound = ">= 0" if allow_zero else "> 0"
        raise DomainError(f"{name} needs k {bound}, got {k}")


def _series_parts(x: float):
    f2, _, f2_tail = _f2_series(x)
    g2 = _erfi_over_x_series(x, 2.0 / 3.0)[0]
    g3 = _erfi_over_x_series(x, 1.0 / 3.0)[0]
    t1 = -f2_tail
    return tuple(ScaledReal.from_float(v) for v in (t1, f2, g2, g3))


def _closed_form_parts(x: float):
    f2 = erf_scaled_product(1.0, SQRT_2_3 * x) * (SQRT_6PI / x)
    t1 = ScaledReal.from_float(4.0) - f2
    g2 = erfi_scaled(SQRT_2_3 * x) / x
    g3 = erfi_scaled(x / SQRT_3) / x
    return t1, f2, g2, g3


def _parts(k: float, lam: float):
    """(T1, F2, G2, G3) as scaled values."""
    x = k / lam
    if x < SERIES_SWITCH:
        return _series_parts(x)
    return _closed_form_parts(x)


def kernel_components(
    k: float, lam: float
) -> Tuple[KernelValue, KernelValue, KernelValue]:
    """(k I1, I2, I3) including their k -> 0 limits."""
    _check_k(k, "kernel_components", allow_zero=True)
    return _components_from_parts(_parts(k, lam), lam)


def _components_from_parts(parts, lam: float):
    t1, f2, g2, g3 = parts
    pi2 = math.pi ** 2
    ki1 = t1 * (lam * lam / (32.0 * pi2))
    i2 = (f2 + g2 * (6.0 * math.pi / lam)) * (lam * lam / (96.0 * pi2))
    i3 = g3 * (-lam / (4.0 * math.pi))
    return ki1, i2, i3


def kernel_I1_dot_k(k: float, lam: float) -> KernelValue:
    _check_k(k, "kernel_I1_dot_k")
    return kernel_components(k, lam)[0]


def kernel_I2(k: float, lam: float) -> KernelValue:
    _check_k(k, "kernel_I2")
    return kernel_components(k, lam)[1]


def kernel_I3(k: float, lam: float) -> KernelValue:
    _check_k(k, "kernel_I3")
    return kernel_components(k, lam)[2]


def kernel_I(k: float, lam: float) -> KernelValue:
    """I_k = k I1 + I2 + I3; g^2 I(0) is the weak-coupling energy."""
    ki1, i2, i3 = kernel_components(k, lam)
    return ki1 + i2 + i3


def _derivative_parts(k: float, lam: float):
    """x-derivatives (T1', G2', G3') as scaled values; F2' = -T1'."""
    x = k / lam
    if x < SERIES_SWITCH:
        df2 = _f2_series(x)[1]
        dg2 = _erfi_over_x_series(x, 2.0 / 3.0)[1]
        dg3 = _erfi_over_x_series(x, 1.0 / 3.0)[1]
        return tuple(ScaledReal.from_float(v) for v in (-df2, dg2, dg3))
    z = SQRT_2_3 * x
    y = x / SQRT_3
    e1 = erf_scaled_product(1.0, z)
    dt1 = e1 * (-SQRT_6PI * (4.0 / 3.0 - 1.0 / (x * x))) - 4.0 / x
    # (z - D(z))/x^2 >= 0, so the bracket never changes sign.
    dg2 = ScaledReal.from_log(1.0, z * z) * (
        TWO_OVER_SQRT_PI * (z - dawson(z)) / (x * x)
    )
    dg3 = ScaledReal.from_log(1.0, y * y) * (
        TWO_OVER_SQRT_PI * (y - dawson(y)) / (x * x)
    )
    return dt1, dg2, dg3


def kernel_I_derivative(k: float, lam: float) -> KernelValue:
    """Analytic dI/dk assembled from the closed forms."""
    _check_k(k, "kernel_I_derivative")
    dt1, dg2, dg3 = _derivative_parts(k, lam)
    pi2 = math.pi ** 2
    dki1 = dt1 * (lam / (32.0 * pi2))
    di2 = (-dt1 + dg2 * (6.0 * math.pi / lam)) * (lam / (96.0 * pi2))
    di3 = dg3 * (-1.0 / (4.0 * math.pi))
    return dki1 + di2 + di3


def _growth(
    k: float, lam: float, rate: float, prefactor: float, power: float
) -> KernelValue:
    """prefactor e^{rate k^2/lam^2}/k^power."""
    _check_k(k, "asymptotic kernel")
    x = k / lam
    return ScaledReal.from_log(
        math.copysign(1.0, prefactor),
        rate * x * x + math.log(abs(prefactor)) - power * math.log(k),
    )


def asymptotic_I1_dot_k(k: float, lam: float) -> KernelValue:
    prefactor = -(lam ** 3) * SQRT_6PI / (32.0 * math.pi ** 2)
    return _growth(k, lam, 2.0 / 3.0, prefactor, 1.0)


def asymptotic_I2(k: float, lam: float) -> KernelValue:
    return _growth(k, lam, 2.0 / 3.0, lam ** 3 * SQRT_6PI / (96.0 * math.pi ** 2), 1.0)


def asymptotic_I3(k: float, lam: float) -> KernelValue:
    return _growth(k, lam, 1.0 / 3.0, -SQRT_3 * lam ** 3 / (4.0 * math.pi ** 1.5), 2.0)


def asymptotic_amplitude(lam: float) -> float:
    """a = lam^3 sqrt(6 pi)/(48 pi^2) of I ~ -a e^{2k^2/3lam^2}/k."""
    return lam ** 3 * SQRT_6PI / (48.0 * math.pi ** 2)


def kernel_I_asymptotic(k: float, lam: float) -> KernelValue:
    return _growth(k, lam, 2.0 / 3.0, -asymptotic_amplitude(lam), 1.0)


def kernel_J(k: float, lam: float) -> float:
    """Approximate closed form of J_k; overflows to inf far above k = 25 lam."""
    _check_k(k, "kernel_J", allow_zero=True)
    x2 = (k / lam) ** 2
    numerator = 2.0 * x2 / 15.0 - 1.0
    q = 1.0 + 4.0 * x2 / 45.0
    try:
        growth = math.exp(0.8 * x2)
    except OverflowError:
        return math.copysign(math.inf, numerator)
    return J_PREFACTOR * lam * lam * growth * numerator / q ** 3


def kernel_J_derivative(k: float, lam: float) -> float:
    _check_k(k, "kernel_J_derivative", allow_zero=True)
    x = k / lam
    x2 = x * x
    numerator = 2.0 * x2 / 15.0 - 1.0
    q = 1.0 + 4.0 * x2 / 45.0
    bracket = (
        (1.6 * x * numerator + 4.0 * x / 15.0) / q ** 3
        - 3.0 * numerator * (8.0 * x / 45.0) / q ** 4
    )
    return J_PREFACTOR * lam * math.exp(0.8 * x2) * bracket


def _unit_vectors(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def kernel_J_oracle(
    k: float, lam: float, samples: int = MIN_ORACLE_SAMPLES, seed: int = 0xC0FFEE
) -> MonteCarloEstimate:
    """Monte-Carlo value of J_k from its defining six-dimensional integral.

        J_k = 1/(8 (2 pi)^6) int d^3l d^3m cos(l, m) e^{-(l^2+m^2)/2lam^2}/(l^2 m^2)
              * e^{-(|l+m+k|^2 - k^2)/lam^2}

    Radii are drawn as lam |N(0, 1)| and directions uniformly, which
    absorbs e^{-l^2/2lam^2}/l^2 d^3l into the sampling density and leaves
    a weight bounded by e^{k^2/lam^2}.
    """
    _check_k(k, "kernel_J_oracle", allow_zero=True)
    if samples < MIN_ORACLE_SAMPLES:
        raise DomainError(
            f"kernel_J_oracle needs at least {MIN_ORACLE_SAMPLES} samples"
        )
    rng = np.random.default_rng(seed)
    total = 0.0
    total_sq = 0.0
    drawn = 0
    while drawn < samples:
        n = min(_ORACLE_BATCH, samples - drawn)
        ul, um = _unit_vectors(rng, n), _unit_vectors(rng, n)
        l = lam * np.abs(rng.standard_normal(n))
        m = lam * np.abs(rng.standard_normal(n))
        s = l[:, None] * ul + m[:, None] * um
        s[:, 2] += k
        cos_lm = np.einsum("ij,ij->i", ul, um)
        weight = cos_lm * np.exp(-(np.einsum("ij,ij->i", s, s) - k * k) / (lam * lam))
        total += float(weight.sum())
        total_sq += float(np.dot(weight, weight))
        drawn += n
    mean = total / samples
    variance = max(total_sq / samples - mean * mean, 0.0)
    scale = lam * lam / (64.0 * math.pi ** 3)
    estimate = MonteCarloEstimate(
        value=scale * mean,
        standard_error=scale * math.sqrt(variance / (samples - 1)),
        samples=samples,
    )
    logger.debug("J oracle at k=%r: %r", k, estimate)
    return estimate
