"""Special functions used by the kernel closed forms.

Erfi grows like e^{x^2} and overflows double precision near x = 26.6, yet
every kernel pairs it with a decaying exponential. Erfi is therefore only
produced as a ``ScaledReal`` built from Dawson's integral, and products
like e^{a x^2} Erf(x) keep their exponent apart from the mantissa.
"""
import math
from dataclasses import dataclass

from scipy import special

TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)
_LOG_TWO_OVER_SQRT_PI = math.log(TWO_OVER_SQRT_PI)


def erf(x: float) -> float:
    """Error function, odd to the last bit."""
    if x < 0.0:
        return -float(special.erf(-x))
    return float(special.erf(x))


def dawson(x: float) -> float:
    """Dawson's integral D(x) = e^{-x^2} int_0^x e^{t^2} dt (odd in x)."""
    return float(special.dawsn(x))


@dataclass(frozen=True)
class ScaledReal:
    """A real number stored as ``mantissa * exp(log_scale)``.

    Normalized values keep 1 <= |mantissa| < e and an integral
    ``log_scale``; zero is ``ScaledReal(0.0, 0.0)``.
    """

    mantissa: float = 0.0
    log_scale: float = 0.0

    @classmethod
    def normalized(cls, mantissa: float, log_scale: float = 0.0) -> "ScaledReal":
        if mantissa == 0.0:
            return cls()
        if not math.isfinite(mantissa):
            return cls(float(mantissa), 0.0)
        shift = math.floor(math.log(abs(mantissa)))
        mantissa = mantissa * math.exp(-shift)
        while abs(mantissa) >= math.e:
            mantissa /= math.e
            shift += 1
        while abs(mantissa) < 1.0:
            mantissa *= math.e
            shift -= 1
        return cls(float(mantissa), float(log_scale + shift))

    @classmethod
    def from_float(cls, value: float) -> "ScaledReal":
        return cls.normalized(float(value))

    @classmethod
    def from_log(cls, sign: float, log_abs: float) -> "ScaledReal":
        """The value ``sign * exp(log_abs)``."""
        if sign == 0 or log_abs == -math.inf:
            return cls()
        exponent = math.floor(log_abs)
        mantissa = math.exp(log_abs - exponent)
        if mantissa >= math.e:
            mantissa /= math.e
            exponent += 1
        return cls(math.copysign(mantissa, sign), float(exponent))

    @property
    def sign(self) -> int:
        if self.mantissa > 0:
            return 1
        if self.mantissa < 0:
            return -1
        return 0

    def is_zero(self) -> bool:
        return self.mantissa == 0.0

    def log_abs(self) -> float:
        if self.is_zero():
            return -math.inf
        return math.log(abs(self.mantissa)) + self.log_scale

    def to_float(self) -> float:
        """Plain float value, +-inf when it overflows."""
        if self.is_zero():
            return 0.0
        try:
            return self.mantissa * math.exp(self.log_scale)
        except OverflowError:
            return math.copysign(math.inf, self.mantissa)

    def _align(self, other):
        """Return (self_m, other_m, scale) with both values over one exponent."""
        if not isinstance(other, ScaledReal):
            other = ScaledReal.from_float(other)
        if self.is_zero():
            return 0.0, other.mantissa, other.log_scale
        if other.is_zero():
            return self.mantissa, 0.0, self.log_scale
        scale = max(self.log_scale, other.log_scale)
        return (
            self.mantissa * math.exp(self.log_scale - scale),
            other.mantissa * math.exp(other.log_scale - scale),
            scale,
        )

    def __add__(self, other):
        sm, om, scale = self._align(other)
        return ScaledReal.normalized(sm + om, scale)

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        sm, om, scale = self._align(other)
        return ScaledReal.normalized(sm - om, scale)

    def __rsub__(self, other):
        sm, om, scale = self._align(other)
        return ScaledReal.normalized(om - sm, scale)

    def __neg__(self):
        return ScaledReal(-self.mantissa, self.log_scale)

    def __abs__(self):
        return ScaledReal(abs(self.mantissa), self.log_scale)

    def __mul__(self, other):
        if isinstance(other, ScaledReal):
            return ScaledReal.normalized(
                self.mantissa * other.mantissa, self.log_scale + other.log_scale
            )
        return ScaledReal.normalized(self.mantissa * other, self.log_scale)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, ScaledReal):
            return ScaledReal.normalized(
                self.mantissa / other.mantissa, self.log_scale - other.log_scale
            )
        return ScaledReal.normalized(self.mantissa / other, self.log_scale)

    def __float__(self):
        return self.to_float()

    def __str__(self):
        return f"{format(self.mantissa, '.17g')}*exp({format(self.log_scale, '.17g')})"


def erf_scaled_product(a: float, x: float) -> ScaledReal:
    """e^{a x^2} Erf(x) without overflow."""
    if x == 0.0:
        return ScaledReal()
    return ScaledReal.from_log(
        math.copysign(1.0, x), a * x * x + math.log(abs(erf(x)))
    )


def erfi(x: float) -> float:
    """Erfi(x) = -i Erf(ix); +-inf once it leaves the double range."""
    return erfi_scaled(x).to_float()


def erfi_scaled(x: float) -> ScaledReal:
    """Erfi(x) = (2/sqrt(pi)) e^{x^2} D(x) as a scaled value."""
    if x == 0.0:
        return ScaledReal()
    return ScaledReal.from_log(
        math.copysign(1.0, x),
        x * x + _LOG_TWO_OVER_SQRT_PI + math.log(abs(dawson(x))),
    )
