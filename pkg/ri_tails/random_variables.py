"""Random-variable descriptions used for witnesses, norms and sampling."""

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Tuple, Union

import numpy as np
from scipy import integrate
from typing_extensions import Self

from .exceptions import NumericalError, ValidationError

MASS_TOLERANCE = 1e-12
QUAD_EPSREL = 1e-10


def _quad(fn: Callable[[float], float], a: float, b: float, **kwargs) -> float:
    """scipy quad with IntegrationWarning promoted to NumericalError."""
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, abserr = integrate.quad(fn, a, b, epsrel=QUAD_EPSREL, epsabs=0.0, limit=200, **kwargs)
        except integrate.IntegrationWarning as e:
            raise NumericalError(
                f"quadrature did not converge on [{a}, {b}]: {e}",
                diagnostics={"a": a, "b": b, "options": dict(kwargs)},
            )
    return value


@dataclass(frozen=True)
class DiscreteRV:
    """Finitely many atoms (value >= 0, probability > 0) with total probability one."""

    atoms: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        if not self.atoms:
            raise ValidationError("a discrete random variable needs at least one atom")
        values = [v for v, _ in self.atoms]
        if len(set(values)) != len(values):
            raise ValidationError(f"atom values must be distinct, got {values}")
        for value, prob in self.atoms:
            if not math.isfinite(value) or value < 0:
                raise ValidationError(f"atom value must be finite and >= 0, got {value}")
            if not prob > 0:
                raise ValidationError(f"atom probability must be positive, got {prob}")
        total = math.fsum(p for _, p in self.atoms)
        if abs(total - 1.0) > MASS_TOLERANCE:
            raise ValidationError(f"probabilities must sum to 1, got {total!r}")

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[float, float]]) -> Self:
        """Build from (value, probability) pairs, sorted by value."""
        return cls(tuple(sorted((float(v), float(p)) for v, p in pairs)))

    @classmethod
    def constant(cls, c: float) -> Self:
        return cls(((float(c), 1.0),))

    @classmethod
    def two_point(cls, t: float, prob: float) -> Self:
        """P(xi = t) = prob, P(xi = 0) = 1 - prob."""
        if prob >= 1.0:
            return cls.constant(t)
        return cls.from_pairs([(0.0, 1.0 - prob), (t, prob)])

    @classmethod
    def indicator(cls, delta: float) -> Self:
        """Indicator of a set of measure delta."""
        return cls.two_point(1.0, delta)

    @property
    def values(self) -> np.ndarray:
        return np.array([v for v, _ in self.atoms], dtype=float)

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([p for _, p in self.atoms], dtype=float)

    def scaled(self, c: float) -> Self:
        if c <= 0:
            raise ValidationError(f"scale must be positive, got {c}")
        return type(self).from_pairs((v * c, p) for v, p in self.atoms)

    def expect(self, fn: Callable[[np.ndarray], np.ndarray]) -> float:
        """E fn(|xi|) by exact summation over atoms."""
        return float(np.dot(self.probabilities, fn(self.values)))

    def moment(self, p: float) -> float:
        """The Lebesgue norm |xi|_p, with p = inf giving the largest atom."""
        if math.isinf(p):
            return float(np.max(self.values))
        return float(self.expect(lambda v: np.power(v, p)) ** (1.0 / p))

    def tail(self, t: float) -> float:
        """P(|xi| >= t); atoms at exactly t are counted."""
        if t <= 0:
            return 1.0
        return math.fsum(p for v, p in self.atoms if v >= t)


class AnalyticForm(str, Enum):
    POWER_SINGULARITY = "powerSingularity"


@dataclass(frozen=True)
class AnalyticRV:
    """xi(omega) = scale * omega^(-alpha) on (0, 1) with Lebesgue measure."""

    alpha: float
    scale: float = 1.0
    form: AnalyticForm = AnalyticForm.POWER_SINGULARITY

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValidationError(f"power singularity exponent must lie in (0, 1), got {self.alpha}")
        if not self.scale > 0:
            raise ValidationError(f"scale must be positive, got {self.scale}")

    def __call__(self, omega):
        return self.scale * np.power(omega, -self.alpha)

    def scaled(self, c: float) -> Self:
        if c <= 0:
            raise ValidationError(f"scale must be positive, got {c}")
        return type(self)(alpha=self.alpha, scale=self.scale * c, form=self.form)

    def tail(self, t: float) -> float:
        # scale * omega^-alpha >= t  <=>  omega <= (t / scale)^(-1/alpha)
        if t <= self.scale:
            return 1.0
        return float((t / self.scale) ** (-1.0 / self.alpha))

    def moment(self, p: float) -> float:
        """|xi|_p by QAWS quadrature of the algebraic singularity at omega = 0."""
        if math.isinf(p) or self.alpha * p >= 1.0:
            return math.inf
        integral = _quad(lambda w: 1.0, 0.0, 1.0, weight="alg", wvar=(-self.alpha * p, 0.0))
        return float(self.scale * integral ** (1.0 / p))

    def expect(self, fn: Callable[[float], float]) -> float:
        """E fn(|xi|) after the substitution u = omega^(-alpha), u in [1, inf)."""
        a = self.alpha
        s = self.scale
        return _quad(lambda u: float(fn(s * u)) * (1.0 / a) * u ** (-1.0 / a - 1.0), 1.0, math.inf)


RandomVariable = Union[DiscreteRV, AnalyticRV]
