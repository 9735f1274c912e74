import logging
import math
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from ..numerics import bisect_threshold
from ..random_variables import AnalyticRV, RandomVariable, _quad
from ..tail_calculus import Provenance, TailFunction
from .base import FundamentalFunction, MeasureModel, SpaceDescriptor, SpaceFamily
from .functions import YoungForm, YoungFunction

logger = logging.getLogger(__name__)

LUXEMBURG_LO = 1e-12
LUXEMBURG_HI = 1e12
LUXEMBURG_RTOL = 1e-12
CRITICAL_RTOL = 1e-12
CRITICAL_CUTOFF = 50.0


@dataclass(frozen=True)
class OrliczSpace(SpaceDescriptor):
    """Orlicz space Or(N) with the Luxemburg norm."""

    N: YoungFunction
    measure: MeasureModel = field(default_factory=MeasureModel.probabilistic)

    def __post_init__(self):
        self.require_probabilistic()

    @property
    def family(self) -> SpaceFamily:
        return SpaceFamily.ORLICZ

    @property
    def label(self) -> str:
        return f"Orlicz(N={self.N.label})"

    def parameters(self) -> Dict:
        params = {"form": self.N.form.value}
        if self.N.form in (YoungForm.POWER, YoungForm.POWER_LOG):
            params.update(p=self.N.p, q=self.N.q, c=self.N.c)
        return params

    def modular(self, rv: RandomVariable, k: float) -> float:
        """E N(|xi| / k)."""
        N = self.N
        if isinstance(rv, AnalyticRV) and N.form == YoungForm.POWER_LOG and self._critical(rv):
            return self._critical_modular(rv, k)
        return rv.expect(lambda v: N(v / k))

    def _critical(self, rv: AnalyticRV) -> bool:
        return abs(rv.alpha * self.N.growth_exponent - 1.0) <= CRITICAL_RTOL

    def _critical_modular(self, rv: AnalyticRV, k: float) -> float:
        """Modular of c u^p log^q(e + u) at alpha p = 1, where only q < -1 keeps it finite.

        With u = omega^-alpha = e^tau the integrand becomes (c / alpha) b^p log^q(e + b e^tau)
        with b = scale / k; past tau = T the logarithm is tau + log b to double precision.
        """
        N = self.N
        b = rv.scale / k
        log_b = math.log(b)
        T = max(CRITICAL_CUTOFF, CRITICAL_CUTOFF - log_b)
        head = _quad(lambda tau: math.log(math.e + b * math.exp(tau)) ** N.q, 0.0, T)
        tail = (T + log_b) ** (N.q + 1.0) / -(N.q + 1.0)
        return N.c / rv.alpha * b ** N.p * (head + tail)

    def norm(self, rv: RandomVariable) -> float:
        """Luxemburg norm inf{k > 0: E N(|xi| / k) <= 1}.

        k -> E N(|xi|/k) is strictly decreasing, so the infimum is found by
        bisection on [1e-12, 1e12]. Outside that bracket the norm is
        reported as 0 or +inf.
        """
        if isinstance(rv, AnalyticRV):
            r = rv.alpha * self.N.growth_exponent
            if r > 1.0 + CRITICAL_RTOL:
                return math.inf
            # at alpha p = 1 the modular is finite only for a log factor decaying faster than 1/log
            if self._critical(rv) and self.N.log_exponent >= -1.0:
                return math.inf
        if rv.moment(math.inf) == 0.0:
            return 0.0
        fits = lambda k: self.modular(rv, k) <= 1.0
        if not fits(LUXEMBURG_HI):
            logger.warning("Luxemburg norm exceeds %.0e for %s; reporting +inf", LUXEMBURG_HI, self.label)
            return math.inf
        if fits(LUXEMBURG_LO):
            logger.warning("Luxemburg norm below %.0e for %s; reporting 0", LUXEMBURG_LO, self.label)
            return 0.0
        return bisect_threshold(fits, LUXEMBURG_LO, LUXEMBURG_HI, rtol=LUXEMBURG_RTOL)

    def characteristic(self) -> TailFunction:
        N = self.N

        def func(t):
            with np.errstate(divide="ignore"):
                return np.minimum(1.0, 1.0 / N(t))

        return TailFunction(func=func, total_mass=1.0, provenance=Provenance.CLOSED_FORM, vectorized=True)

    def fundamental(self) -> FundamentalFunction:
        N = self.N
        return FundamentalFunction(
            func=lambda delta: 1.0 / N.inverse(1.0 / delta),
            measure=self.measure,
            label=f"phi_{self.label}",
        )
