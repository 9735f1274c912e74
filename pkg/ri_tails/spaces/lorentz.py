import logging
import math
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from ..numerics import grid_then_golden_min
from ..random_variables import AnalyticRV, DiscreteRV, RandomVariable
from ..tail_calculus import Provenance, TailFunction
from .base import FundamentalFunction, MeasureModel, SpaceDescriptor, SpaceFamily
from .functions import WeightForm, WeightFunction

logger = logging.getLogger(__name__)

SUP_GRID_POINTS = 2000


@dataclass(frozen=True)
class LorentzSpace(SpaceDescriptor):
    """Generalized Lorentz space normed by the quasinorm sup_t w(t) T_xi(t)."""

    w: WeightFunction
    measure: MeasureModel = field(default_factory=MeasureModel.probabilistic)

    def __post_init__(self):
        self.require_probabilistic()

    @property
    def family(self) -> SpaceFamily:
        return SpaceFamily.LORENTZ

    @property
    def label(self) -> str:
        return f"Lorentz(w={self.w.label})"

    def parameters(self) -> Dict:
        params = {"w": self.w.form.value}
        if self.w.form == WeightForm.POWER:
            params["p"] = self.w.p
        return params

    def norm(self, rv: RandomVariable) -> float:
        """Quasinorm sup_t w(t) T_xi(t).

        For atoms the supremum is exact: T_xi is constant on each interval
        (v_(k-1), v_k] and w increases, so only atom values matter.
        """
        if isinstance(rv, DiscreteRV):
            positive = [(v, rv.tail(v)) for v in rv.values if v > 0]
            if not positive:
                return 0.0
            return float(max(float(self.w(v)) * tail for v, tail in positive))
        return self._analytic_quasinorm(rv)

    def _analytic_quasinorm(self, rv: AnalyticRV) -> float:
        log_grid = np.linspace(math.log(rv.scale) - 14.0, math.log(rv.scale) + 28.0, SUP_GRID_POINTS)
        objective = lambda s: -float(self.w(math.exp(s))) * rv.tail(math.exp(s))
        values = np.array([objective(s) for s in log_grid])
        if np.argmin(values) == len(log_grid) - 1 and values[-1] < values[-2] - 1e-9 * abs(values[-2]):
            logger.warning("Lorentz quasinorm of %s still increasing at t = %.3g; reporting +inf", rv, math.exp(log_grid[-1]))
            return math.inf
        _, best = grid_then_golden_min(objective, log_grid, values, rtol=1e-12)
        return -best

    def characteristic(self) -> TailFunction:
        w = self.w
        func = lambda t: np.minimum(1.0, 1.0 / w(t))
        return TailFunction(func=func, total_mass=1.0, provenance=Provenance.CLOSED_FORM, vectorized=True)

    def fundamental(self) -> FundamentalFunction:
        # indicator quasinorm: T_I(t) = delta on (0, 1], so sup_t w(t) T_I(t) = delta * w(1)
        w1 = float(self.w(1.0))
        return FundamentalFunction(
            func=lambda delta: delta * w1,
            measure=self.measure,
            provenance=Provenance.DERIVED,
            label=f"phi_{self.label}",
        )
