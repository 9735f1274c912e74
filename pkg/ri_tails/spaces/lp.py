import math
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from ..exceptions import DomainError
from ..random_variables import RandomVariable
from ..tail_calculus import Provenance, TailFunction
from .base import FundamentalFunction, MeasureModel, SpaceDescriptor, SpaceFamily


@dataclass(frozen=True)
class LpSpace(SpaceDescriptor):
    """Lebesgue space L_p, 1 <= p <= inf."""

    p: float
    measure: MeasureModel = field(default_factory=MeasureModel.probabilistic)

    def __post_init__(self):
        if not 1.0 <= self.p <= math.inf:
            raise DomainError(f"Lp needs 1 <= p <= inf, got p={self.p}")

    @property
    def family(self) -> SpaceFamily:
        return SpaceFamily.LP

    @property
    def label(self) -> str:
        return "Linf" if math.isinf(self.p) else f"Lp({self.p:g})"

    def parameters(self) -> Dict:
        return {"p": self.p}

    def norm(self, rv: RandomVariable) -> float:
        return rv.moment(self.p)

    def characteristic(self) -> TailFunction:
        p = self.p
        total = self.measure.total_mass
        if math.isinf(p):
            func = lambda t: np.where(t <= 1.0, total, 0.0)
        elif self.measure.is_probabilistic:
            func = lambda t: np.minimum(1.0, np.power(t, -p))
        else:
            func = lambda t: np.power(t, -p)
        return TailFunction(func=func, total_mass=total, provenance=Provenance.CLOSED_FORM, vectorized=True)

    def fundamental(self) -> FundamentalFunction:
        p = self.p
        func = (lambda delta: 1.0) if math.isinf(p) else (lambda delta: delta ** (1.0 / p))
        return FundamentalFunction(func=func, measure=self.measure, label=f"phi_{self.label}")
