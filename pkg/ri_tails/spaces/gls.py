import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Sequence

import numpy as np

from ..convex_transform import gls_upper_tail
from ..exceptions import DomainError
from ..numerics import top_decade_trend
from ..random_variables import DiscreteRV, RandomVariable
from ..tail_calculus import Provenance, TailFunction
from .base import FundamentalFunction, MeasureModel, SpaceDescriptor, SpaceFamily
from .functions import PsiForm, PsiFunction
from .lp import LpSpace

logger = logging.getLogger(__name__)

GROWTH_THRESHOLD = 1.1


@dataclass(frozen=True)
class GlsSpace(SpaceDescriptor):
    """Grand Lebesgue Space G(psi) normed by sup_p |xi|_p / psi(p)."""

    psi: PsiFunction
    measure: MeasureModel = field(default_factory=MeasureModel.probabilistic)

    def __post_init__(self):
        self.require_probabilistic()

    @property
    def family(self) -> SpaceFamily:
        return SpaceFamily.GLS

    @property
    def label(self) -> str:
        return f"GLS({self.psi.label})"

    def parameters(self) -> Dict:
        psi = self.psi
        if psi.form == PsiForm.GRID_BLOWUP:
            return {"form": psi.form.value, "B": psi.B, "beta": psi.beta}
        if psi.form == PsiForm.POWER_ROOT:
            return {"form": psi.form.value, "m": psi.m}
        if psi.form == PsiForm.DEGENERATE:
            return {"form": psi.form.value, "r": psi.r}
        return {"form": psi.form.value, "support": list(psi.support)}

    def norm(self, rv: RandomVariable) -> float:
        """sup over the psi p-grid of |xi|_p / psi(p).

        A ratio that is still growing across the last decade of the
        p -> B substitution means the supremum is not attained inside the
        support; the norm is then +inf.
        """
        if self.psi.form == PsiForm.DEGENERATE:
            return LpSpace(self.psi.r).norm(rv)
        p_grid = self.psi.p_grid()
        moments = np.array([rv.moment(float(p)) for p in p_grid])
        with np.errstate(invalid="ignore"):
            ratios = moments / self.psi(p_grid)
        if np.any(np.isinf(ratios)):
            return math.inf
        if self.psi.form == PsiForm.GRID_BLOWUP:
            # 1/(B - p) grows by a decade per unit of the substitution variable
            trend = top_decade_trend(1.0 / (self.psi.B - p_grid), ratios, rtol=1e-9)
            if trend.grows_beyond(GROWTH_THRESHOLD):
                logger.warning("%s norm keeps growing toward p = B (factor %.3g); reporting +inf", self.label, trend.factor)
                return math.inf
        return float(np.max(ratios))

    def characteristic(self) -> TailFunction:
        return gls_upper_tail(self.psi)

    def fundamental(self) -> FundamentalFunction:
        if self.psi.form == PsiForm.GRID_BLOWUP:
            B, beta = self.psi.B, self.psi.beta
            return FundamentalFunction(
                func=lambda delta: delta ** (1.0 / B) * abs(math.log(delta)) ** beta,
                measure=self.measure,
                provenance=Provenance.ASYMPTOTIC,
                label=f"phi_{self.label}",
                delta_max=math.exp(-B * beta),
            )
        return FundamentalFunction(
            func=lambda delta: self.norm(DiscreteRV.indicator(delta)),
            measure=self.measure,
            provenance=Provenance.CLOSED_FORM,
            label=f"phi_{self.label}",
        )


def _finite_prefix(p_grid: np.ndarray, values: np.ndarray, what: str) -> int:
    finite = np.isfinite(values)
    if finite.all():
        return len(values)
    stop = int(np.argmin(finite))
    if stop < 2:
        raise DomainError(f"{what} is infinite from p = {p_grid[stop]:g}; no usable support")
    logger.warning("%s is infinite from p = %g; truncating support to [%g, %g]", what, p_grid[stop], p_grid[0], p_grid[stop - 1])
    return stop


def natural_psi(rv: RandomVariable, p_grid: Sequence[float]) -> PsiFunction:
    """Natural function psi(p) = |xi|_p tabulated on a grid of moment orders.

    Raises:
        DomainError: If fewer than two moments on the grid are finite
    """
    p_grid = np.asarray(p_grid, dtype=float)
    moments = np.array([LpSpace(float(p)).norm(rv) for p in p_grid])
    stop = _finite_prefix(p_grid, moments, "moment")
    return PsiFunction.tabulated(p_grid[:stop], moments[:stop])


def natural_psi_family(rvs: Sequence[RandomVariable], p_grid: Sequence[float]) -> PsiFunction:
    """Natural function of a family, psi(p) = sup over the family of |xi|_p."""
    if not rvs:
        raise DomainError("natural function of an empty family")
    p_grid = np.asarray(p_grid, dtype=float)
    moments = np.max([[LpSpace(float(p)).norm(rv) for p in p_grid] for rv in rvs], axis=0)
    stop = _finite_prefix(p_grid, moments, "family moment")
    return PsiFunction.tabulated(p_grid[:stop], moments[:stop])
