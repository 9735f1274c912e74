"""Two-point random variables that saturate the catalog characteristics."""

import logging
import math
from dataclasses import dataclass

from .exceptions import DomainError, UsageError
from .random_variables import DiscreteRV
from .spaces.base import SpaceDescriptor, SpaceFamily
from .spaces.functions import WeightFunction, YoungFunction
from .spaces.lorentz import LorentzSpace
from .spaces.lp import LpSpace
from .spaces.orlicz import OrliczSpace
from .tail_calculus import tail_of_rv

logger = logging.getLogger(__name__)

SATURATION_TOLERANCE = 1e-8


@dataclass(frozen=True)
class WitnessReport:
    """A candidate extremal element and the quantities that show it is extremal at t."""

    family: SpaceFamily
    t: float
    rv: DiscreteRV
    norm_value: float
    tail_at_t: float
    characteristic_at_t: float

    @property
    def saturated(self) -> bool:
        return (
            abs(self.norm_value - 1.0) <= SATURATION_TOLERANCE
            and abs(self.tail_at_t - self.characteristic_at_t) <= SATURATION_TOLERANCE
        )


def _report(space: SpaceDescriptor, t: float, rv: DiscreteRV) -> WitnessReport:
    report = WitnessReport(
        family=space.family,
        t=float(t),
        rv=rv,
        norm_value=space.norm(rv),
        tail_at_t=rv.tail(t),
        characteristic_at_t=space.characteristic()(t),
    )
    logger.debug("witness for %s at t=%g: norm=%.17g saturated=%s", space.label, t, report.norm_value, report.saturated)
    return report


def lp_witness(p: float, t: float) -> WitnessReport:
    """P(xi = t) = t^-p, P(xi = 0) = 1 - t^-p.

    Raises:
        DomainError: If t <= 1 or p is not a finite exponent >= 1
    """
    if not t > 1:
        raise DomainError(f"the Lp witness needs t > 1, got t={t}")
    if math.isinf(p):
        raise DomainError("the Lp witness needs a finite exponent")
    space = LpSpace(p)
    return _report(space, t, DiscreteRV.two_point(t, t ** -p))


def orlicz_witness(N: YoungFunction, t: float) -> WitnessReport:
    """P(xi = t) = 1/N(t); E N(xi) = 1, hence unit Luxemburg norm.

    Raises:
        DomainError: If N(t) <= 1
    """
    level = float(N(t))
    if not level > 1:
        raise DomainError(f"the Orlicz witness needs N(t) > 1, got N({t})={level}")
    space = OrliczSpace(N)
    return _report(space, t, DiscreteRV.two_point(t, 1.0 / level))


def lorentz_witness(w: WeightFunction, t: float) -> WitnessReport:
    """P(xi = t) = 1/w(t); its quasinorm w(t) T_xi(t) equals 1.

    Raises:
        DomainError: If w(t) <= 1
    """
    level = float(w(t))
    if not level > 1:
        raise DomainError(f"the Lorentz witness needs w(t) > 1, got w({t})={level}")
    space = LorentzSpace(w)
    return _report(space, t, DiscreteRV.two_point(t, 1.0 / level))


def witness_for(space: SpaceDescriptor, t: float) -> WitnessReport:
    """Build the extremal witness of a catalog space at level t.

    Raises:
        UsageError: For GLS spaces, which have no catalog witness
    """
    if isinstance(space, LpSpace):
        return lp_witness(space.p, t)
    if isinstance(space, OrliczSpace):
        return orlicz_witness(space.N, t)
    if isinstance(space, LorentzSpace):
        return lorentz_witness(space.w, t)
    raise UsageError(f"no extremal witness is cataloged for {space.label}")


def verify_saturation(space: SpaceDescriptor, report: WitnessReport) -> bool:
    """Recompute norm, tail and characteristic through the catalog and confirm saturation.

    Raises:
        UsageError: If the report was built for another family
    """
    if space.family != report.family:
        raise UsageError(f"witness was built for {report.family.value}, not {space.family.value}")
    norm_value = space.norm(report.rv)
    tail = tail_of_rv(report.rv)(report.t)
    char = space.characteristic()(report.t)
    saturated = abs(norm_value - 1.0) <= SATURATION_TOLERANCE and abs(tail - char) <= SATURATION_TOLERANCE
    if not saturated:
        logger.info("witness for %s is not saturated: norm=%.17g tail=%.17g characteristic=%.17g",
                    space.label, norm_value, tail, char)
    return saturated
