"""Grid checks for characteristics: regularity, associate products, resonant and direct-sum bounds.

Every builder is pure. Per-point work may run on a thread pool; records are
always assembled in grid order.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import DomainError, NumericalError, UsageError
from .numerics import bisect_threshold, ordered_map, top_decade_trend, validate_grid
from .spaces.base import SpaceDescriptor
from .spaces.functions import YoungForm
from .tail_calculus import (
    GROWTH_THRESHOLD,
    Provenance,
    TailFunction,
    dilate,
    equivalence_check,
    left_inverse,
    vee,
)

logger = logging.getLogger(__name__)

EXACT_TOLERANCE = 1e-6
UNBOUNDED_GROWTH = 5.0
INVERSION_CAP = 1e24
PRODUCT_TOLERANCE = 1e-9
ORLICZ_PRODUCT_SLACK = 2.0 + 1e-6


class Verdict(str, Enum):
    EXACT = "exact"
    BOUNDED_RATIO = "boundedRatio"
    UNBOUNDED = "unbounded"
    VIOLATED = "violated"

    @property
    def passed(self) -> bool:
        return self != Verdict.VIOLATED


@dataclass(frozen=True)
class PointRecord:
    """One grid point: both sides of a relation and their ratio."""

    x: float
    lhs: float
    rhs: float
    ratio: float
    band: Optional[float] = None


@dataclass
class DiagnosticsReport:
    """Grid evidence for one check, with its verdict."""

    subject: str
    grid_kind: str
    records: List[PointRecord]
    verdict: Verdict
    constants: Dict[str, float] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    sections: List["DiagnosticsReport"] = field(default_factory=list)

    @property
    def grid(self) -> np.ndarray:
        return np.array([r.x for r in self.records])

    @property
    def ratios(self) -> np.ndarray:
        return np.array([r.ratio for r in self.records])

    @property
    def ratio_range(self) -> Tuple[float, float]:
        ratios = self.ratios
        return float(np.min(ratios)), float(np.max(ratios))

    @property
    def passed(self) -> bool:
        return self.verdict.passed and all(s.passed for s in self.sections)


def _point(x: float, lhs: float, rhs: float, band: Optional[float] = None) -> PointRecord:
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = float(np.float64(lhs) / np.float64(rhs))
    return PointRecord(x=float(x), lhs=float(lhs), rhs=float(rhs), ratio=ratio, band=band)


def _increasing_inverse(g, t: float, lo: float) -> float:
    """Smallest s >= lo with g(s) >= t for increasing g; bracket doubled up to 1e24."""
    if g(lo) >= t:
        return lo
    hi = 2.0 * lo
    while g(hi) < t:
        if hi >= INVERSION_CAP:
            raise NumericalError(
                f"inversion bracket exhausted before reaching level {t:.6g}",
                diagnostics={"level": t, "lo": lo, "hi": hi, "g_hi": g(hi)},
            )
        hi *= 2.0
    return bisect_threshold(lambda s: g(s) >= t, max(lo, hi / 2.0), hi, rtol=1e-12)


def regularity_report(
    space: SpaceDescriptor,
    t_grid: Sequence[float],
    t0: Optional[float] = None,
    workers: Optional[int] = None,
) -> DiagnosticsReport:
    """Compare g^-1(t) with 1/T(t), where g(s) = 1/phi(1/s).

    The ratio rho(t) = g^-1(t) T(t) is 1 for a regular space and stays
    bounded for a weak regular one.

    Args:
        space: Space with a characteristic and a fundamental function
        t_grid: Increasing positive grid
        t0: Smallest t considered; defaults to the characteristic's t0
        workers: Thread count for per-point work

    Returns:
        DiagnosticsReport with verdict exact, boundedRatio or unbounded

    Raises:
        DomainError: If the space is not over a probabilistic measure
        NumericalError: If g^-1 cannot be bracketed
    """
    space.require_probabilistic()
    T = space.characteristic()
    phi = space.fundamental()
    grid = validate_grid(t_grid)
    start = T.t0 if t0 is None else t0
    points = grid[grid >= start]
    if points.size == 0:
        raise UsageError(f"no grid point lies at or above t0 = {start}")

    g = lambda s: 1.0 / phi(1.0 / s)
    lo = 1.0 / phi.delta_max

    def evaluate(t: float) -> PointRecord:
        inverse = _increasing_inverse(g, t, lo)
        with np.errstate(divide="ignore"):
            reciprocal = np.float64(1.0) / np.float64(T(t))
        return _point(t, inverse, reciprocal)

    records = ordered_map(evaluate, points, workers)
    rho = np.array([r.ratio for r in records])
    constants = {"rho_min": float(rho.min()), "rho_max": float(rho.max())}
    notes = [f"characteristic provenance: {T.provenance.value}", f"fundamental provenance: {phi.provenance.value}"]

    nondecreasing = bool(np.all(rho[1:] >= rho[:-1] * (1.0 - 1e-9)))
    if np.max(np.abs(rho - 1.0)) <= EXACT_TOLERANCE:
        verdict = Verdict.EXACT
    elif nondecreasing and rho[-1] / rho[0] >= UNBOUNDED_GROWTH:
        verdict = Verdict.UNBOUNDED
        constants["growth"] = float(rho[-1] / rho[0])
    else:
        verdict = Verdict.BOUNDED_RATIO
    if phi.provenance == Provenance.ASYMPTOTIC:
        notes.append("fundamental function uses unit constants; only the ratio trend is meaningful")
    logger.info("regularity of %s: %s", space.label, verdict.value)
    return DiagnosticsReport(
        subject=f"regularity {space.label}",
        grid_kind="t",
        records=records,
        verdict=verdict,
        constants=constants,
        notes=notes,
    )


def _associate_kind(F: SpaceDescriptor, G: SpaceDescriptor) -> str:
    from .spaces.lp import LpSpace
    from .spaces.orlicz import OrliczSpace

    if isinstance(F, LpSpace) and isinstance(G, LpSpace):
        if 1.0 < F.p < math.inf and 1.0 < G.p < math.inf and abs(1.0 / F.p + 1.0 / G.p - 1.0) <= 1e-12:
            return "lp"
    if isinstance(F, OrliczSpace) and isinstance(G, OrliczSpace):
        if G.N.form == YoungForm.CONJUGATE and G.N.source == F.N:
            return "orlicz"
        if F.N.form == YoungForm.CONJUGATE and F.N.source == G.N:
            return "orlicz"
    raise UsageError(f"{F.label} and {G.label} are not a cataloged associate pair")


def _reciprocal_inverse(space: SpaceDescriptor, T: TailFunction, t: float) -> float:
    """[1/T]^-1(t), the smallest s with T(s) <= 1/t.

    For an Orlicz space T = min(1, 1/N), so for t > 1 this is N^-1(t).
    """
    from .spaces.orlicz import OrliczSpace

    if isinstance(space, OrliczSpace):
        return space.N.inverse(t)
    return left_inverse(T, 1.0 / t)


def associate_product(
    space_f: SpaceDescriptor,
    space_f_prime: SpaceDescriptor,
    t_grid: Sequence[float],
    delta_grid: Optional[Sequence[float]] = None,
    workers: Optional[int] = None,
) -> DiagnosticsReport:
    """Product identities of an associate pair.

    On the t-side, [1/T_F]^-1(t) [1/T_F']^-1(t) is compared with t; on the
    delta-side, phi_F(delta) phi_F'(delta) with delta (reported as a section).

    Raises:
        UsageError: If the pair is not cataloged, or the t-grid does not lie above 1
    """
    kind = _associate_kind(space_f, space_f_prime)
    T_f = space_f.characteristic()
    T_g = space_f_prime.characteristic()
    grid = validate_grid(t_grid)
    if grid[0] <= 1.0:
        raise UsageError(f"associate t-grid must lie above 1 (the level 1/t must be below 1), got t = {grid[0]:g}")
    deltas = validate_grid(np.geomspace(1e-6, 1.0, 50) if delta_grid is None else delta_grid)

    def t_side(t: float) -> PointRecord:
        product = _reciprocal_inverse(space_f, T_f, t) * _reciprocal_inverse(space_f_prime, T_g, t)
        return _point(t, product, t)

    records = ordered_map(t_side, grid, workers)
    ratios = np.array([r.ratio for r in records])
    constants = {"ratio_min": float(ratios.min()), "ratio_max": float(ratios.max())}
    notes: List[str] = []

    if np.any(ratios < 1.0 - PRODUCT_TOLERANCE):
        verdict = Verdict.VIOLATED
        notes.append("product fell below t")
    elif kind == "lp":
        exact = np.all(np.abs(ratios - 1.0) <= PRODUCT_TOLERANCE)
        verdict = Verdict.EXACT if exact else Verdict.VIOLATED
    elif np.any(ratios > ORLICZ_PRODUCT_SLACK):
        verdict = Verdict.VIOLATED
        notes.append("product exceeded 2t")
    else:
        verdict = Verdict.BOUNDED_RATIO

    phi_f = space_f.fundamental()
    phi_g = space_f_prime.fundamental()
    delta_records = ordered_map(lambda d: _point(d, phi_f(d) * phi_g(d), d), deltas, workers)
    delta_ratios = np.array([r.ratio for r in delta_records])
    if kind == "lp":
        delta_exact = np.all(np.abs(delta_ratios - 1.0) <= PRODUCT_TOLERANCE)
        delta_verdict = Verdict.EXACT if delta_exact else Verdict.VIOLATED
        delta_notes = []
    else:
        delta_verdict = Verdict.BOUNDED_RATIO
        delta_notes = ["Luxemburg norms on both sides; the ratio is recorded, not asserted"]
    delta_report = DiagnosticsReport(
        subject=f"fundamental product {space_f.label} x {space_f_prime.label}",
        grid_kind="delta",
        records=delta_records,
        verdict=delta_verdict,
        constants={"ratio_min": float(delta_ratios.min()), "ratio_max": float(delta_ratios.max())},
        notes=delta_notes,
    )
    return DiagnosticsReport(
        subject=f"associate product {space_f.label} x {space_f_prime.label}",
        grid_kind="t",
        records=records,
        verdict=verdict,
        constants=constants,
        notes=notes,
        sections=[delta_report],
    )


def resonant_bound(space: SpaceDescriptor, t_grid: Sequence[float]) -> DiagnosticsReport:
    """C3 = max over the grid of t T(t); growth across the top decade means no such constant."""
    space.require_probabilistic()
    T = space.characteristic()
    grid = validate_grid(t_grid)
    products = grid * T.evaluate(grid)
    C3 = float(np.max(products))
    trend = top_decade_trend(grid, products, increasing=True)
    records = [_point(t, v, C3) for t, v in zip(grid, products)]
    if trend.grows_beyond(GROWTH_THRESHOLD):
        verdict = Verdict.VIOLATED
        notes = [f"t T(t) grows by a factor {trend.factor:.4g} across the top decade"]
    else:
        verdict = Verdict.BOUNDED_RATIO
        notes = []
    return DiagnosticsReport(
        subject=f"resonant bound {space.label}",
        grid_kind="t",
        records=records,
        verdict=verdict,
        constants={"C3": C3, "top_decade_factor": trend.factor},
        notes=notes,
    )


def sum_characteristic_bounds(
    TF: TailFunction,
    TG: TailFunction,
    t_grid: Sequence[float],
    check_equivalence: bool = False,
    workers: Optional[int] = None,
) -> DiagnosticsReport:
    """Sandwich max(T_F, T_G) <= T_H <= T_F v T_G for the direct sum H.

    Args:
        TF: Characteristic of the first summand
        TG: Characteristic of the second summand
        t_grid: Increasing positive grid
        check_equivalence: Also check that the two bounds are equivalent tails

    Raises:
        DomainError: If the tails have different total mass
    """
    upper = vee(TF, TG)
    lower = TailFunction(
        func=lambda t: max(TF(t), TG(t)),
        total_mass=TF.total_mass,
        t0=max(TF.t0, TG.t0),
        provenance=Provenance.COMPOSED,
    )
    grid = validate_grid(t_grid)
    records = ordered_map(lambda t: _point(t, lower(t), upper(t)), grid, workers)
    violated = [r.x for r in records if r.lhs > r.rhs * (1.0 + 1e-12) + 1e-15]
    constants: Dict[str, float] = {}
    notes: List[str] = []
    if violated:
        verdict = Verdict.VIOLATED
        notes.append(f"max exceeds vee at {len(violated)} points, first at t = {violated[0]:.6g}")
    else:
        verdict = Verdict.BOUNDED_RATIO

    if check_equivalence and verdict.passed:
        witness = equivalence_check(upper, lower, grid)
        if witness is None:
            verdict = Verdict.UNBOUNDED
            notes.append("vee and max are not equivalent on this grid")
        else:
            constants.update(t0=witness.t0, C1=witness.C1, C2=witness.C2)
    return DiagnosticsReport(
        subject="direct-sum sandwich",
        grid_kind="t",
        records=records,
        verdict=verdict,
        constants=constants,
        notes=notes,
    )


def dilation_consistency(
    space: SpaceDescriptor,
    constants: Sequence[float],
    t_grid: Sequence[float],
) -> DiagnosticsReport:
    """Characteristics of equivalent norms, modelled as dilations, are equivalent tails.

    One record per constant c: the witness constants C1, C2 of
    T(t/c) against T(t).
    """
    if not constants:
        raise UsageError("at least one dilation constant is required")
    T = space.characteristic()
    grid = validate_grid(t_grid)
    records: List[PointRecord] = []
    missing: List[float] = []
    for c in constants:
        if not c > 0:
            raise DomainError(f"dilation constant must be positive, got {c}")
        witness = equivalence_check(dilate(T, c), T, grid)
        if witness is None:
            missing.append(c)
            records.append(PointRecord(x=float(c), lhs=math.nan, rhs=math.nan, ratio=math.nan))
        else:
            records.append(_point(c, witness.C1, witness.C2))
    verdict = Verdict.VIOLATED if missing else Verdict.BOUNDED_RATIO
    notes = [f"no equivalence witness for c = {c:g}" for c in missing]
    return DiagnosticsReport(
        subject=f"dilation consistency {space.label}",
        grid_kind="c",
        records=records,
        verdict=verdict,
        notes=notes,
    )
