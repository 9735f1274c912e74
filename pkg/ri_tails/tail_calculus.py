"""Tail functions as evaluable values and the operations defined on them.

A tail function is t -> mu{|xi| >= t}. Every operation here is pure and every
value is immutable, so tails can be evaluated from many threads at once.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .exceptions import DomainError, RangeError, UsageError
from .numerics import bisect_threshold, grid_then_golden_min, top_decade_trend, validate_grid
from .random_variables import RandomVariable

logger = logging.getLogger(__name__)

DEFAULT_T0 = 2.0
CONSTANT_LO = 2.0 ** -20
CONSTANT_HI = 2.0 ** 20
GROWTH_THRESHOLD = 1.1
VEE_GRID_POINTS = 256


class Provenance(str, Enum):
    CLOSED_FORM = "closed-form"
    OPTIMIZATION_BOUND = "optimization-bound"
    TABULATED = "tabulated"
    COMPOSED = "composed"
    ASYMPTOTIC = "asymptotic"
    DERIVED = "derived"


@dataclass(frozen=True, eq=False)
class TailFunction:
    """A nonincreasing map t -> measure of exceedance with values in [0, total_mass].

    ``func`` only sees t > 0; evaluation at t <= 0 returns ``total_mass``.
    When ``vectorized`` is set, ``func`` accepts numpy arrays.
    """

    func: Callable
    total_mass: float = 1.0
    t0: float = DEFAULT_T0
    provenance: Provenance = Provenance.CLOSED_FORM
    vectorized: bool = False
    valid_up_to: float = math.inf

    def __post_init__(self):
        if not self.total_mass >= 0:
            raise DomainError(f"total mass must be nonnegative, got {self.total_mass}")
        if not self.t0 > 0:
            raise DomainError(f"t0 must be positive, got {self.t0}")

    @property
    def probabilistic(self) -> bool:
        return self.total_mass == 1.0

    def evaluate(self, ts) -> np.ndarray:
        """Evaluate on an array of points."""
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        out = np.full(ts.shape, self.total_mass, dtype=float)
        positive = ts > 0
        if np.any(positive):
            if self.vectorized:
                with np.errstate(over="ignore", divide="ignore"):
                    out[positive] = self.func(ts[positive])
            else:
                out[positive] = [self.func(float(t)) for t in ts[positive]]
        return np.clip(out, 0.0, self.total_mass)

    def __call__(self, t: float) -> float:
        if t <= 0:
            return float(self.total_mass)
        if self.vectorized:
            with np.errstate(over="ignore", divide="ignore"):
                value = float(self.func(np.float64(t)))
        else:
            value = float(self.func(float(t)))
        return min(max(value, 0.0), self.total_mass)


@dataclass(frozen=True)
class EquivalenceWitness:
    """Constants t0, C1, C2 bracketing one tail by dilations of another."""

    t0: float
    C1: float
    C2: Optional[float] = None

    def __post_init__(self):
        for name in ("t0", "C1"):
            value = getattr(self, name)
            if not 0 < value < math.inf:
                raise DomainError(f"{name} must be finite and positive, got {value}")
        if self.C2 is not None and not 0 < self.C2 < math.inf:
            raise DomainError(f"C2 must be finite and positive, got {self.C2}")


def tail_of_rv(rv: RandomVariable) -> TailFunction:
    """Exact exceedance function t -> P(|xi| >= t) of a random variable."""
    return TailFunction(func=rv.tail, total_mass=1.0, provenance=Provenance.CLOSED_FORM)


def tabulated_tail(ts: Sequence[float], values: Sequence[float], total_mass: float = 1.0) -> TailFunction:
    """Tail interpolated log-linearly between tabulated points.

    Below the first point the first value is used, beyond the last point the
    last value is kept; ``valid_up_to`` marks where extrapolation begins.
    """
    grid = validate_grid(ts)
    vals = np.asarray(values, dtype=float)
    if vals.shape != grid.shape:
        raise UsageError("tabulated tail needs one value per grid point")
    if np.any(np.diff(vals) > 1e-12):
        raise DomainError("tabulated tail values must be nonincreasing")
    log_t = np.log(grid)

    def func(t):
        with np.errstate(divide="ignore"):
            log_v = np.interp(np.log(t), log_t, np.log(np.maximum(vals, 1e-300)))
        return np.exp(log_v)

    return TailFunction(
        func=func,
        total_mass=total_mass,
        t0=float(grid[0]),
        provenance=Provenance.TABULATED,
        vectorized=True,
        valid_up_to=float(grid[-1]),
    )


def is_nonincreasing(T: TailFunction, grid: Sequence[float], tol: float = 1e-12) -> bool:
    values = T.evaluate(grid)
    return bool(np.all(values[1:] <= values[:-1] + tol))


def dilate(T: TailFunction, c: float) -> TailFunction:
    """t -> T(t / c)."""
    if not c > 0:
        raise DomainError(f"dilation constant must be positive, got {c}")
    if T.vectorized:
        func = lambda t: T.func(t / c)
    else:
        func = lambda t: T(t / c)
    return TailFunction(
        func=func,
        total_mass=T.total_mass,
        t0=c * T.t0,
        provenance=Provenance.COMPOSED,
        vectorized=T.vectorized,
        valid_up_to=c * T.valid_up_to,
    )


def norm_comparison_bounds(T: TailFunction, C1: float, C2: float) -> Tuple[TailFunction, TailFunction]:
    """Bracket for the characteristic of an equivalent norm.

    If ||x|| >= C1 |||x||| and ||x|| <= C2 |||x|||, the unit ball of ||.||
    lies between the |||.|||-balls of radius 1/C2 and 1/C1, so its
    characteristic lies between T(C2 t) and T(C1 t), where T belongs to |||.|||.

    Returns:
        Tuple of (lower, upper) tails

    Raises:
        DomainError: If a constant is not positive
    """
    if not (C1 > 0 and C2 > 0):
        raise DomainError(f"norm comparison constants must be positive, got C1={C1}, C2={C2}")
    return dilate(T, 1.0 / C2), dilate(T, 1.0 / C1)


def _within(lhs: float, rhs: float) -> bool:
    return lhs <= rhs * (1.0 + 1e-12)


def _minimal_constant(T1: TailFunction, T2: TailFunction, t: float) -> float:
    """Smallest C in [2^-20, 2^20] with T1(t) <= T2(t/C), or inf."""
    target = T1(t)
    works = lambda C: _within(target, T2(t / C))
    if not works(CONSTANT_HI):
        return math.inf
    return bisect_threshold(works, CONSTANT_LO, CONSTANT_HI, rtol=1e-12)


def _maximal_constant(T1: TailFunction, T2: TailFunction, t: float) -> float:
    """Largest C in [2^-20, 2^20] with T2(t/C) <= T1(t), or 0."""
    target = T1(t)
    works = lambda C: _within(T2(t / C), target)
    if not works(CONSTANT_LO):
        return 0.0
    if works(CONSTANT_HI):
        return CONSTANT_HI
    # works(C) holds below the threshold; bisect on the reciprocal so the predicate flips False -> True.
    inv = bisect_threshold(lambda s: works(1.0 / s), 1.0 / CONSTANT_HI, 1.0 / CONSTANT_LO, rtol=1e-12)
    return 1.0 / inv


def _admissible(grid: np.ndarray, t0: Optional[float]) -> np.ndarray:
    start = grid[0] if t0 is None else t0
    points = grid[grid >= start]
    if points.size == 0:
        raise UsageError(f"no grid point lies at or above t0 = {start}")
    return points


def _needed_constants(T1: TailFunction, T2: TailFunction, points: np.ndarray) -> Optional[np.ndarray]:
    """Per-point minimal constants, or None when they keep growing across the top decade."""
    needed = np.array([_minimal_constant(T1, T2, float(t)) for t in points])
    if top_decade_trend(points, needed, increasing=True).grows_beyond(GROWTH_THRESHOLD):
        logger.debug("order constant keeps growing across the top decade; no witness")
        return None
    return needed


def order_check(
    T1: TailFunction,
    T2: TailFunction,
    grid: Sequence[float],
    t0: Optional[float] = None,
) -> Optional[EquivalenceWitness]:
    """Find (t0, C1) with T1(t) <= T2(t/C1) at every grid point >= t0.

    Args:
        T1: Dominated tail
        T2: Dominating tail
        grid: Finite strictly increasing positive grid
        t0: Smallest admissible threshold; defaults to the grid minimum

    Returns:
        EquivalenceWitness with C2 unset, or None when no constant in
        [2^-20, 2^20] works or the needed constant keeps growing with t.
    """
    points = _admissible(validate_grid(grid), t0)
    needed = _needed_constants(T1, T2, points)
    if needed is None:
        return None
    # sup over the suffix starting at each candidate t0
    suffix_sup = np.maximum.accumulate(needed[::-1])[::-1]
    for i, C1 in enumerate(suffix_sup):
        if C1 <= CONSTANT_HI:
            return EquivalenceWitness(t0=float(points[i]), C1=float(C1))
    return None


def equivalence_check(
    T1: TailFunction,
    T2: TailFunction,
    grid: Sequence[float],
    t0: Optional[float] = None,
) -> Optional[EquivalenceWitness]:
    """Find (t0, C1, C2) with T2(t/C2) <= T1(t) <= T2(t/C1) at every grid point >= t0.

    No ordering between C1 and C2 is imposed.
    """
    points = _admissible(validate_grid(grid), t0)
    needed = _needed_constants(T1, T2, points)
    if needed is None:
        return None
    allowed = np.array([_maximal_constant(T1, T2, float(t)) for t in points])
    if top_decade_trend(points, allowed, increasing=False).grows_beyond(GROWTH_THRESHOLD):
        logger.debug("lower dilation constant keeps shrinking across the top decade; no witness")
        return None

    suffix_sup = np.maximum.accumulate(needed[::-1])[::-1]
    suffix_inf = np.minimum.accumulate(allowed[::-1])[::-1]
    for i in range(len(points)):
        if suffix_sup[i] <= CONSTANT_HI and suffix_inf[i] >= CONSTANT_LO:
            return EquivalenceWitness(t0=float(points[i]), C1=float(suffix_sup[i]), C2=float(suffix_inf[i]))
    return None


def vee(T1: TailFunction, T2: TailFunction) -> TailFunction:
    """(T1 v T2)(t) = inf over x in [0, 1] of T1(t x) + T2(t (1 - x)).

    The infimum is located on a 256-point grid of [0, 1] plus its midpoint,
    then polished by golden section on the best bracket.
    """
    if T1.total_mass != T2.total_mass:
        raise DomainError(f"vee needs equal total mass, got {T1.total_mass} and {T2.total_mass}")
    total = T1.total_mass
    xs = np.union1d(np.linspace(0.0, 1.0, VEE_GRID_POINTS), [0.5])

    def func(t: float) -> float:
        objective = lambda x: T1(t * x) + T2(t * (1.0 - x))
        values = T1.evaluate(t * xs) + T2.evaluate(t * (1.0 - xs))
        _, best = grid_then_golden_min(objective, xs, values, rtol=1e-10)
        return min(max(best, 0.0), total)

    return TailFunction(
        func=func,
        total_mass=total,
        t0=max(T1.t0, T2.t0),
        provenance=Provenance.COMPOSED,
        vectorized=False,
    )


def left_inverse(
    T: TailFunction,
    level: float,
    t_lo: float = 1e-9,
    t_hi: float = 1e12,
) -> float:
    """Smallest t in [t_lo, t_hi] with T(t) <= level.

    Raises:
        DomainError: If level is negative
        RangeError: If T stays above level on the whole search range
    """
    if level < 0:
        raise DomainError(f"level must be nonnegative, got {level}")
    if T(t_lo) <= level:
        return t_lo
    high = T(t_hi)
    if high > level:
        raise RangeError(
            f"level {level} not attained on [{t_lo}, {t_hi}]: T(t_lo)={T(t_lo)!r}, T(t_hi)={high!r}",
            lo=t_lo,
            hi=t_hi,
            values=(T(t_lo), high),
        )
    return bisect_threshold(lambda t: T(t) <= level, t_lo, t_hi, rtol=1e-12)
