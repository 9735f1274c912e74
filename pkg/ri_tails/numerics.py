"""Shared scalar search routines: grids, monotone bisection and golden-section refinement."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from .exceptions import DomainError, UsageError

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

T = TypeVar("T")


def log_grid(lo: float, hi: float, points: int) -> np.ndarray:
    """Strictly increasing log-spaced grid on [lo, hi]."""
    if lo <= 0 or hi <= lo or points < 2:
        raise UsageError(f"log grid needs 0 < lo < hi and points >= 2, got ({lo}, {hi}, {points})")
    return np.geomspace(lo, hi, points)


def lin_grid(lo: float, hi: float, points: int) -> np.ndarray:
    """Strictly increasing linearly spaced grid on [lo, hi]."""
    if hi <= lo or points < 2:
        raise UsageError(f"linear grid needs lo < hi and points >= 2, got ({lo}, {hi}, {points})")
    return np.linspace(lo, hi, points)


def validate_grid(grid: Sequence[float]) -> np.ndarray:
    """Return the grid as an array, checking it is finite, positive and strictly increasing."""
    arr = np.asarray(grid, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise UsageError("grid must be a non-empty one-dimensional sequence")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise UsageError("grid points must be finite and strictly positive")
    if np.any(np.diff(arr) <= 0):
        raise UsageError("grid must be strictly increasing")
    return arr


def bisect_threshold(
    predicate: Callable[[float], bool],
    lo: float,
    hi: float,
    rtol: float = 1e-12,
    max_iter: int = 400,
) -> float:
    """Smallest x in [lo, hi] where a monotone predicate flips from False to True.

    The predicate must be False below the threshold and True above it, and
    ``predicate(hi)`` must hold. Midpoints are geometric so that brackets
    spanning many decades converge at a uniform relative rate.

    Returns:
        The upper end of the final bracket, so ``predicate(result)`` holds.
    """
    if lo <= 0 or hi < lo:
        raise DomainError(f"geometric bisection needs 0 < lo <= hi, got [{lo}, {hi}]")
    if predicate(lo):
        return lo
    iterations = 0
    while hi > lo * (1.0 + rtol) and iterations < max_iter:
        mid = math.sqrt(lo) * math.sqrt(hi)
        if mid <= lo or mid >= hi:
            break
        if predicate(mid):
            hi = mid
        else:
            lo = mid
        iterations += 1
    logger.debug("bisect_threshold converged to %.17g after %d iterations", hi, iterations)
    return hi


def golden_section_min(
    f: Callable[[float], float],
    a: float,
    b: float,
    rtol: float = 1e-10,
    max_iter: int = 200,
) -> Tuple[float, float]:
    """Golden-section search for a minimum of ``f`` on [a, b].

    Returns:
        Tuple of (argmin, minimum) over every point evaluated, endpoints included.
    """
    if b < a:
        a, b = b, a
    scale = max(abs(a), abs(b), 1e-300)
    fa, fb = f(a), f(b)
    best_x, best_f = (a, fa) if fa <= fb else (b, fb)
    if b - a <= rtol * scale:
        return best_x, best_f

    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    iterations = 0
    while b - a > rtol * scale and iterations < max_iter:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
        iterations += 1
    for x, fx in ((x1, f1), (x2, f2)):
        if fx < best_f:
            best_x, best_f = x, fx
    return best_x, best_f


def grid_then_golden_min(
    f: Callable[[float], float],
    grid: np.ndarray,
    values: np.ndarray,
    rtol: float = 1e-10,
) -> Tuple[float, float]:
    """Refine the best point of a coarse grid by golden section on its neighbouring bracket.

    Args:
        f: Scalar objective to minimize
        grid: Increasing abscissae of the coarse stage
        values: Objective values on ``grid`` (NaN is treated as +inf)
        rtol: Relative tolerance of the refinement

    Returns:
        Tuple of (argmin, minimum); never worse than the best grid point.
    """
    clean = np.where(np.isnan(values), np.inf, values)
    i = int(np.argmin(clean))
    best_x, best_f = float(grid[i]), float(clean[i])
    lo = float(grid[max(i - 1, 0)])
    hi = float(grid[min(i + 1, len(grid) - 1)])
    if hi > lo and math.isfinite(best_f):
        x, fx = golden_section_min(f, lo, hi, rtol=rtol)
        if fx < best_f:
            best_x, best_f = x, fx
    return best_x, best_f


def ordered_map(fn: Callable[[float], T], grid: Sequence[float], workers: Optional[int] = None) -> List[T]:
    """Apply ``fn`` to every grid point, returning results in grid order.

    Work is spread over a thread pool when ``workers`` > 1; the result order
    never depends on the execution order.
    """
    if not workers or workers <= 1:
        return [fn(float(x)) for x in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda x: fn(float(x)), grid))


@dataclass(frozen=True)
class TrendCheck:
    """Result of a growth probe over the top decade of a grid."""

    monotone: bool
    factor: float

    def grows_beyond(self, threshold: float) -> bool:
        return self.monotone and self.factor > threshold


def top_decade_trend(grid: np.ndarray, values: np.ndarray, increasing: bool = True, rtol: float = 1e-9) -> TrendCheck:
    """Measure whether ``values`` keep moving in one direction across the top decade of ``grid``.

    When the grid spans less than a decade, its upper quarter is used instead.
    """
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    mask = grid >= grid[-1] / 10.0
    if grid[-1] / grid[0] < 10.0 or mask.sum() < 2:
        mask = np.zeros_like(grid, dtype=bool)
        mask[-max(2, len(grid) // 4):] = True
    top = values[mask]
    if not increasing:
        with np.errstate(divide="ignore"):
            top = 1.0 / top
    if not np.all(np.isfinite(top)) or top[0] <= 0:
        return TrendCheck(monotone=False, factor=1.0)
    steps_ok = np.all(top[1:] >= top[:-1] * (1.0 - rtol))
    return TrendCheck(monotone=bool(steps_ok), factor=float(top[-1] / top[0]))
