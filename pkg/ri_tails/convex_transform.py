"""Numerical Young-Fenchel (Legendre) transform and the GLS tail bounds built on it."""

import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import DomainError, UsageError
from .numerics import grid_then_golden_min
from .spaces.functions import PsiForm, PsiFunction
from .tail_calculus import Provenance, TailFunction

logger = logging.getLogger(__name__)

LEGENDRE_GRID_POINTS = 512
CONVEXITY_GRID_POINTS = 1000
BLOWUP_DECADES = 12.0
FAR_RIGHT = 1e200


@dataclass(frozen=True)
class ScalarFunction:
    """A vectorized real function on the interval [lo, hi], +inf outside it.

    ``hi`` may be +inf. ``func`` may return +inf at a finite right edge,
    which marks the domain as open there.
    """

    func: Callable
    lo: float
    hi: float
    convexity_checked: bool = False

    def __post_init__(self):
        if not math.isfinite(self.lo):
            raise DomainError(f"domain must have a finite left end, got {self.lo}")
        if self.hi < self.lo:
            raise DomainError(f"empty domain [{self.lo}, {self.hi}]")

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            values = np.asarray(self.func(y), dtype=float)
        values = np.where((y < self.lo) | (y > self.hi), np.inf, values)
        return values if values.ndim else float(values)

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi

    def sample_grid(self, points: int) -> np.ndarray:
        """Points of the domain used by the convexity probe."""
        if math.isfinite(self.hi):
            return np.linspace(self.lo, self.hi, points)
        return self.lo + np.concatenate(([0.0], np.geomspace(1e-6, 1e6, points - 1)))

    def check_convexity(self, tol: float = 1e-9) -> "ScalarFunction":
        """Probe convexity through nondecreasing divided differences.

        Returns:
            Copy of the function with ``convexity_checked`` set

        Raises:
            DomainError: If a slope drops by more than ``tol`` (relative)
        """
        if self.degenerate:
            return dataclasses.replace(self, convexity_checked=True)
        grid = self.sample_grid(CONVEXITY_GRID_POINTS)
        values = np.asarray(self(grid), dtype=float)
        finite = np.isfinite(values)
        grid, values = grid[finite], values[finite]
        slopes = np.diff(values) / np.diff(grid)
        drops = slopes[:-1] - slopes[1:]
        allowed = tol * np.maximum(1.0, np.abs(slopes[:-1]))
        if np.any(drops > allowed):
            i = int(np.argmax(drops - allowed))
            raise DomainError(f"function is not convex near y = {grid[i + 1]:.6g}")
        return dataclasses.replace(self, convexity_checked=True)


@dataclass(frozen=True)
class LegendreResult:
    """Outcome of one supremum evaluation.

    ``divergent`` is set when the supremand was still increasing at the
    far end of an unbounded domain; ``value`` is then +inf.
    """

    value: float
    argmax: float
    divergent: bool = False
    on_boundary: bool = False


def _legendre_grid(h: ScalarFunction) -> np.ndarray:
    lo, hi = h.lo, h.hi
    if math.isinf(hi):
        if lo > 0:
            return np.geomspace(lo, FAR_RIGHT, LEGENDRE_GRID_POINTS)
        # 0 (or a negative left end) then a log-spaced sweep
        head = np.linspace(lo, 1e-12, 8) if lo < 0 else np.array([lo])
        return np.union1d(head, np.geomspace(1e-12, FAR_RIGHT, LEGENDRE_GRID_POINTS))
    if math.isfinite(float(h(hi))):
        return np.linspace(lo, hi, LEGENDRE_GRID_POINTS)
    # open right end: cluster toward hi where h blows up
    u = np.linspace(0.0, BLOWUP_DECADES, LEGENDRE_GRID_POINTS)
    clustered = hi - (hi - lo) * np.power(10.0, -u)
    uniform = np.linspace(lo, hi, LEGENDRE_GRID_POINTS)[:-1]
    return np.union1d(clustered, uniform)


def _legendre_on_table(h: ScalarFunction, x: float, grid: np.ndarray, h_grid: np.ndarray) -> LegendreResult:
    def negated(y: float) -> float:
        value = x * y - h(y)
        return math.inf if math.isnan(value) else -value

    with np.errstate(over="ignore", invalid="ignore"):
        supremand = x * grid - h_grid
    supremand = np.where(np.isnan(supremand), -np.inf, supremand)
    if not np.any(np.isfinite(supremand)):
        raise DomainError("function is nowhere finite on its domain")

    i = int(np.argmax(supremand))
    if math.isinf(h.hi) and i == len(grid) - 1 and supremand[i] > supremand[i - 1]:
        logger.warning("Legendre supremum diverges at x = %.6g; reporting +inf", x)
        return LegendreResult(value=math.inf, argmax=math.inf, divergent=True, on_boundary=True)

    y_best, neg_best = grid_then_golden_min(negated, grid, -supremand, rtol=1e-10)
    on_boundary = y_best in (grid[0], grid[-1])
    return LegendreResult(value=float(-neg_best), argmax=float(y_best), on_boundary=on_boundary)


def legendre_detailed(h: ScalarFunction, x: float) -> LegendreResult:
    """sup over y in the domain of h of x*y - h(y), with diagnostics.

    A coarse grid locates the best point, golden section polishes the
    bracket around it. Global optimality holds up to grid resolution.
    """
    if h.degenerate:
        return LegendreResult(value=float(x * h.lo - h(h.lo)), argmax=h.lo, on_boundary=True)
    grid = _legendre_grid(h)
    return _legendre_on_table(h, x, grid, np.asarray(h(grid), dtype=float))


def legendre(h: ScalarFunction, x: float) -> float:
    """h*(x) = sup_y (x y - h(y)); +inf when the supremum diverges."""
    return legendre_detailed(h, x).value


def legendre_many(h: ScalarFunction, xs) -> np.ndarray:
    """h* at every point of ``xs``, tabulating h on the coarse grid only once."""
    xs = np.ravel(np.asarray(xs, dtype=float))
    if h.degenerate:
        return np.array([legendre(h, float(x)) for x in xs])
    grid = _legendre_grid(h)
    h_grid = np.asarray(h(grid), dtype=float)
    return np.array([_legendre_on_table(h, float(x), grid, h_grid).value for x in xs])


def psi_tilde(psi: PsiFunction) -> ScalarFunction:
    """p -> p log psi(p) on [max(1, A), B).

    Raises:
        DomainError: If the support does not meet [1, inf)
    """
    A, B = psi.support
    lo = max(1.0, A)
    if lo > B:
        raise DomainError(f"{psi.label} has no support in [1, inf)")

    def func(p):
        with np.errstate(divide="ignore", invalid="ignore"):
            return p * np.log(psi(p))

    return ScalarFunction(func=func, lo=lo, hi=B)


def _bound_tail(h: ScalarFunction, scale: float) -> Callable[[float], float]:
    def func(t: float) -> float:
        if t <= scale:
            return 1.0
        # stays in log space until the last step
        exponent = -legendre(h, math.log(t / scale))
        return math.exp(min(0.0, exponent))

    return func


def gls_upper_tail(psi: PsiFunction) -> TailFunction:
    """Upper bound min(1, exp(-psi_tilde*(log t))) for the GLS characteristic."""
    h = psi_tilde(psi)
    return TailFunction(
        func=_bound_tail(h, 1.0),
        total_mass=1.0,
        t0=2.0,
        provenance=Provenance.OPTIMIZATION_BOUND,
    )


def gls_lower_tail(psi: PsiFunction, C: float) -> TailFunction:
    """Parametric lower bound exp(-psi_tilde*(log(t / C))) for psi_(B, beta).

    Args:
        psi: Generating function of gridBlowup form
        C: User-supplied constant, C > 0

    Raises:
        UsageError: If psi is not of gridBlowup form
        DomainError: If C <= 0
    """
    if psi.form != PsiForm.GRID_BLOWUP:
        raise UsageError(f"the lower GLS bound is defined for psi_(B,beta) only, got {psi.label}")
    if not C > 0:
        raise DomainError(f"C must be positive, got {C}")
    return TailFunction(
        func=_bound_tail(psi_tilde(psi), C),
        total_mass=1.0,
        t0=2.0 * C,
        provenance=Provenance.DERIVED,
    )
