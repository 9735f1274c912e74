"""Monte-Carlo validation of tail bounds and confidence intervals.

Samples are drawn in fixed-size chunks. Chunk i always uses the substream
SeedSequence(seed, spawn_key=(i,)), so a batch depends on (rv, n, seed)
only and never on the number of worker threads.
"""

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .diagnostics import DiagnosticsReport, PointRecord, Verdict
from .exceptions import UsageError, ValidationError
from .numerics import validate_grid
from .random_variables import AnalyticForm, AnalyticRV, DiscreteRV, RandomVariable
from .spaces.base import SpaceDescriptor
from .tail_calculus import left_inverse

logger = logging.getLogger(__name__)

CHUNK_SIZE = 2 ** 16
BAND_SIGMAS = 3.0
MIN_TAIL_LEVEL = 1e-4
GENERATOR_LABEL = "numpy PCG64 / SeedSequence(seed, spawn_key=(chunk,))"


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """Samples of |xi| with the seed and generator that reproduce them."""

    values: np.ndarray
    seed: int
    generator_label: str = GENERATOR_LABEL

    @property
    def n(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class CiRequest:
    """Norm bound sigma on w(n)|theta_n - theta|, the rate value w(n) and the level alpha."""

    sigma: float
    wn: float
    alpha: float
    space: SpaceDescriptor

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValidationError(f"sigma must be positive, got {self.sigma}")
        if not self.wn > 0:
            raise ValidationError(f"wn must be positive, got {self.wn}")
        if not 0 < self.alpha < 1:
            raise ValidationError(f"alpha must lie in (0, 1), got {self.alpha}")


def _substream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def _draw(rv: RandomVariable, uniforms: np.ndarray) -> np.ndarray:
    """Inverse-transform sampling."""
    if isinstance(rv, DiscreteRV):
        cumulative = np.cumsum(rv.probabilities)
        index = np.searchsorted(cumulative, uniforms, side="right")
        return rv.values[np.minimum(index, len(cumulative) - 1)]
    if isinstance(rv, AnalyticRV) and rv.form == AnalyticForm.POWER_SINGULARITY:
        # 1 - u lies in (0, 1], away from the singularity at 0
        return rv.scale * np.power(1.0 - uniforms, -rv.alpha)
    raise UsageError(f"cannot sample {type(rv).__name__}")


def sample(rv: RandomVariable, n: int, seed: int, workers: Optional[int] = None) -> SampleBatch:
    """Draw n samples of |xi| deterministically from seed.

    Raises:
        UsageError: If n < 1 or the seed does not fit in 64 unsigned bits
    """
    if n < 1:
        raise UsageError(f"sample size must be at least 1, got {n}")
    if not 0 <= seed < 2 ** 64:
        raise UsageError(f"seed must be a 64-bit unsigned integer, got {seed}")
    sizes = [CHUNK_SIZE] * (n // CHUNK_SIZE)
    if n % CHUNK_SIZE:
        sizes.append(n % CHUNK_SIZE)

    def chunk(index: int) -> np.ndarray:
        return _draw(rv, _substream(seed, index).random(sizes[index]))

    if workers and workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(chunk, range(len(sizes))))
    else:
        parts = [chunk(i) for i in range(len(sizes))]
    logger.debug("sampled %d values in %d chunks (seed=%d)", n, len(sizes), seed)
    return SampleBatch(values=np.concatenate(parts), seed=seed)


def empirical_tail(batch: SampleBatch, t: float) -> Tuple[float, float]:
    """Fraction of samples >= t and its three-sigma binomial half width."""
    if batch.n == 0:
        raise UsageError("empty sample batch")
    estimate = float(np.count_nonzero(batch.values >= t)) / batch.n
    half_width = BAND_SIGMAS * math.sqrt(estimate * (1.0 - estimate) / batch.n)
    return estimate, half_width


def verify_tail_bound(
    space: SpaceDescriptor,
    rv: RandomVariable,
    t_grid: Sequence[float],
    n: int,
    seed: int,
    workers: Optional[int] = None,
    min_level: float = MIN_TAIL_LEVEL,
) -> DiagnosticsReport:
    """Check empirical tails against T(t/c), c = ||xi||.

    Grid points where the bound falls below ``min_level`` are skipped: the
    three-sigma band is not reliable there.

    Raises:
        UsageError: If xi has infinite norm in the space
    """
    c = space.norm(rv)
    if not math.isfinite(c):
        raise UsageError(f"random variable has infinite norm in {space.label}")
    grid = validate_grid(t_grid)
    T = space.characteristic()
    batch = sample(rv, n, seed, workers=workers)

    records = []
    skipped = 0
    failures = []
    for t in grid:
        bound = T(t / c) if c > 0 else 0.0
        if 0 < bound < min_level:
            skipped += 1
            continue
        estimate, half_width = empirical_tail(batch, float(t))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = float(np.float64(estimate) / np.float64(bound))
        records.append(PointRecord(x=float(t), lhs=estimate, rhs=bound, ratio=ratio, band=half_width))
        if estimate > bound + half_width:
            failures.append(float(t))

    notes = [f"generator: {batch.generator_label}"]
    if skipped:
        notes.append(f"{skipped} grid points skipped with bound below {min_level:g}")
    if failures:
        notes.append(f"empirical tail above bound at t = {', '.join(f'{t:.6g}' for t in failures)}")
    return DiagnosticsReport(
        subject=f"tail bound {space.label}",
        grid_kind="t",
        records=records,
        verdict=Verdict.VIOLATED if failures else Verdict.BOUNDED_RATIO,
        constants={"norm": c, "n": float(n), "seed": float(seed)},
        notes=notes,
    )


def confidence_interval(req: CiRequest) -> float:
    """Radius of theta_n +- radius with coverage >= 1 - alpha.

    Raises:
        RangeError: If the characteristic never drops to alpha in the search range
    """
    u = req.sigma * left_inverse(req.space.characteristic(), req.alpha)
    return u / req.wn


def simulate_coverage(req: CiRequest, n: int, seed: int, workers: Optional[int] = None) -> DiagnosticsReport:
    """Exceedance frequency of u = sigma T^-1(alpha) for the extremal element of norm sigma.

    The witness of the space at T^-1(alpha), scaled by sigma, exceeds u with
    probability exactly alpha, so it is the worst case for the interval.
    """
    from .witness import witness_for

    level = left_inverse(req.space.characteristic(), req.alpha)
    u = req.sigma * level
    rv = witness_for(req.space, level).rv.scaled(req.sigma)
    batch = sample(rv, n, seed, workers=workers)
    frequency, half_width = empirical_tail(batch, u)
    covered = frequency <= req.alpha + half_width
    return DiagnosticsReport(
        subject=f"coverage {req.space.label}",
        grid_kind="u",
        records=[PointRecord(x=u, lhs=frequency, rhs=req.alpha, ratio=frequency / req.alpha, band=half_width)],
        verdict=Verdict.BOUNDED_RATIO if covered else Verdict.VIOLATED,
        constants={"radius": u / req.wn, "coverage": 1.0 - frequency},
        notes=[f"generator: {batch.generator_label}"],
    )


def write_batch_csv(batch: SampleBatch, path: Union[str, os.PathLike]) -> None:
    """Write the batch as a single-column CSV with a ``value`` header."""
    np.savetxt(path, batch.values, fmt="%.17g", header="value", comments="")
