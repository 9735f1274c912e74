"""Scalar generators of the catalog spaces: Young, psi and weight functions."""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Tuple

import numpy as np

from ..exceptions import DomainError, RangeError, ValidationError
from ..numerics import bisect_threshold, grid_then_golden_min

logger = logging.getLogger(__name__)

_MONOTONE_GRID = np.geomspace(1e-8, 1e8, 400)
CONJUGATE_INVERSE_POINTS = 1024


class YoungForm(str, Enum):
    POWER = "power"
    POWER_LOG = "powerLog"
    MAXIMUM = "max"
    CONJUGATE = "conjugate"


@dataclass(frozen=True)
class YoungFunction:
    """N(u) = c |u|^p log^q(e + |u|), or a pointwise max / Legendre conjugate of such functions."""

    form: YoungForm = YoungForm.POWER
    p: float = 2.0
    q: float = 0.0
    c: float = 1.0
    components: Tuple["YoungFunction", ...] = field(default=())

    def __post_init__(self):
        if self.form in (YoungForm.POWER, YoungForm.POWER_LOG):
            if not self.p >= 1:
                raise DomainError(f"Young exponent p must be >= 1, got {self.p}")
            if not self.c > 0:
                raise DomainError(f"Young coefficient c must be positive, got {self.c}")
            if self.form == YoungForm.POWER and self.q != 0:
                raise DomainError("the power form carries no logarithmic exponent q")
            if self.q < 0 and self.p <= 1:
                raise DomainError(f"q < 0 needs p > 1 for monotonicity near 0, got p={self.p}, q={self.q}")
            values = self(_MONOTONE_GRID)
            if not np.all(np.diff(values) > 0):
                raise DomainError(f"Young function {self.label} is not strictly increasing")
        elif self.form == YoungForm.MAXIMUM:
            if len(self.components) < 2:
                raise ValidationError("a maximum of Young functions needs at least two components")
        elif self.form == YoungForm.CONJUGATE:
            if len(self.components) != 1:
                raise ValidationError("a conjugate Young function wraps exactly one source")

    @classmethod
    def power(cls, p: float, c: float = 1.0) -> "YoungFunction":
        return cls(form=YoungForm.POWER, p=p, c=c)

    @classmethod
    def power_log(cls, p: float, q: float, c: float = 1.0) -> "YoungFunction":
        return cls(form=YoungForm.POWER_LOG, p=p, q=q, c=c)

    @property
    def source(self) -> "YoungFunction":
        return self.components[0]

    @property
    def label(self) -> str:
        if self.form == YoungForm.POWER:
            return f"{self.c:g}*u^{self.p:g}"
        if self.form == YoungForm.POWER_LOG:
            return f"{self.c:g}*u^{self.p:g}*log^{self.q:g}(e+u)"
        if self.form == YoungForm.MAXIMUM:
            return "max(" + ", ".join(n.label for n in self.components) + ")"
        return f"({self.source.label})*"

    @property
    def growth_exponent(self) -> float:
        """Power growth rate of N at infinity, ignoring logarithmic factors."""
        if self.form in (YoungForm.POWER, YoungForm.POWER_LOG):
            return self.p
        if self.form == YoungForm.MAXIMUM:
            return max(n.growth_exponent for n in self.components)
        p = self.source.growth_exponent
        return math.inf if p <= 1 else p / (p - 1.0)

    @property
    def log_exponent(self) -> float:
        """Exponent q of the logarithmic factor in N(u) ~ u^p log^q(u) at infinity."""
        if self.form == YoungForm.POWER:
            return 0.0
        if self.form == YoungForm.POWER_LOG:
            return self.q
        if self.form == YoungForm.MAXIMUM:
            top = self.growth_exponent
            return max(n.log_exponent for n in self.components if n.growth_exponent == top)
        p = self.source.growth_exponent
        return 0.0 if p <= 1 else -self.source.log_exponent / (p - 1.0)

    def __call__(self, u):
        u = np.abs(np.asarray(u, dtype=float))
        with np.errstate(over="ignore", invalid="ignore"):
            if self.form == YoungForm.POWER:
                return self.c * np.power(u, self.p)
            if self.form == YoungForm.POWER_LOG:
                return self.c * np.power(u, self.p) * np.power(np.log(math.e + u), self.q)
            if self.form == YoungForm.MAXIMUM:
                return np.max(np.stack([np.broadcast_to(n(u), u.shape) for n in self.components]), axis=0)
        return _conjugate_values(self.source, u)

    def inverse(self, y: float, lo: float = 1e-12, hi: float = 1e12) -> float:
        """Smallest u with N(u) >= y, by bisection to relative 1e-12.

        For a conjugate N* the inverse is inf over u > 0 of (y + N(u)) / u,
        a single minimization over the source instead of one Legendre
        transform per bisection step.
        """
        if y <= 0:
            return 0.0
        if self.form == YoungForm.CONJUGATE:
            return _conjugate_inverse(self.source, y, lo, hi)
        if float(self(hi)) < y:
            raise RangeError(f"N^-1({y}) exceeds the search range [{lo}, {hi}]", lo=lo, hi=hi,
                             values=(float(self(lo)), float(self(hi))))
        return bisect_threshold(lambda u: float(self(u)) >= y, lo, hi, rtol=1e-12)


def _conjugate_values(source: YoungFunction, v: np.ndarray):
    from ..convex_transform import legendre_many

    flat = legendre_many(_young_as_scalar(source), v)
    result = flat.reshape(np.shape(v))
    return result if result.ndim else float(result)


def _conjugate_inverse(source: YoungFunction, y: float, lo: float, hi: float) -> float:
    # N*(v) >= y exactly when v u - N(u) >= y for some u
    log_u = np.linspace(math.log(lo), math.log(hi), CONJUGATE_INVERSE_POINTS)

    def objective(s: float) -> float:
        u = math.exp(s)
        return float((y + source(u)) / u)

    us = np.exp(log_u)
    with np.errstate(over="ignore"):
        values = (y + source(us)) / us
    _, best = grid_then_golden_min(objective, log_u, values, rtol=1e-13)
    if not math.isfinite(best):
        raise RangeError(f"N*^-1({y}) is not attained on [{lo}, {hi}]", lo=lo, hi=hi, values=(values[0], values[-1]))
    return best


def _young_as_scalar(N: YoungFunction):
    """Wrap N as a scalar function on [0, inf) for the Legendre transform."""
    from ..convex_transform import ScalarFunction

    return ScalarFunction(func=N, lo=0.0, hi=math.inf)


def young_max(N1: YoungFunction, N2: YoungFunction) -> YoungFunction:
    """Pointwise maximum max(N1(u), N2(u)), evaluated lazily."""
    return YoungFunction(form=YoungForm.MAXIMUM, p=max(N1.growth_exponent, N2.growth_exponent), components=(N1, N2))


def conjugate_young(N: YoungFunction) -> YoungFunction:
    """Numerical Legendre conjugate N*(v) = sup_u (u v - N(u)).

    Raises:
        DomainError: If N fails the convexity probe
    """
    _young_as_scalar(N).check_convexity()
    return YoungFunction(form=YoungForm.CONJUGATE, p=N.growth_exponent, components=(N,))


class PsiForm(str, Enum):
    GRID_BLOWUP = "gridBlowup"
    POWER_ROOT = "powerRoot"
    NATURAL = "natural"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class PsiFunction:
    """Generating function of a Grand Lebesgue Space, +inf outside its support."""

    form: PsiForm
    B: float = math.inf
    beta: float = 0.0
    m: float = 1.0
    r: float = 1.0
    nodes: Tuple[float, ...] = ()
    values: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.form == PsiForm.GRID_BLOWUP:
            if not 1 < self.B < math.inf:
                raise DomainError(f"psi_(B,beta) needs 1 < B < inf, got B={self.B}")
            if not self.beta > 0:
                raise DomainError(f"psi_(B,beta) needs beta > 0, got beta={self.beta}")
        elif self.form == PsiForm.POWER_ROOT:
            if not self.m > 0:
                raise DomainError(f"psi_m needs m > 0, got m={self.m}")
        elif self.form == PsiForm.DEGENERATE:
            if not 1 <= self.r < math.inf:
                raise DomainError(f"psi_r needs 1 <= r < inf, got r={self.r}")
        elif self.form == PsiForm.NATURAL:
            nodes = np.asarray(self.nodes, dtype=float)
            values = np.asarray(self.values, dtype=float)
            if nodes.size < 2 or nodes.shape != values.shape:
                raise ValidationError("a tabulated psi needs at least two (p, psi(p)) pairs")
            if nodes[0] < 1 or np.any(np.diff(nodes) <= 0):
                raise ValidationError("tabulated psi nodes must be strictly increasing and >= 1")
            if not np.all(np.isfinite(values)) or np.any(values <= 0):
                raise ValidationError("tabulated psi values must be finite and positive")

    @classmethod
    def grid_blowup(cls, B: float, beta: float) -> "PsiFunction":
        return cls(form=PsiForm.GRID_BLOWUP, B=B, beta=beta)

    @classmethod
    def power_root(cls, m: float) -> "PsiFunction":
        return cls(form=PsiForm.POWER_ROOT, m=m)

    @classmethod
    def degenerate(cls, r: float) -> "PsiFunction":
        return cls(form=PsiForm.DEGENERATE, B=r, r=r)

    @classmethod
    def tabulated(cls, nodes, values) -> "PsiFunction":
        nodes = tuple(float(p) for p in nodes)
        return cls(form=PsiForm.NATURAL, B=nodes[-1], nodes=nodes, values=tuple(float(v) for v in values))

    @property
    def support(self) -> Tuple[float, float]:
        if self.form == PsiForm.GRID_BLOWUP:
            return 1.0, self.B
        if self.form == PsiForm.POWER_ROOT:
            return 1.0, math.inf
        if self.form == PsiForm.DEGENERATE:
            return self.r, self.r
        return self.nodes[0], self.nodes[-1]

    @property
    def label(self) -> str:
        if self.form == PsiForm.GRID_BLOWUP:
            return f"psi_(B={self.B:g},beta={self.beta:g})"
        if self.form == PsiForm.POWER_ROOT:
            return f"psi_(m={self.m:g})"
        if self.form == PsiForm.DEGENERATE:
            return f"psi_(r={self.r:g})"
        return f"psi_natural[{self.nodes[0]:g},{self.nodes[-1]:g}]"

    def __call__(self, p):
        p = np.asarray(p, dtype=float)
        out = np.full(p.shape, np.inf)
        with np.errstate(divide="ignore", invalid="ignore"):
            if self.form == PsiForm.GRID_BLOWUP:
                inside = (p >= 1.0) & (p < self.B)
                out[inside] = np.power(self.B - p[inside], -self.beta)
            elif self.form == PsiForm.POWER_ROOT:
                inside = p >= 1.0
                out[inside] = np.power(p[inside], 1.0 / self.m)
            elif self.form == PsiForm.DEGENERATE:
                out[p == self.r] = 1.0
            else:
                nodes = np.asarray(self.nodes)
                inside = (p >= nodes[0]) & (p <= nodes[-1])
                out[inside] = np.exp(np.interp(p[inside], nodes, np.log(self.values)))
        return out if out.ndim else float(out)

    def p_grid(self, points: int = 400, decades: float = 8.0) -> np.ndarray:
        """Moment orders at which the GLS norm supremum is sampled.

        Finite supports use p = B - (B - A) 10^-u, u in [0, decades], which
        clusters points toward B where psi blows up.
        """
        A, B = self.support
        if self.form == PsiForm.DEGENERATE:
            return np.array([self.r])
        if self.form == PsiForm.POWER_ROOT:
            return np.geomspace(A, 1e3, points)
        u = np.linspace(0.0, decades, points)
        grid = B - (B - A) * np.power(10.0, -u)
        if self.form == PsiForm.NATURAL:
            grid = np.append(grid, B)
        return grid


class WeightForm(str, Enum):
    POWER = "power"
    TABULATED = "tabulated"


@dataclass(frozen=True)
class WeightFunction:
    """Positive, continuous, strictly increasing weight w with w(t) -> inf."""

    form: WeightForm = WeightForm.POWER
    p: float = 1.0
    nodes: Tuple[float, ...] = ()
    values: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.form == WeightForm.POWER:
            if not self.p > 0:
                raise DomainError(f"power weight needs p > 0, got {self.p}")
            return
        nodes = np.asarray(self.nodes, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if nodes.size < 2 or nodes.shape != values.shape:
            raise ValidationError("a tabulated weight needs at least two (t, w(t)) pairs")
        if np.any(nodes <= 0) or np.any(np.diff(nodes) <= 0):
            raise ValidationError("tabulated weight nodes must be positive and strictly increasing")
        if np.any(values <= 0) or np.any(np.diff(values) <= 0):
            raise DomainError("tabulated weight values must be positive and strictly increasing")

    @classmethod
    def power(cls, p: float) -> "WeightFunction":
        return cls(form=WeightForm.POWER, p=p)

    @property
    def label(self) -> str:
        if self.form == WeightForm.POWER:
            return f"t^{self.p:g}"
        return f"w_tabulated[{self.nodes[0]:g},{self.nodes[-1]:g}]"

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", over="ignore"):
            if self.form == WeightForm.POWER:
                return np.power(t, self.p)
            # log-log interpolation, extended by the end slopes so that w -> inf
            log_t = np.log(self.nodes)
            log_w = np.log(self.values)
            x = np.log(t)
            inner = np.interp(x, log_t, log_w)
            lo_slope = (log_w[1] - log_w[0]) / (log_t[1] - log_t[0])
            hi_slope = (log_w[-1] - log_w[-2]) / (log_t[-1] - log_t[-2])
            out = np.where(x < log_t[0], log_w[0] + lo_slope * (x - log_t[0]), inner)
            out = np.where(x > log_t[-1], log_w[-1] + hi_slope * (x - log_t[-1]), out)
            return np.exp(out)
