from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict

import numpy as np

from ..exceptions import DomainError
from ..random_variables import RandomVariable
from ..tail_calculus import Provenance, TailFunction


class MeasureKind(str, Enum):
    """Supported underlying measure spaces."""
    PROBABILISTIC = "prob"
    SIGMA_FINITE_INFINITE = "infinite"


@dataclass(frozen=True)
class MeasureModel:
    """The measure space (Omega, mu) a space is built over."""

    kind: MeasureKind = MeasureKind.PROBABILISTIC

    @classmethod
    def probabilistic(cls) -> "MeasureModel":
        return cls(MeasureKind.PROBABILISTIC)

    @classmethod
    def infinite(cls) -> "MeasureModel":
        return cls(MeasureKind.SIGMA_FINITE_INFINITE)

    @property
    def total_mass(self) -> float:
        return 1.0 if self.kind == MeasureKind.PROBABILISTIC else float("inf")

    @property
    def is_probabilistic(self) -> bool:
        return self.kind == MeasureKind.PROBABILISTIC

    @property
    def description(self) -> str:
        if self.is_probabilistic:
            return "(0,1) with Lebesgue measure"
        return "(0,inf) with Lebesgue measure"


class SpaceFamily(str, Enum):
    """Families in the space catalog."""
    LP = "lp"
    LORENTZ = "lorentz"
    ORLICZ = "orlicz"
    GLS = "gls"


@dataclass(frozen=True, eq=False)
class FundamentalFunction:
    """delta -> phi_F(delta), the norm of an indicator of a set of measure delta.

    ``delta_max`` bounds the range where phi is increasing; asymptotic forms
    are only monotone for small delta.
    """

    func: Callable[[float], float]
    measure: MeasureModel
    provenance: Provenance = Provenance.CLOSED_FORM
    label: str = ""
    delta_max: float = 1.0

    def __call__(self, delta: float) -> float:
        if not delta > 0:
            raise DomainError(f"delta must be positive, got {delta}")
        if self.measure.is_probabilistic and delta > 1.0:
            raise DomainError(f"delta must lie in (0, 1] for a probabilistic measure, got {delta}")
        return float(self.func(float(delta)))

    def clamped(self, delta: float) -> float:
        """phi with delta capped at delta_max when phi is only an asymptotic form."""
        if self.provenance == Provenance.ASYMPTOTIC:
            delta = min(float(delta), self.delta_max)
        return self(delta)

    def evaluate(self, deltas) -> np.ndarray:
        return np.array([self(float(d)) for d in np.atleast_1d(deltas)])


class SpaceDescriptor(ABC):
    """Base class for rearrangement-invariant spaces of the catalog."""

    measure: MeasureModel

    @property
    @abstractmethod
    def family(self) -> SpaceFamily:
        """Catalog family of this space."""
        pass

    @property
    @abstractmethod
    def label(self) -> str:
        """Short human-readable name, e.g. ``Lp(2)``."""
        pass

    @abstractmethod
    def parameters(self) -> Dict:
        """Parameters echoed into reports."""
        pass

    @abstractmethod
    def norm(self, rv: RandomVariable) -> float:
        """Norm (or quasinorm) of a random variable; +inf when it does not belong to the space."""
        pass

    @abstractmethod
    def characteristic(self) -> TailFunction:
        """Tchebychev characteristic t -> sup of tails over the unit ball."""
        pass

    @abstractmethod
    def fundamental(self) -> FundamentalFunction:
        """Fundamental function of the space."""
        pass

    def describe(self) -> Dict:
        return {
            "family": self.family.value,
            "label": self.label,
            "measure": self.measure.kind.value,
            "domain": self.measure.description,
            **self.parameters(),
        }

    def require_probabilistic(self) -> None:
        if not self.measure.is_probabilistic:
            raise DomainError(f"{type(self).__name__} is only defined over a probabilistic measure")


def norm(space: SpaceDescriptor, rv: RandomVariable) -> float:
    return space.norm(rv)


def characteristic(space: SpaceDescriptor) -> TailFunction:
    return space.characteristic()


def fundamental(space: SpaceDescriptor) -> FundamentalFunction:
    return space.fundamental()
