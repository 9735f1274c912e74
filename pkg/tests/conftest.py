import numpy as np
import pytest

from ri_tails.random_variables import AnalyticRV, DiscreteRV
from ri_tails.tail_calculus import TailFunction


def capped_power_tail(p: float) -> TailFunction:
    """min(1, t^-p) as a vectorized tail."""
    return TailFunction(func=lambda t: np.minimum(1.0, np.power(t, -p)), vectorized=True)


@pytest.fixture
def power_tail():
    return capped_power_tail


@pytest.fixture
def inverse_tail():
    return capped_power_tail(1.0)


@pytest.fixture
def inverse_square_tail():
    return capped_power_tail(2.0)


@pytest.fixture
def xi2():
    """xi(omega) = omega^(-1/2) on (0, 1)."""
    return AnalyticRV(alpha=0.5)


@pytest.fixture
def lp2_witness_rv():
    """P(xi = 10) = 0.01, P(xi = 0) = 0.99."""
    return DiscreteRV.two_point(10.0, 0.01)


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for name in ("RI_TAILS_SEED", "RI_TAILS_LOG_LEVEL", "RI_TAILS_WORKERS"):
        monkeypatch.delenv(name, raising=False)
