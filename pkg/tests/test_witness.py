import dataclasses
import math

import numpy as np
import pytest

from ri_tails.exceptions import DomainError, UsageError
from ri_tails.numerics import log_grid
from ri_tails.random_variables import DiscreteRV
from ri_tails.spaces import GlsSpace, LorentzSpace, LpSpace, OrliczSpace, PsiFunction, WeightFunction, YoungFunction
from ri_tails.tail_calculus import tail_of_rv
from ri_tails.witness import lorentz_witness, lp_witness, orlicz_witness, verify_saturation, witness_for


class TestLpWitness:
    @pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0, 10.0])
    @pytest.mark.parametrize("t", [2.0, 10.0, 100.0])
    def test_saturates(self, p, t):
        report = lp_witness(p, t)
        assert report.norm_value == pytest.approx(1.0, abs=1e-8)
        assert report.tail_at_t == pytest.approx(t ** -p, abs=1e-8)
        assert report.saturated

    def test_l2_at_ten(self):
        report = lp_witness(2.0, 10.0)
        assert report.tail_at_t == pytest.approx(0.01)
        assert report.characteristic_at_t == pytest.approx(0.01)

    def test_l1_at_two(self):
        report = lp_witness(1.0, 2.0)
        assert report.tail_at_t == pytest.approx(0.5)

    def test_cubic_at_ten(self):
        assert lp_witness(3.0, 10.0).tail_at_t == pytest.approx(0.001)

    @pytest.mark.parametrize("t", [1.0, 0.5])
    def test_needs_t_above_one(self, t):
        with pytest.raises(DomainError):
            lp_witness(2.0, t)

    def test_needs_finite_exponent(self):
        with pytest.raises(DomainError):
            lp_witness(math.inf, 10.0)


class TestOrliczWitness:
    def test_quadratic(self):
        report = orlicz_witness(YoungFunction.power(2.0), 10.0)
        assert report.tail_at_t == pytest.approx(0.01)
        assert report.saturated

    def test_cubic(self):
        assert orlicz_witness(YoungFunction.power(3.0), 10.0).tail_at_t == pytest.approx(0.001)

    @pytest.mark.parametrize("q", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("t", [2.0, 10.0, 100.0])
    def test_power_log_sweep(self, q, t):
        N = YoungFunction.power_log(2.0, q)
        report = orlicz_witness(N, t)
        assert report.norm_value == pytest.approx(1.0, abs=1e-8)
        assert report.tail_at_t == pytest.approx(1.0 / float(N(t)), abs=1e-8)
        assert report.saturated

    def test_power_log_at_ten(self):
        report = orlicz_witness(YoungFunction.power_log(2.0, 1.0), 10.0)
        assert report.tail_at_t == pytest.approx(1.0 / (100.0 * math.log(math.e + 10.0)))
        assert report.tail_at_t == pytest.approx(3.934e-3, rel=1e-3)

    def test_needs_level_above_one(self):
        with pytest.raises(DomainError):
            orlicz_witness(YoungFunction.power(2.0), 1.0)


class TestLorentzWitness:
    def test_square_weight(self):
        report = lorentz_witness(WeightFunction.power(2.0), 10.0)
        assert report.tail_at_t == pytest.approx(0.01)
        assert report.norm_value == pytest.approx(1.0)
        assert report.saturated

    def test_linear_weight(self):
        report = lorentz_witness(WeightFunction.power(1.0), 2.0)
        assert report.tail_at_t == pytest.approx(0.5)
        assert report.norm_value == pytest.approx(1.0)

    def test_needs_weight_above_one(self):
        with pytest.raises(DomainError):
            lorentz_witness(WeightFunction.power(1.0), 0.5)


class TestWitnessFor:
    def test_dispatch(self):
        assert witness_for(LpSpace(2.0), 10.0).rv == lp_witness(2.0, 10.0).rv
        assert witness_for(OrliczSpace(YoungFunction.power(3.0)), 10.0).tail_at_t == pytest.approx(0.001)
        assert witness_for(LorentzSpace(WeightFunction.power(2.0)), 10.0).saturated

    def test_gls_has_no_witness(self):
        with pytest.raises(UsageError):
            witness_for(GlsSpace(PsiFunction.grid_blowup(2.0, 0.5)), 10.0)

    @pytest.mark.parametrize(
        "space",
        [
            LpSpace(1.5),
            LpSpace(3.0),
            OrliczSpace(YoungFunction.power_log(2.0, 1.0)),
            LorentzSpace(WeightFunction.power(2.0)),
        ],
    )
    @pytest.mark.parametrize("t", [2.0, 10.0, 100.0])
    def test_tail_never_exceeds_characteristic(self, space, t):
        grid = np.union1d(log_grid(0.1, 1e4, 200), [t])
        tail = tail_of_rv(witness_for(space, t).rv).evaluate(grid)
        bound = space.characteristic().evaluate(grid)
        assert np.all(tail <= bound * (1.0 + 1e-9))


class TestVerifySaturation:
    def test_lp(self):
        assert verify_saturation(LpSpace(2.0), lp_witness(2.0, 10.0))

    def test_orlicz(self):
        N = YoungFunction.power(3.0)
        assert verify_saturation(OrliczSpace(N), orlicz_witness(N, 10.0))

    def test_perturbed_witness(self):
        report = dataclasses.replace(lp_witness(2.0, 10.0), rv=DiscreteRV.two_point(10.0, 0.02))
        assert LpSpace(2.0).norm(report.rv) == pytest.approx(math.sqrt(2.0))
        assert not verify_saturation(LpSpace(2.0), report)

    def test_family_mismatch(self):
        with pytest.raises(UsageError):
            verify_saturation(OrliczSpace(YoungFunction.power(2.0)), lp_witness(2.0, 10.0))
