import math

import numpy as np
import pytest

from ri_tails.exceptions import DomainError, RangeError, ValidationError
from ri_tails.spaces.functions import (
    PsiForm,
    PsiFunction,
    WeightForm,
    WeightFunction,
    YoungForm,
    YoungFunction,
    conjugate_young,
    young_max,
)


class TestYoungFunction:
    def test_power(self):
        N = YoungFunction.power(3.0)
        assert N(10.0) == pytest.approx(1000.0)
        assert N(-2.0) == pytest.approx(8.0)
        assert N(0.0) == 0.0

    def test_power_log(self):
        N = YoungFunction.power_log(2.0, 1.0)
        assert N(10.0) == pytest.approx(100.0 * math.log(math.e + 10.0))

    def test_coefficient(self):
        assert YoungFunction.power(2.0, c=0.5)(4.0) == pytest.approx(8.0)

    def test_inverse(self):
        assert YoungFunction.power(2.0).inverse(4.0) == pytest.approx(2.0, rel=1e-11)
        assert YoungFunction.power(3.0).inverse(0.0) == 0.0

    def test_inverse_out_of_range(self):
        with pytest.raises(RangeError):
            YoungFunction.power(1.0).inverse(1e13)

    @pytest.mark.parametrize("p, q, c", [(0.5, 0.0, 1.0), (2.0, 0.0, 0.0), (1.0, -1.0, 1.0)])
    def test_invalid(self, p, q, c):
        with pytest.raises(DomainError):
            YoungFunction.power_log(p, q, c=c)

    def test_power_form_has_no_log_exponent(self):
        with pytest.raises(DomainError):
            YoungFunction(form=YoungForm.POWER, p=2.0, q=1.0)

    def test_growth_exponent(self):
        assert YoungFunction.power_log(2.0, 3.0).growth_exponent == 2.0
        assert conjugate_young(YoungFunction.power(3.0)).growth_exponent == pytest.approx(1.5)
        assert math.isinf(conjugate_young(YoungFunction.power(1.0)).growth_exponent)

    def test_log_exponent(self):
        assert YoungFunction.power(2.0).log_exponent == 0.0
        assert YoungFunction.power_log(2.0, -2.0).log_exponent == -2.0
        assert young_max(YoungFunction.power_log(2.0, 1.0), YoungFunction.power(2.0)).log_exponent == 1.0
        assert young_max(YoungFunction.power_log(2.0, 5.0), YoungFunction.power(3.0)).log_exponent == 0.0
        assert conjugate_young(YoungFunction.power_log(2.0, 1.0)).log_exponent == pytest.approx(-1.0)


class TestYoungMax:
    def test_crossover(self):
        N = young_max(YoungFunction.power(2.0), YoungFunction.power(3.0))
        assert N(0.5) == pytest.approx(0.25)
        assert N(2.0) == pytest.approx(8.0)
        assert N.form == YoungForm.MAXIMUM

    def test_idempotent(self):
        N1 = YoungFunction.power_log(2.0, 1.0)
        grid = np.geomspace(1e-3, 1e3, 50)
        np.testing.assert_allclose(young_max(N1, N1)(grid), N1(grid))

    def test_power_log_against_cube(self):
        N = young_max(YoungFunction.power_log(2.0, 1.0), YoungFunction.power(3.0))
        assert N(10.0) == pytest.approx(1000.0)

    def test_needs_two_components(self):
        with pytest.raises(ValidationError):
            YoungFunction(form=YoungForm.MAXIMUM, components=(YoungFunction.power(2.0),))


class TestConjugateYoung:
    def test_self_dual_quadratic(self):
        N_star = conjugate_young(YoungFunction.power(2.0, c=0.5))
        v = np.array([0.1, 0.5, 1.0, 2.0, 7.0])
        np.testing.assert_allclose(N_star(v), v ** 2 / 2.0, rtol=1e-8)

    def test_cubic_pair(self):
        N_star = conjugate_young(YoungFunction.power(3.0, c=1.0 / 3.0))
        for v in (0.5, 2.0, 5.0):
            assert N_star(v) == pytest.approx(v ** 1.5 / 1.5, rel=1e-8)

    def test_linear(self):
        N_star = conjugate_young(YoungFunction.power(1.0))
        assert N_star(0.5) == pytest.approx(0.0, abs=1e-12)
        assert math.isinf(N_star(2.0))

    def test_fenchel_young_inequality(self):
        N = YoungFunction.power_log(2.0, 1.0)
        N_star = conjugate_young(N)
        for u in (0.3, 1.0, 4.0):
            for v in (0.2, 3.0, 20.0):
                assert u * v <= float(N(u)) + float(N_star(v)) + 1e-8

    def test_nonconvex_source(self):
        # increasing, but concave around u = 50
        N = YoungFunction.power_log(1.1, -1.0)
        with pytest.raises(DomainError):
            conjugate_young(N)

    @pytest.mark.parametrize("y", [0.5, 2.0, 100.0, 1e6])
    def test_inverse_closed_form(self, y):
        N_star = conjugate_young(YoungFunction.power(2.0, c=0.5))
        assert N_star.inverse(y) == pytest.approx(math.sqrt(2.0 * y), rel=1e-9)

    @pytest.mark.parametrize("y", [3.0, 50.0, 1e4])
    def test_inverse_inverts(self, y):
        N_star = conjugate_young(YoungFunction.power_log(2.0, 1.0))
        assert N_star(N_star.inverse(y)) == pytest.approx(y, rel=1e-6)

    def test_inverse_of_zero(self):
        assert conjugate_young(YoungFunction.power(3.0)).inverse(0.0) == 0.0


class TestPsiFunction:
    def test_grid_blowup(self):
        psi = PsiFunction.grid_blowup(2.0, 0.5)
        assert psi(1.0) == pytest.approx(1.0)
        assert psi(1.75) == pytest.approx(2.0)
        assert math.isinf(psi(2.0))
        assert math.isinf(psi(0.5))
        assert psi.support == (1.0, 2.0)

    def test_power_root(self):
        psi = PsiFunction.power_root(2.0)
        assert psi(16.0) == pytest.approx(4.0)
        assert psi.support == (1.0, math.inf)

    def test_degenerate(self):
        psi = PsiFunction.degenerate(2.0)
        assert psi(2.0) == 1.0
        assert math.isinf(psi(2.5))
        np.testing.assert_array_equal(psi.p_grid(), [2.0])

    def test_tabulated_interpolation(self):
        psi = PsiFunction.tabulated([1.0, 2.0, 3.0], [1.0, 4.0, 16.0])
        assert psi(1.5) == pytest.approx(2.0)
        assert math.isinf(psi(3.5))
        assert psi.form == PsiForm.NATURAL

    @pytest.mark.parametrize("B, beta", [(1.0, 0.5), (2.0, 0.0), (math.inf, 1.0)])
    def test_invalid_grid_blowup(self, B, beta):
        with pytest.raises(DomainError):
            PsiFunction.grid_blowup(B, beta)

    def test_invalid_tabulated(self):
        with pytest.raises(ValidationError):
            PsiFunction.tabulated([1.0], [1.0])
        with pytest.raises(ValidationError):
            PsiFunction.tabulated([0.5, 2.0], [1.0, 1.0])

    def test_p_grid_clusters_toward_blowup(self):
        grid = PsiFunction.grid_blowup(2.0, 1.0).p_grid(points=400, decades=8.0)
        assert grid[0] == pytest.approx(1.0)
        assert 2.0 - grid[-1] == pytest.approx(1e-8, rel=1e-6)
        assert np.all(np.diff(grid) > 0)
        assert np.all(grid < 2.0)


class TestWeightFunction:
    def test_power(self):
        w = WeightFunction.power(2.0)
        assert w(10.0) == pytest.approx(100.0)
        assert w.label == "t^2"

    def test_invalid_power(self):
        with pytest.raises(DomainError):
            WeightFunction.power(0.0)

    def test_tabulated_extends_with_end_slopes(self):
        w = WeightFunction(form=WeightForm.TABULATED, nodes=(1.0, 10.0), values=(1.0, 100.0))
        assert w(10.0 ** 0.5) == pytest.approx(10.0)
        assert w(100.0) == pytest.approx(1e4)
        assert w(0.1) == pytest.approx(0.01)

    def test_tabulated_must_increase(self):
        with pytest.raises(DomainError):
            WeightFunction(form=WeightForm.TABULATED, nodes=(1.0, 2.0), values=(2.0, 1.0))
