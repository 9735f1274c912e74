import math

import numpy as np
import pytest

from ri_tails.diagnostics import Verdict
from ri_tails.exceptions import UsageError, ValidationError
from ri_tails.montecarlo import (
    CHUNK_SIZE,
    CiRequest,
    SampleBatch,
    confidence_interval,
    empirical_tail,
    sample,
    simulate_coverage,
    verify_tail_bound,
    write_batch_csv,
)
from ri_tails.numerics import log_grid
from ri_tails.random_variables import DiscreteRV
from ri_tails.spaces import (
    GlsSpace,
    LorentzSpace,
    LpSpace,
    OrliczSpace,
    PsiFunction,
    WeightFunction,
    YoungFunction,
)
from ri_tails.witness import witness_for


class TestSample:
    def test_deterministic(self, xi2):
        first = sample(xi2, 100_000, seed=1)
        second = sample(xi2, 100_000, seed=1)
        np.testing.assert_array_equal(first.values, second.values)
        assert first.seed == 1

    def test_independent_of_worker_count(self, xi2):
        n = 3 * CHUNK_SIZE + 17
        serial = sample(xi2, n, seed=2, workers=1)
        threaded = sample(xi2, n, seed=2, workers=4)
        assert serial.n == n
        np.testing.assert_array_equal(serial.values, threaded.values)

    def test_seeds_differ(self, xi2):
        assert not np.array_equal(sample(xi2, 1000, seed=1).values, sample(xi2, 1000, seed=2).values)

    def test_constant(self):
        np.testing.assert_array_equal(sample(DiscreteRV.constant(3.0), 5, seed=1).values, [3.0] * 5)

    def test_two_point_frequency(self, lp2_witness_rv):
        batch = sample(lp2_witness_rv, 1_000_000, seed=3)
        assert set(np.unique(batch.values)) <= {0.0, 10.0}
        assert np.mean(batch.values == 10.0) == pytest.approx(0.01, abs=5e-4)

    @pytest.mark.parametrize("n, seed", [(0, 1), (10, -1), (10, 2 ** 64)])
    def test_invalid(self, xi2, n, seed):
        with pytest.raises(UsageError):
            sample(xi2, n, seed)


class TestEmpiricalTail:
    def test_all_zero(self):
        batch = SampleBatch(values=np.zeros(100), seed=0)
        assert empirical_tail(batch, 1.0) == (0.0, 0.0)

    def test_power_singularity(self, xi2):
        estimate, half_width = empirical_tail(sample(xi2, 1_000_000, seed=1), 2.0)
        assert estimate == pytest.approx(0.25, abs=half_width)
        assert half_width == pytest.approx(3.0 * math.sqrt(0.25 * 0.75 / 1e6), rel=0.01)

    def test_counts_atoms_at_t(self):
        batch = SampleBatch(values=np.array([0.0, 1.0, 2.0, 2.0]), seed=0)
        assert empirical_tail(batch, 2.0)[0] == 0.5


class TestVerifyTailBound:
    def test_lp_witness(self, lp2_witness_rv):
        report = verify_tail_bound(LpSpace(2.0), lp2_witness_rv, [2.0, 5.0, 10.0], n=1_000_000, seed=1)
        assert report.verdict == Verdict.BOUNDED_RATIO
        assert report.constants["norm"] == pytest.approx(1.0)
        assert report.constants["seed"] == 1.0
        assert len(report.records) == 3

    def test_power_singularity_in_gls(self, xi2):
        space = GlsSpace(PsiFunction.grid_blowup(2.0, 0.5))
        report = verify_tail_bound(space, xi2, log_grid(2.0, 50.0, 10), n=1_000_000, seed=2)
        assert report.passed
        assert report.constants["norm"] == pytest.approx(2.0, rel=1e-9)

    def test_skips_unreliable_levels(self, lp2_witness_rv):
        report = verify_tail_bound(LpSpace(2.0), lp2_witness_rv, [2.0, 10.0, 1000.0], n=10_000, seed=3)
        assert len(report.records) == 2
        assert any("skipped" in note for note in report.notes)

    def test_understated_norm_is_violation(self, monkeypatch):
        # true L2 norm is 2
        rv = DiscreteRV.two_point(10.0, 0.04)
        monkeypatch.setattr(LpSpace, "norm", lambda self, rv: 1.0)
        report = verify_tail_bound(LpSpace(2.0), rv, [2.0, 10.0], n=100_000, seed=1)
        assert report.verdict == Verdict.VIOLATED
        assert any("above bound" in note for note in report.notes)

    @pytest.mark.parametrize("seed", [1, 2, 3])
    @pytest.mark.parametrize(
        "space",
        [
            LpSpace(2.0),
            OrliczSpace(YoungFunction.power(3.0)),
            OrliczSpace(YoungFunction.power_log(2.0, 1.0)),
            LorentzSpace(WeightFunction.power(2.0)),
        ],
    )
    def test_witness_tails_stay_under_characteristic(self, space, seed):
        rv = witness_for(space, 10.0).rv
        report = verify_tail_bound(space, rv, [2.0, 5.0, 9.0, 20.0], n=500_000, seed=seed)
        assert report.passed
        assert report.constants["norm"] == pytest.approx(1.0, rel=1e-8)
        assert all(r.lhs <= r.rhs + r.band for r in report.records)

    def test_infinite_norm(self, xi2):
        with pytest.raises(UsageError):
            verify_tail_bound(LpSpace(3.0), xi2, [2.0], n=100, seed=1)


class TestCiRequest:
    @pytest.mark.parametrize(
        "sigma, wn, alpha", [(0.0, 1.0, 0.05), (1.0, -1.0, 0.05), (1.0, 1.0, 0.0), (1.0, 1.0, 1.0)]
    )
    def test_invalid(self, sigma, wn, alpha):
        with pytest.raises(ValidationError):
            CiRequest(sigma=sigma, wn=wn, alpha=alpha, space=LpSpace(2.0))


class TestConfidenceInterval:
    def test_l2(self):
        req = CiRequest(sigma=1.0, wn=10.0, alpha=0.01, space=LpSpace(2.0))
        assert confidence_interval(req) == pytest.approx(1.0, rel=1e-9)

    def test_orlicz_cubic(self):
        req = CiRequest(sigma=1.0, wn=1.0, alpha=0.001, space=OrliczSpace(YoungFunction.power(3.0)))
        assert confidence_interval(req) == pytest.approx(10.0, rel=1e-9)

    def test_scales_with_sigma(self):
        space = LpSpace(1.5)
        base = confidence_interval(CiRequest(sigma=1.0, wn=4.0, alpha=0.05, space=space))
        doubled = confidence_interval(CiRequest(sigma=2.0, wn=4.0, alpha=0.05, space=space))
        assert doubled == pytest.approx(2.0 * base, rel=1e-9)

    def test_narrows_with_rate(self):
        space = LpSpace(2.0)
        assert confidence_interval(CiRequest(1.0, 100.0, 0.01, space)) == pytest.approx(0.1, rel=1e-9)


class TestSimulateCoverage:
    def test_extremal_coverage(self):
        req = CiRequest(sigma=2.0, wn=10.0, alpha=0.01, space=LpSpace(2.0))
        report = simulate_coverage(req, n=1_000_000, seed=1)
        assert report.passed
        assert report.constants["radius"] == pytest.approx(2.0, rel=1e-9)
        assert report.constants["coverage"] == pytest.approx(0.99, abs=1e-3)

    def test_gls_has_no_extremal_element(self):
        req = CiRequest(sigma=1.0, wn=1.0, alpha=0.05, space=GlsSpace(PsiFunction.grid_blowup(2.0, 1.0)))
        with pytest.raises(UsageError):
            simulate_coverage(req, n=1000, seed=1)


class TestWriteBatchCsv:
    def test_single_column(self, tmp_path):
        batch = SampleBatch(values=np.array([0.0, 0.1, 10.0]), seed=7)
        path = tmp_path / "batch.csv"
        write_batch_csv(batch, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "value"
        assert [float(x) for x in lines[1:]] == [0.0, 0.1, 10.0]
