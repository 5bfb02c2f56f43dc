import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lrconc.conc import auc_from_phi, shape_diagnostics
from lrconc.dist import Exponential
from lrconc.empirical import (
    Label,
    ScoreSample,
    empirical_cdf,
    empirical_concentration,
    mann_whitney_auc,
    mann_whitney_se,
)
from lrconc.lrdist import DistributionPair


def naive_mann_whitney(x, y):
    total = 0.0
    for yj in y:
        for xi in x:
            total += 1.0 if yj > xi else 0.5 if yj == xi else 0.0
    return total / (len(x) * len(y))


scores = st.lists(st.integers(-20, 20).map(float), min_size=1, max_size=40)


class TestScoreSample:
    def test_sorted_and_frozen(self):
        s = ScoreSample([3.0, 1.0, 2.0], Label.POPULATION_Y)
        assert s.values.tolist() == [1.0, 2.0, 3.0]
        assert len(s) == 3 and s.label is Label.POPULATION_Y
        with pytest.raises(ValueError):
            s.values[0] = 5.0

    @pytest.mark.parametrize("bad", [[], [1.0, math.nan], [math.inf]])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            ScoreSample(bad)


class TestEmpiricalCdf:
    def test_examples(self):
        s = ScoreSample([1.0, 2.0, 3.0])
        assert empirical_cdf(s, 2.0) == pytest.approx(2 / 3)
        assert empirical_cdf(s, 0.5) == 0.0
        assert empirical_cdf(s, 3.0) == 1.0
        assert empirical_cdf(s, 7.0) == 1.0

    def test_ties(self):
        assert empirical_cdf(ScoreSample([1.0, 1.0, 2.0]), 1.0) == pytest.approx(2 / 3)

    def test_array(self):
        out = empirical_cdf(ScoreSample([1.0, 2.0]), np.array([0.0, 1.5, 2.0]))
        assert out.tolist() == [0.0, 0.5, 1.0]


class TestEmpiricalConcentration:
    @pytest.mark.parametrize("m", [7, 100, 1024, 3000])
    def test_identical_samples_staircase(self, m):
        s = ScoreSample(np.linspace(-1.0, 1.0, m))
        c = empirical_concentration(s, s, 256)
        p = c.grid
        assert np.array_equal(c.values, np.ceil(p * m - 1e-9) / m)
        assert np.max(np.abs(c.values - p)) <= 1 / m

    def test_perfect_separation(self):
        c = empirical_concentration(ScoreSample([1.0, 2.0, 3.0]), ScoreSample([10.0, 11.0]), 64)
        assert np.all(c.values[1:-1] == 0.0)
        assert c.values[0] == 0.0 and c.values[-1] == 1.0

    def test_metadata(self):
        c = empirical_concentration(ScoreSample(np.arange(100.0)), ScoreSample(np.arange(400.0)), 32)
        assert c.source == "empirical"
        assert c.sample_sizes == (100, 400)
        assert c.tolerance == pytest.approx(3 / 10)

    def test_grid_too_small(self):
        s = ScoreSample([1.0, 2.0])
        with pytest.raises(ValueError):
            empirical_concentration(s, s, 4)

    @settings(max_examples=50, deadline=None)
    @given(scores, scores)
    def test_monotone_transform_invariance(self, x, y):
        a = empirical_concentration(ScoreSample(x), ScoreSample(y), 32)
        b = empirical_concentration(ScoreSample(np.exp(np.array(x) / 7) * 3 - 1), ScoreSample(np.exp(np.array(y) / 7) * 3 - 1), 32)
        assert np.array_equal(a.values, b.values)

    @settings(max_examples=50, deadline=None)
    @given(scores, scores)
    def test_nondecreasing(self, x, y):
        assert shape_diagnostics(empirical_concentration(ScoreSample(x), ScoreSample(y), 32)).nondecreasing

    def test_exp_pair_convergence(self):
        n = 10**6
        pair = DistributionPair(Exponential(2.0), Exponential(1.0))
        lx = pair.log_likelihood_ratio(Exponential(2.0).sample(n, seed=11, stream=0))
        ly = pair.log_likelihood_ratio(Exponential(1.0).sample(n, seed=11, stream=1))
        c = empirical_concentration(ScoreSample(lx), ScoreSample(ly))
        assert np.max(np.abs(c.values - (1 - np.sqrt(1 - c.grid)))) < 0.005


class TestMannWhitney:
    def test_examples(self):
        assert mann_whitney_auc(ScoreSample([1.0, 2.0]), ScoreSample([3.0, 4.0])) == 1.0
        s = ScoreSample([1.0, 2.0, 3.0])
        assert mann_whitney_auc(s, s) == 0.5

    @settings(max_examples=100, deadline=None)
    @given(scores, scores)
    def test_matches_naive(self, x, y):
        assert mann_whitney_auc(ScoreSample(x), ScoreSample(y)) == pytest.approx(naive_mann_whitney(x, y), abs=1e-14)

    def test_matches_naive_large(self):
        rng = np.random.default_rng(5)
        x = np.round(rng.normal(size=2000), 2)
        y = np.round(rng.normal(0.5, 1.0, size=1500), 2)
        fast = mann_whitney_auc(ScoreSample(x), ScoreSample(y))
        # vectorised double loop over all m*n pairs
        d = y[:, None] - x[None, :]
        slow = (np.sum(d > 0) + 0.5 * np.sum(d == 0)) / d.size
        assert fast == pytest.approx(slow, abs=1e-14)

    @settings(max_examples=100, deadline=None)
    @given(scores, scores)
    def test_swap_complements(self, x, y):
        a = mann_whitney_auc(ScoreSample(x), ScoreSample(y))
        b = mann_whitney_auc(ScoreSample(y), ScoreSample(x))
        assert a + b == 1.0

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=60), st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=60))
    def test_plug_in_agreement(self, x, y):
        xs, ys = ScoreSample(x), ScoreSample(y)
        grid = 256
        plug_in = auc_from_phi(empirical_concentration(xs, ys, grid))
        assert abs(plug_in - mann_whitney_auc(xs, ys)) <= 2 / min(len(xs), len(ys)) + 1 / grid

    def test_se_positive_and_shrinks(self):
        rng = np.random.default_rng(0)
        small = mann_whitney_se(ScoreSample(rng.normal(size=100)), ScoreSample(rng.normal(1, 1, size=100)))
        large = mann_whitney_se(ScoreSample(rng.normal(size=10000)), ScoreSample(rng.normal(1, 1, size=10000)))
        assert 0 < large < small
        assert large == pytest.approx(small / 10, rel=0.3)

    def test_exp_pair_oracle(self):
        n = 10**6
        pair = DistributionPair(Exponential(2.0), Exponential(1.0))
        xs = ScoreSample(pair.log_likelihood_ratio(Exponential(2.0).sample(n, seed=11, stream=0)))
        ys = ScoreSample(pair.log_likelihood_ratio(Exponential(1.0).sample(n, seed=11, stream=1)))
        assert abs(mann_whitney_auc(xs, ys) - 2 / 3) <= 4 * mann_whitney_se(xs, ys)
