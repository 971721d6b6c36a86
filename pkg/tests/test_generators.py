import math

import numpy as np
import pytest
from scipy import stats

from umedian.errors import InvalidInputError
from umedian.generators import (C0Family1D, DiskFamily2D, binomial_slack, experiment_min_costhat_1d,
                                experiment_min_costhat_2d, gen_instance_1d, gen_instance_2d, required_n_1d,
                                mean_nearest_spot_check)
from umedian.model import make_rng
from umedian.support1d import alpha_of, build_support_1d

# fitted once on seeds 0..1 at n = 34064, k = 2, R = 1, eps = 0.5 (max observed 143.1), then frozen
SIZE_CONSTANT_2D = 160.0


def test_uniform_family():
    fam = C0Family1D.uniform(1.0)
    assert fam.alpha == 1.0
    P = gen_instance_1d(50, 3, fam, seed=1)
    assert P.locations.min() >= 0.0 and P.locations.max() <= 1.0
    assert C0Family1D.uniform(4.0).alpha == 1.0


def test_capped_family_density_and_support():
    fam = C0Family1D.capped(2.0, 1.5, segments=8, seed=4)
    assert fam.heights.max() <= 1.5 * (1 + 1e-12)
    assert fam.cdf(0.0) == 0.0 and fam.cdf(2.0) == pytest.approx(1.0)
    xs = np.linspace(0, 2, 401)
    slope = np.diff(fam.cdf(xs)) / np.diff(xs)
    assert slope.max() <= 1.5 + 1e-9
    P = gen_instance_1d(40, 2, fam, seed=2)
    assert P.locations.min() >= 0.0 and P.locations.max() <= 2.0


@pytest.mark.parametrize("fam", [C0Family1D.uniform(3.0), C0Family1D.capped(1.0, 2.5, segments=5, seed=1)])
def test_ks(fam):
    draws = fam.sample(make_rng(17), 10_000)
    assert stats.kstest(draws, fam.cdf).pvalue > 0.01


def test_family_validation():
    with pytest.raises(InvalidInputError):
        C0Family1D.capped(1.0, 0.5)
    with pytest.raises(InvalidInputError):
        C0Family1D("capped", 1.0, 2.0, np.array([3.0, -1.0]))
    with pytest.raises(InvalidInputError):
        gen_instance_1d(0, 2, C0Family1D.uniform())
    with pytest.raises(InvalidInputError):
        DiskFamily2D(1.0, C0=0.01)


def test_mixed_families_and_determinism():
    fams = [C0Family1D.uniform(1.0), C0Family1D.capped(1.0, 3.0, seed=2)]
    a = gen_instance_1d(2, 4, fams, seed=5)
    assert a == gen_instance_1d(2, 4, fams, seed=5)
    assert a != gen_instance_1d(2, 4, fams, seed=6)
    with pytest.raises(InvalidInputError):
        gen_instance_1d(3, 4, fams, seed=5)


def test_disk_family():
    fam = DiskFamily2D(2.0)
    assert fam.C0 == pytest.approx(1 / (4 * math.pi)) and fam.radius == pytest.approx(2.0)
    P = gen_instance_2d(200, 3, fam, seed=3)
    assert np.linalg.norm(P.locations, axis=2).max() <= 2.0
    small = DiskFamily2D(2.0, C0=1.0)
    assert np.linalg.norm(gen_instance_2d(50, 2, small, seed=1).locations, axis=2).max() <= small.radius


def test_k1_uniform_concentrates_near_quarter():
    P = gen_instance_1d(20_000, 1, C0Family1D.uniform(1.0), seed=8)
    from umedian.costhat import min_costhat
    m = min_costhat(P)
    assert m == pytest.approx(0.25, abs=0.01) and m >= 1 / 8


def test_experiment_1d_small():
    fam = C0Family1D.uniform(1.0)
    k, delta = 2, 0.1
    n = math.ceil(4 * required_n_1d(1.0, k, delta))
    rep = experiment_min_costhat_1d(n, k, fam, 30, delta, eps=0.2, seed=1)
    assert rep.pass_rate >= 1 - delta - 0.05
    assert max(rep.support_sizes) <= rep.size_bound
    assert len(rep.rows()) == 30 and "pass rate" in rep.summary()
    with pytest.raises(InvalidInputError, match="required n"):
        experiment_min_costhat_1d(10, k, fam, 1, delta)


def test_alpha_near_threshold_scale():
    fam = C0Family1D.uniform(1.0)
    P = gen_instance_1d(2000, 3, fam, seed=4)
    assert alpha_of(P) <= 4 * fam.alpha * (3 + 1) / 3


def test_experiment_2d_and_size_envelope():
    rep = experiment_min_costhat_2d(34064, 2, 1.0, None, 5, 0.1, support_trials=1, seed=7)
    assert rep.bound == pytest.approx(1 / 12 - 1 / (24 * math.pi))
    assert rep.pass_rate == 1.0
    assert rep.support_sizes[0] <= SIZE_CONSTANT_2D * rep.notes["envelope"]
    with pytest.raises(InvalidInputError, match="required n"):
        experiment_min_costhat_2d(100, 2, 1.0, None, 1, 0.1)


def test_mean_nearest_spot_check():
    fam = C0Family1D.capped(1.0, 2.0, segments=6, seed=3)
    for row in mean_nearest_spot_check(fam, 3, np.linspace(0, 1, 11), draws=100_000, seed=5):
        assert row["mean"] >= row["bound"] - 3 * row["stderr"]


def test_binomial_slack():
    assert binomial_slack(0.9, 100) == pytest.approx(0.09)
