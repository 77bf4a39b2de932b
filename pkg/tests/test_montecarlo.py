import math
import warnings

import numpy as np
import pytest
from scipy import stats
from scipy.spatial import cKDTree

from conftest import eq7, finite_window_laplace
from uav_coexist.analytic import EffectiveDensities, MetricInputs, interferer_classes, srp, srp_laplace_argument
from uav_coexist.montecarlo import (
    SimConfig,
    TruncationBiasWarning,
    block_rng,
    check_truncation,
    empirical_retention,
    interference_samples,
    sample_hppp_annulus,
    sample_mhcpp_type2,
    simulate_laplace,
    simulate_outage,
    simulate_srp,
    simulate_srp_curve,
    simulate_tc,
    truncation_bias_ratio,
)
from uav_coexist.network import DensityConfig, RadioParams, Soma, Tdma

P = RadioParams()


def case1(scheme, r0=5.0, **kw):
    return MetricInputs.build(P, scheme, DensityConfig(0.01, 0.1, 0.1, r0), **kw)


def test_hppp_empty():
    rng = np.random.default_rng(0)
    assert len(sample_hppp_annulus(0.0, 5.0, 500.0, rng)) == 0


def test_hppp_mean_count():
    rng = np.random.default_rng(1)
    counts = [len(sample_hppp_annulus(0.01, 5.0, 500.0, rng)) for _ in range(10_000)]
    assert np.mean(counts) == pytest.approx(0.01 * math.pi * (500**2 - 25), rel=0.01)
    assert 0.01 * math.pi * (500**2 - 25) == pytest.approx(7853.2, abs=0.1)


def test_hppp_area_uniform():
    rng = np.random.default_rng(2)
    pts = sample_hppp_annulus(0.1, 5.0, 600.0, rng)
    r2 = pts.r[:100_000] ** 2
    assert len(r2) == 100_000
    u = (r2 - 25.0) / (600.0**2 - 25.0)
    res = stats.kstest(u, "uniform")
    assert res.statistic < 1.628 / math.sqrt(len(u))  # 1% critical value
    assert np.all((pts.r > 5.0) & (pts.r <= 600.0))
    assert stats.kstest(pts.theta / (2 * math.pi), "uniform").pvalue > 0.001


def test_mhcpp_hard_core_and_empty():
    rng = np.random.default_rng(3)
    assert len(sample_mhcpp_type2(0.0, 5.0, 50.0, rng)) == 0
    for _ in range(50):
        pts = sample_mhcpp_type2(0.02, 5.0, 60.0, rng)
        if len(pts) > 1:
            d, _ = cKDTree(pts.xy).query(pts.xy, k=2)
            assert d[:, 1].min() > 5.0


def test_retention_examples():
    rng = np.random.default_rng(4)
    low = empirical_retention(1e-5, 5.0, 2000, rng, window_half=500.0)
    assert low / 1e-5 == pytest.approx(1.0, abs=0.01 + 3 / math.sqrt(1e-5 * 1e6 * 2000))
    mid = empirical_retention(0.01, 5.0, 1000, np.random.default_rng(5))
    assert mid == pytest.approx(eq7(0.01, 5.0), rel=0.05)
    assert mid == pytest.approx(0.0069, rel=0.05)
    harder = empirical_retention(0.01, 10.0, 1000, np.random.default_rng(6), window_half=100.0)
    assert harder < mid


def test_truncation_ratio_formula():
    # neglected 2 pi lam K1 R^(2-a)/(a-2) against kept 2 pi lam K1 (r0^(2-a) - R^(2-a))/(a-2)
    assert truncation_bias_ratio(5.0, 5000.0, 2.5) == pytest.approx(5000**-0.5 / (5**-0.5 - 5000**-0.5), rel=1e-14)
    with pytest.warns(TruncationBiasWarning):
        check_truncation(5.0, 5000.0, 2.5)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert check_truncation(5.0, SimConfig().r_max, 2.5) < 0.01


def test_default_r_max_meets_bias_bound():
    for r0 in (2.0, 5.0, 15.0, 25.0, 30.0):
        assert truncation_bias_ratio(r0, SimConfig().r_max, P.alpha_I) < 0.01


def test_simulation_warns_on_short_window():
    with pytest.warns(TruncationBiasWarning):
        simulate_srp(case1(Tdma(0.5)), SimConfig(trials=100, r_max=5000.0))


def test_sim_config_validation():
    for kw in ({"trials": 0}, {"r_max": -1.0}, {"workers": 0}):
        with pytest.raises(ValueError):
            SimConfig(**kw)


def test_zero_density_estimates():
    x = MetricInputs(P, Soma(0.5), EffectiveDensities(0.0, 0.0), 5.0)
    assert simulate_srp(x, SimConfig(trials=2000)).mean == 1.0
    assert simulate_outage(x, SimConfig(trials=2000)).mean == 0.0


def test_fig3a_tdma_cross_check_short_window():
    x = case1(Tdma(0.5), gamma_th=0.1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationBiasWarning)
        est = simulate_srp(x, SimConfig(trials=100_000, r_max=5000.0))
    assert abs(est.mean - srp(x)) <= max(0.02, 4 * est.std_err)


def test_fig3b_soma_outage_cross_check():
    from uav_coexist.analytic import outage

    x = case1(Soma(0.5), beta_th=10**-0.5)
    est = simulate_outage(x, SimConfig(trials=100_000))
    assert abs(est.mean - outage(x)) <= max(0.02, 4 * est.std_err)


def test_worker_count_invariance():
    x = case1(Soma(0.5))
    a = simulate_srp(x, SimConfig(trials=20_000, seed=9, workers=1))
    b = simulate_srp(x, SimConfig(trials=20_000, seed=9, workers=4))
    assert a == b
    ia = interference_samples(x, "radar", SimConfig(trials=3000, seed=9))
    ib = interference_samples(x, "radar", SimConfig(trials=3000, seed=9, workers=3))
    assert np.array_equal(ia, ib)


def test_block_streams_are_distinct_and_reproducible():
    assert block_rng(1, 0).random() == block_rng(1, 0).random()
    assert block_rng(1, 0).random() != block_rng(1, 1).random()


def test_std_err_halves_with_four_times_trials():
    x = case1(Soma(0.5))
    ratios = []
    for seed in range(3):
        small = simulate_srp(x, SimConfig(trials=10_000, seed=seed))
        big = simulate_srp(x, SimConfig(trials=40_000, seed=seed + 100))
        ratios.append(big.std_err / small.std_err)
    assert np.mean(ratios) == pytest.approx(0.5, rel=0.2)


def test_soma_srp_and_outage_share_interference_field():
    x = case1(Soma(0.5))
    sim = SimConfig(trials=5000, seed=21)
    radar = interference_samples(x, "radar", sim)
    data = interference_samples(x, "data", sim)
    assert radar.mean() == data.mean()


def test_noise_dominated_outage():
    params = RadioParams(n0=1e3)
    x = MetricInputs.build(params, Tdma(0.5), DensityConfig(0.01, 0.1, 0.1, 5.0))
    est = simulate_outage(x, SimConfig(trials=5000, include_noise=True))
    assert est.mean >= 0.999


def test_curve_matches_pointwise():
    x = case1(Tdma(0.5))
    sim = SimConfig(trials=5000, seed=8)
    curve = simulate_srp_curve(x, sim, [0.1])
    assert curve[0] == simulate_srp(x, sim)


def test_tc_from_simulated_outage():
    x = case1(Tdma(0.5))
    sim = SimConfig(trials=5000, seed=2)
    out = simulate_outage(x, sim)
    tc = simulate_tc(x, sim)
    assert tc.mean == pytest.approx(0.5 * x.eff.lambda_d * math.log(2.0) * (1 - out.mean), rel=1e-14)


def test_hybrid_far_field_matches_exact_sampling():
    # exact point sampling everywhere against the moment-matched far field
    x = MetricInputs.build(P, Soma(0.5), DensityConfig(0.002, 0.02, 0.1, 5.0))
    z = 0.3 / P.k1
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationBiasWarning)
        exact = simulate_laplace(z, x, "radar", SimConfig(trials=4000, r_max=1500.0, r_exact=1500.0, seed=5))
        hybrid = simulate_laplace(z, x, "radar", SimConfig(trials=4000, r_max=1500.0, r_exact=100.0, seed=6))
    assert abs(exact.mean - hybrid.mean) <= 4 * math.hypot(exact.std_err, hybrid.std_err)


def test_mhcpp_sampling_close_to_effective_hppp():
    x = MetricInputs.build(P, Tdma(0.5), DensityConfig(0.002, 0.02, 0.1, 5.0), gamma_th=0.1)
    mh = simulate_srp(x, SimConfig(trials=3000, seed=1, use_mhcpp=True, r_exact=60.0))
    assert abs(mh.mean - srp(x)) <= max(0.03, 4 * mh.std_err)


def test_short_window_matches_finite_window_oracle():
    # at r_max = 5000 m the estimate tracks the truncated field, not the infinite plane
    x = case1(Soma(0.5), r0=15.0, gamma_th=1.0)
    z = srp_laplace_argument(P, x.scheme, 1.0)
    truth = finite_window_laplace(z, interferer_classes(x, "radar"), P.k1, 15.0, 5000.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationBiasWarning)
        est = simulate_srp(x, SimConfig(trials=100_000, r_max=5000.0))
    assert abs(est.mean - truth) <= 4 * est.std_err
    assert truth - srp(x) > 0.019
