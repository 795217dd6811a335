"""Smoke tests for the python bindings."""

import math

import pytest

import ethersim


def test_rs_statistic_hand_values():
    assert ethersim.rs_statistic([1, 2, 3, 4]) == pytest.approx(2.0 / math.sqrt(1.25), abs=1e-12)
    assert ethersim.rs_statistic([1, -1, 1, -1]) == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(ValueError):
        ethersim.rs_statistic([5, 5, 5, 5])


def test_segment_file():
    assert ethersim.segment_file(5000) == [1024, 1024, 1024, 1024, 904]
    assert ethersim.segment_file(1) == [1]


def test_backoff_range():
    draws = ethersim.sample_backoff(3, max_retx=9, exponent_cap=10, draws=5000, seed=3)
    assert set(draws) == set(range(8))


def test_generators_deterministic():
    assert ethersim.gen_white_noise(64, 5) == ethersim.gen_white_noise(64, 5)
    assert ethersim.gen_fgn(256, 0.8, 5) == ethersim.gen_fgn(256, 0.8, 5)


def test_hurst_estimate_on_fgn():
    est = ethersim.hurst_estimate(ethersim.gen_fgn(1 << 14, 0.8, 11))
    assert 0.70 < est.h < 0.90
    assert est.r_squared > 0.9
    assert len(est.points) >= 4
    assert est.points == sorted(est.points, key=lambda p: p.n)


def test_aggregate_and_rescale():
    bins = ethersim.aggregate([0.5, 1.2, 4.9, 5.0], [1000, 1000, 7, 9], 1.0, 0.0, 6.0)
    assert bins == [1000, 1000, 0, 0, 7, 9]
    assert ethersim.rescale([1, 2, 3, 4], 2) == [3, 7]
    assert ethersim.rescale([1, 2, 3], 2) == [3]


def test_run_simulation_counters_balance():
    r = ethersim.run_simulation(3, duration_s=50.0, seed=2, warmup_s=5.0)
    assert r.frames_delivered > 0
    accounted = r.frames_delivered + r.drops_excess + r.drops_overflow + r.residual_queue
    assert r.frames_enqueued == accounted
    assert r.max_attempts_seen <= 4
    assert 0.0 < r.utilization < 1.0
    assert len(r.trace(5.0)) == 9  # floor((50 - 5) / 5)
    assert sum(r.trace(5.0)) > 0
