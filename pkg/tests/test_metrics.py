import math

import numpy as np
import pytest

from ebnforge import ConfigurationError, MetricsRow, RecurrentMatrix, SpikeEvent
from ebnforge.metrics import frobenius_distance, mean_rate, metrics_to_csv, rmse


def test_rmse_identical_is_zero():
    x = np.random.default_rng(0).normal(size=(3, 50))
    assert rmse(x, x) == 0.0


def test_rmse_constant_offset():
    x = np.zeros((2, 40))
    assert np.isclose(rmse(x, x + 0.25), 0.25, rtol=1e-14)
    assert np.isclose(rmse(x, x - 1.5), 1.5, rtol=1e-14)


def test_rmse_matches_naive_loop():
    rng = np.random.default_rng(7)
    a = rng.normal(size=(3, 20))
    b = rng.normal(size=(3, 20))
    total = 0.0
    for i in range(3):
        for j in range(20):
            total += (a[i, j] - b[i, j]) ** 2
    expected = math.sqrt(total / 60)
    assert np.isclose(rmse(a, b), expected, rtol=1e-12)


def test_rmse_shape_mismatch():
    with pytest.raises(ConfigurationError):
        rmse(np.zeros((2, 5)), np.zeros((2, 6)))


def test_frobenius_trivial_cases():
    a = np.random.default_rng(1).normal(size=(4, 4))
    assert frobenius_distance(a, a) == 0.0
    b = a.copy()
    b[2, 1] += 0.1
    assert np.isclose(frobenius_distance(a, b), 0.1, rtol=1e-12)


def test_frobenius_matches_naive_loop():
    rng = np.random.default_rng(2)
    a = rng.normal(size=(5, 5))
    b = rng.normal(size=(5, 5))
    total = 0.0
    for i in range(5):
        for j in range(5):
            total += (a[i, j] - b[i, j]) ** 2
    assert np.isclose(frobenius_distance(a, b), math.sqrt(total), rtol=1e-12)


def test_frobenius_accepts_weight_matrices():
    codes = np.array([[2, 0], [0, 2]])
    m = RecurrentMatrix(codes, 0.5)  # physical weights are the identity
    target = np.zeros((2, 2))
    assert np.isclose(frobenius_distance(m, target), np.sqrt(2.0), rtol=1e-12)


def test_mean_rate():
    assert mean_rate([], 20, 1.0) == 0.0
    events = [SpikeEvent(neuron=i % 20, t=0.0) for i in range(100)]
    assert np.isclose(mean_rate(events, 20, 1.0), 5.0, rtol=1e-14)
    # equals the average of per-neuron rates
    rng = np.random.default_rng(3)
    events = [SpikeEvent(neuron=int(n), t=0.0) for n in rng.integers(0, 7, size=53)]
    counts = np.zeros(7)
    for ev in events:
        counts[ev.neuron] += 1
    assert np.isclose(mean_rate(events, 7, 2.0), np.mean(counts / 2.0), rtol=1e-12)


def test_rates_invariant_under_neuron_relabeling():
    rng = np.random.default_rng(4)
    perm = rng.permutation(8)
    events = [SpikeEvent(neuron=int(n), t=0.0) for n in rng.integers(0, 8, size=40)]
    relabeled = [SpikeEvent(neuron=int(perm[ev.neuron]), t=ev.t) for ev in events]
    assert mean_rate(events, 8, 1.0) == mean_rate(relabeled, 8, 1.0)


def test_metrics_csv_format(tmp_path):
    rows = [
        MetricsRow(iteration=1, rmse=1.5, mean_rate=120.0, frob_dist=3.25, spike_count=40),
        MetricsRow(iteration=2, rmse=0.5, mean_rate=90.0, frob_dist=1.0, spike_count=30),
    ]
    path = tmp_path / "metrics.csv"
    metrics_to_csv(rows, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "iter,rmse,mean_rate,frob_dist,spike_count"
    assert lines[1] == "1,1.5,120.0,3.25,40"
    assert len(lines) == 3
    parsed = lines[2].split(",")
    assert int(parsed[0]) == 2 and float(parsed[1]) == 0.5 and int(parsed[4]) == 30
