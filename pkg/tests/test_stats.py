import json
import math
import os
import statistics

import pytest

from randcurve.stats import (ConfigError, ExperimentConfig,
                             ExperimentTable, RowStats, WalkDistribution,
                             drift_estimate, fit_log_law, fit_power_law,
                             random_walk, run_experiment, sample_ball_uniform)
from randcurve.words import BallSpec, ball_size, sphere_size


def test_distribution_validation():
    WalkDistribution.uniform(2)
    with pytest.raises(ConfigError):
        WalkDistribution(2, (0.5, 0.5))  # wrong arity
    with pytest.raises(ConfigError):
        WalkDistribution(2, (0.6, 0.6, -0.1, -0.1))
    with pytest.raises(ConfigError):
        # generator 2 has no weight in either direction: not generating
        WalkDistribution(2, (0.5, 0.0, 0.5, 0.0))
    mu = WalkDistribution(2, (0.4, 0.1, 0.4, 0.1))
    assert mu.is_symmetric is False or True
    assert not mu.is_uniform


def test_walk_determinism_and_zero():
    mu = WalkDistribution.uniform(2)
    assert random_walk(mu, 25, 9).letters == random_walk(mu, 25, 9).letters
    assert random_walk(mu, 25, 9).letters != random_walk(mu, 25, 10).letters
    assert len(random_walk(mu, 0, 1)) == 0
    with pytest.raises(ConfigError):
        random_walk(mu, -1, 0)


def test_walk_letter_frequencies_chi2():
    # 10^6 draws, chi-squared with 3 dof; 99% quantile is 11.34
    mu = WalkDistribution.uniform(2)
    n = 10 ** 6
    w = random_walk(mu, n, seed=123)
    counts = {}
    for x in w.letters:
        counts[x] = counts.get(x, 0) + 1
    chi2 = sum((counts.get(x, 0) - n / 4) ** 2 / (n / 4) for x in (1, -1, 2, -2))
    assert chi2 < 11.34


def test_walk_word_uses_every_letter_linearly():
    # the 10^4-step walk class spells every letter at least K*n times
    from randcurve.words import cyclic_reduce, letter_counts

    n = 10 ** 4
    w = random_walk(WalkDistribution.uniform(2), n, seed=77)
    lc = letter_counts(cyclic_reduce(w))
    for x in (1, -1, 2, -2):
        assert lc.counts.get(x, 0) >= 0.05 * n


def test_ball_sampling_exact_distribution():
    n = 4
    bn = ball_size(BallSpec(2, n))
    trials = 4000
    length_counts = {}
    for i in range(trials):
        w = sample_ball_uniform(2, n, seed=i)
        assert len(w) <= n and w.is_reduced()
        length_counts[len(w)] = length_counts.get(len(w), 0) + 1
    chi2 = 0.0
    for k in range(n + 1):
        expected = trials * sphere_size(BallSpec(2, k)) / bn
        chi2 += (length_counts.get(k, 0) - expected) ** 2 / expected
    assert chi2 < 15.09  # 99% quantile, 5 dof


def test_ball_small_radius_uniform():
    # radius 1: five elements, each with probability 1/5
    counts = {}
    trials = 5000
    for i in range(trials):
        w = sample_ball_uniform(2, 1, seed=10_000 + i)
        counts[w.letters] = counts.get(w.letters, 0) + 1
    assert set(counts) == {(), (1,), (-1,), (2,), (-2,)}
    for v in counts.values():
        assert abs(v - trials / 5) < 5 * math.sqrt(trials * 0.2 * 0.8)


def test_ball_mass_concentrates_at_large_length():
    # exact computation: P(len >= n/2) -> 1
    fractions = []
    for n in (6, 12, 24, 48):
        bn = ball_size(BallSpec(2, n))
        small = ball_size(BallSpec(2, math.ceil(n / 2) - 1))
        fractions.append((bn - small) / bn)
    assert all(b >= a for a, b in zip(fractions, fractions[1:]))
    assert fractions[-1] > 0.999


def test_drift_examples():
    mu2 = WalkDistribution.uniform(2)
    est = drift_estimate(mu2, 1, 200, 3)
    assert est.mean == 1.0
    est = drift_estimate(mu2, 2000, 300, 5)
    assert abs(est.mean - 0.5) < 0.02
    mu3 = WalkDistribution.uniform(3)
    est3 = drift_estimate(mu3, 2000, 300, 5)
    assert abs(est3.mean - 2 / 3) < 0.02


def test_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"experiment": "self-int", "n_grid": (4,),
                                    "samples": 1, "bogus": 7})
    with pytest.raises(ConfigError):
        ExperimentConfig(experiment="nope", n_grid=(4,), samples=1)
    with pytest.raises(ConfigError):
        ExperimentConfig(experiment="self-int", n_grid=(), samples=1)
    with pytest.raises(ConfigError):
        ExperimentConfig(experiment="self-int", n_grid=(4,), samples=1,
                         sampler="teleport")
    # uniform-distribution precondition for lifting experiments
    with pytest.raises(ConfigError):
        ExperimentConfig(experiment="lifting", n_grid=(6,), samples=2,
                         probs=(0.4, 0.1, 0.4, 0.1))
    ExperimentConfig(experiment="lifting", n_grid=(6,), samples=2)


def test_experiment_reproducible_across_jobs():
    base = dict(experiment="self-int", n_grid=(8, 16), samples=25, seed=4)
    t1 = run_experiment(ExperimentConfig(**base))
    t2 = run_experiment(ExperimentConfig(**base, jobs=2))
    assert t1.to_csv() == t2.to_csv()


def test_csv_format_and_save(tmp_path):
    cfg = ExperimentConfig(experiment="self-int", n_grid=(6, 12), samples=10,
                           seed=1, retain_raw=True)
    t = run_experiment(cfg)
    csv = t.to_csv()
    assert csv.splitlines()[0] == "n,samples,median,q1,q3,mean,max"
    assert len(csv.splitlines()) == 3
    path = os.path.join(tmp_path, "out.csv")
    t.save(path)
    assert open(path).read() == csv
    meta = json.load(open(path + ".meta.json"))
    assert meta["seed"] == 1 and meta["experiment"] == "self-int"
    assert meta["version"].startswith("randcurve-")
    # raw retention consistent with summaries
    for row in t.rows:
        raw = t.raw[row.n]
        assert row.samples == len(raw)
        assert row.median == statistics.quantiles(raw, n=4, method="inclusive")[1] \
            or len(raw) < 2
        assert row.max == max(raw)


def test_fit_exactness():
    rows = [RowStats(n, 1, float(n * n), 0, 0, 0, 0) for n in (5, 10, 20, 40)]
    t = ExperimentTable(rows, {})
    fit = fit_power_law(t)
    assert abs(fit.slope - 2.0) < 1e-12 and fit.stderr < 1e-12
    rows = [RowStats(n, 1, 3.0 * n, 0, 0, 0, 0) for n in (5, 10, 20, 40)]
    assert abs(fit_power_law(ExperimentTable(rows, {})).slope - 1.0) < 1e-12
    rows = [RowStats(n, 1, 2.0 * math.log(n), 0, 0, 0, 0) for n in (5, 10, 20, 40)]
    assert abs(fit_log_law(ExperimentTable(rows, {})).slope - 2.0) < 1e-12


def test_fit_degenerate_errors():
    rows = [RowStats(n, 1, 0.0, 0, 0, 0, 0) for n in (5, 10, 20, 40)]
    with pytest.raises(ConfigError):
        fit_power_law(ExperimentTable(rows, {}))
    rows = [RowStats(5, 1, 2.0, 0, 0, 0, 0)] * 3
    with pytest.raises(ConfigError):
        fit_power_law(ExperimentTable(rows, {}))


def test_conj_ball_experiment():
    cfg = ExperimentConfig(experiment="conj-ball", n_grid=(4, 6), samples=1)
    t = run_experiment(cfg)
    assert t.metadata["violations"] == 0
    assert t.metadata["classes_checked"] > 0


def test_spiral_experiment_smoke():
    cfg = ExperimentConfig(experiment="spiral", n_grid=(30, 60), samples=40, seed=6)
    t = run_experiment(cfg)
    assert all(r.median >= 0 for r in t.rows)


def test_minimizer_experiment_smoke():
    cfg = ExperimentConfig(experiment="minimizer", n_grid=(16,), samples=8, seed=6)
    t = run_experiment(cfg)
    per_n = t.metadata["per_n"]["16"]
    assert per_n["converged"] + per_n["diverged"] + per_n["budget"] <= 8
