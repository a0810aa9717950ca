import csv

import numpy as np
import pytest

from uncertain_learning.experiments import (
    CURVE_HEADER,
    TABLE_HEADER,
    ConfigError,
    ExperimentConfig,
    draw_evidence,
    proposition1_demo,
    run_campaign,
    run_trial,
    substream,
    trial_seeds,
    crossing_time,
    write_campaign,
)


def small(**kw):
    base = dict(agent_count=4, steps=500, trials=3, seed=5)
    base.update(kw)
    return ExperimentConfig(**base)


class TestConfig:
    def test_defaults(self):
        c = ExperimentConfig()
        assert (c.agent_count, c.symbol_count, c.true_hypothesis, c.steps, c.trials) == (10, 2, 1, 100_000, 10)
        assert c.evidence_range == (0, 100)
        np.testing.assert_array_equal(c.signal_dists, np.tile([0.6, 0.4], (10, 1)))

    def test_high_regime_range(self):
        assert ExperimentConfig(evidence="high").evidence_range == (1000, 10000)

    @pytest.mark.parametrize("kwargs,field", [
        (dict(evidence="explicit", evidence_range=(-1, 5)), "evidence_range"),
        (dict(evidence="explicit", evidence_range=(5, 1)), "evidence_range"),
        (dict(evidence="medium"), "evidence"),
        (dict(hypothesis_dists=[[0.5, 0.6], [0.5, 0.5]]), "hypothesis_dists"),
        (dict(hypothesis_dists=[[0.5, 0.5]]), "hypothesis_dists"),
        (dict(true_hypothesis=2), "true_hypothesis"),
        (dict(trials=0), "trials"),
        (dict(symbol_count=1), "symbol_count"),
        (dict(graph="ring"), "graph"),
    ])
    def test_validation_names_field(self, kwargs, field):
        with pytest.raises(ConfigError) as info:
            ExperimentConfig(**kwargs)
        assert info.value.field == field

    def test_infeasible_graph(self):
        c = ExperimentConfig(agent_count=7, graph={"type": "ring_of_cliques", "clique_count": 2, "clique_size": 3})
        with pytest.raises(ConfigError):
            c.build_graph()


class TestEvidence:
    @pytest.mark.parametrize("regime", ["low", "high"])
    def test_totals_in_range(self, regime):
        c = ExperimentConfig(evidence=regime)
        Z = draw_evidence(c, np.random.default_rng(0))
        lo, hi = c.evidence_range
        R = Z.sum(axis=2)
        assert Z.shape == (10, 2, 2) and np.all((lo <= R) & (R <= hi))

    def test_range_bounds_are_inclusive(self):
        c = ExperimentConfig(evidence="explicit", evidence_range=(0, 1), agent_count=50)
        R = draw_evidence(c, np.random.default_rng(1)).sum(axis=2)
        assert set(np.unique(R)) == {0, 1}

    def test_substreams_are_independent(self):
        a = substream(42, "evidence").random(5)
        assert np.array_equal(a, substream(42, "evidence").random(5))
        assert not np.array_equal(a, substream(42, "graph").random(5))
        assert not np.array_equal(a, substream(43, "evidence").random(5))

    def test_graph_stream_does_not_move_evidence(self):
        # a random graph consumes the graph stream only; evidence is unchanged
        seed = trial_seeds(0, 1)[0]
        ring = run_trial(small(graph={"type": "ring"}), seed)
        rand = run_trial(small(graph={"type": "random", "window": 2}), seed)
        np.testing.assert_array_equal(ring.prior_counts, rand.prior_counts)

    def test_trial_seeds(self):
        s = trial_seeds(0, 5)
        assert s[:3] == trial_seeds(0, 3) and len(set(s)) == 5
        assert s != trial_seeds(1, 5)


class TestRunTrial:
    def test_zero_evidence_single_agent(self):
        c = ExperimentConfig(agent_count=1, evidence="explicit", evidence_range=(0, 0), graph={"type": "self_loops"},
                             steps=1000, trials=1)
        r = run_trial(c, 7)
        assert np.all(r.errors == 0.0) and np.all(r.targets == 0.0)

    def test_deterministic(self):
        c = small(graph={"type": "random", "window": 3})
        a, b = run_trial(c, 99), run_trial(c, 99)
        for name in ("errors", "final_points", "targets", "final_log_beliefs", "prior_counts"):
            assert getattr(a, name).tobytes() == getattr(b, name).tobytes()

    def test_error_nonnegative(self):
        r = run_trial(small(), 3)
        assert r.errors.shape == (500, 2) and np.all(r.errors >= 0)

    def test_fixed_evidence_seed(self):
        c = small(evidence_seed=11)
        a, b = run_trial(c, 1), run_trial(c, 2)
        np.testing.assert_array_equal(a.prior_counts, b.prior_counts)
        assert not np.array_equal(a.errors, b.errors)

    def test_low_evidence_final_points(self):
        # loose trend check: true hypothesis slightly positive, false one negative
        r = run_trial(ExperimentConfig(steps=10_000), trial_seeds(0, 1)[0])
        assert 0 < r.final_points[1] < 3
        assert -20 < r.final_points[0] < -1


class TestCampaign:
    def test_single_trial_equals_run_trial(self):
        c = small(trials=1)
        res = run_campaign(c)
        t = run_trial(c, trial_seeds(c.seed, 1)[0])
        np.testing.assert_array_equal(res.mean_error, t.errors)
        np.testing.assert_array_equal(res.mean_final_point, t.final_points)
        assert np.all(res.error_stderr == 0)

    def test_arithmetic_mean(self):
        res = run_campaign(small())
        np.testing.assert_array_equal(res.mean_error, np.mean([t.errors for t in res.trials], axis=0))

    def test_workers_do_not_change_results(self):
        c = small()
        assert run_campaign(c, workers=2).mean_error.tobytes() == run_campaign(c).mean_error.tobytes()

    def test_csv_output(self, tmp_path):
        res = run_campaign(small())
        curves, table = write_campaign(res, tmp_path)
        with open(curves) as fh:
            rows = list(csv.reader(fh))
        assert tuple(rows[0]) == CURVE_HEADER == ("k", "hypothesis", "mean_error", "stderr")
        assert len(rows) == 1 + 500 * 2
        assert float(rows[1][2]) == res.mean_error[0, 0]
        with open(table) as fh:
            rows = list(csv.reader(fh))
        assert tuple(rows[0]) == TABLE_HEADER == ("regime", "m", "hypothesis", "mean_final_point", "stderr")
        assert rows[1][:3] == ["low", "4", "0"]


class TestCrossingTime:
    @pytest.mark.parametrize("series,expected", [
        ([0.1, 0.2], 1),
        ([1.0, 0.4, 0.3], 2),
        ([1.0, 0.4, 0.9, 0.1], 4),
        ([1.0, 0.4, 0.9], None),
        ([0.5, 0.5], 1),
        ([np.nan, 0.1], 2),
    ])
    def test_examples(self, series, expected):
        assert crossing_time(series, 0.5) == expected


class TestFlipDemo:
    def test_zero_evidence_for_truth_flips(self):
        r = proposition1_demo([0.6, 0.4], [0.55, 0.45], R1=100, R2=0, trials=200, seed=0, steps=1000)
        assert r.flip_probability > 0 and r.draws == 200

    def test_huge_evidence_does_not_flip(self):
        r = proposition1_demo([0.6, 0.4], [0.3, 0.7], R1=10**6, R2=10**6, trials=200, seed=0, steps=10)
        assert r.flip_probability < 0.01
        assert np.isnan(r.failure_rate)

    def test_exchangeable_models_flip_half_the_time(self):
        r = proposition1_demo([0.6, 0.4], [0.6, 0.4], R1=50, R2=50, trials=400, seed=0, steps=10)
        assert abs(r.flip_probability - 0.5) <= 0.1

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            proposition1_demo([0.6, 0.4], [0.6, 0.4], 1, 1, trials=0, seed=0)
        with pytest.raises(ValueError):
            proposition1_demo([0.6, 0.5], [0.6, 0.4], 1, 1, trials=1, seed=0)
