import math

import numpy as np
import pytest

from cogsep import Occupancy, SensingModel
from cogsep.sensing import ConditioningError

IDLE, BUSY = Occupancy.IDLE, Occupancy.BUSY


class TestValidation:
    @pytest.mark.parametrize("field", ["p_detect", "p_false_alarm", "prior_busy"])
    @pytest.mark.parametrize("bad", [-0.1, 1.1])
    def test_fields_in_unit_interval(self, field, bad):
        kwargs = dict(p_detect=0.9, p_false_alarm=0.05, prior_busy=0.4)
        kwargs[field] = bad
        with pytest.raises(ValueError):
            SensingModel(**kwargs)

    def test_prior_idle(self):
        assert SensingModel(0.9, 0.05, 0.4).prior_idle == pytest.approx(0.6)


class TestDecisionProb:
    def test_perfect_sensing(self):
        model = SensingModel(1.0, 0.0, 0.4)
        assert model.decision_prob(BUSY) == pytest.approx(0.4)

    def test_default_model(self, sensing):
        assert sensing.decision_prob(BUSY) == pytest.approx(0.39, abs=1e-15)
        assert sensing.decision_prob(IDLE) == pytest.approx(0.61, abs=1e-15)


class TestPosterior:
    def test_perfect_sensing(self):
        model = SensingModel(1.0, 0.0, 0.4)
        assert model.posterior(BUSY, BUSY) == pytest.approx(1.0)
        assert model.posterior(IDLE, IDLE) == pytest.approx(1.0)

    def test_default_model(self, sensing):
        assert sensing.posterior(BUSY, BUSY) == pytest.approx(0.36 / 0.39, rel=1e-14)
        assert sensing.posterior(BUSY, IDLE) == pytest.approx(0.04 / 0.61, rel=1e-14)

    def test_posteriors_sum_to_one(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            model = SensingModel(*rng.uniform(0.01, 0.99, 3))
            for decision in (IDLE, BUSY):
                total = (model.posterior(IDLE, decision)
                         + model.posterior(BUSY, decision))
                assert total == pytest.approx(1.0, abs=1e-14)

    def test_law_of_total_probability(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            model = SensingModel(*rng.uniform(0.0, 1.0, 3))
            for state in (IDLE, BUSY):
                total = 0.0
                for decision in (IDLE, BUSY):
                    weight = model.decision_prob(decision)
                    if weight == 0.0:
                        continue
                    total += weight * model.posterior(state, decision)
                assert abs(total - model.prior(state)) <= 1e-12

    def test_zero_probability_decision_raises(self):
        model = SensingModel(p_detect=0.9, p_false_alarm=0.0, prior_busy=0.0)
        with pytest.raises(ConditioningError):
            model.posterior(BUSY, BUSY)


class TestSampling:
    def test_perfect_sensing_decisions_match_state(self):
        model = SensingModel(1.0, 0.0, 0.5)
        rng = np.random.default_rng(10)
        for _ in range(500):
            state, decision = model.sample_occupancy_and_decision(rng)
            assert state == decision

    def test_idle_prior_means_always_idle(self):
        model = SensingModel(0.9, 0.05, 0.0)
        rng = np.random.default_rng(11)
        assert all(model.sample_occupancy_and_decision(rng)[0] == IDLE
                   for _ in range(300))

    def test_empirical_joint_frequencies(self, sensing):
        n = 1_000_000
        rng = np.random.default_rng(12)
        counts = np.zeros((2, 2))
        for _ in range(n):
            state, decision = sensing.sample_occupancy_and_decision(rng)
            counts[state, decision] += 1
        busy_decisions = counts[:, BUSY].sum() / n
        sigma = math.sqrt(0.39 * 0.61 / n)
        assert abs(busy_decisions - 0.39) < 3 * sigma
        for state in (IDLE, BUSY):
            for decision in (IDLE, BUSY):
                expected = sensing.decision_prob(decision) * sensing.posterior(state, decision)
                sigma = math.sqrt(expected * (1 - expected) / n)
                assert abs(counts[state, decision] / n - expected) < 3 * sigma
