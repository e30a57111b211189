"""Spectrum-sensing reliability model: detection/false-alarm probabilities,
channel-occupancy priors, and the posteriors the error-rate formulas consume.
"""

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

__all__ = ["Occupancy", "SensingModel", "ConditioningError"]


class Occupancy(IntEnum):
    """Channel state / sensing decision: 0 = idle, 1 = busy."""

    IDLE = 0
    BUSY = 1


class ConditioningError(ValueError):
    """Conditioning on a zero-probability sensing decision."""


def _check_prob(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return value


@dataclass(frozen=True)
class SensingModel:
    """Sensing performance triple: P_d, P_f, and the prior busy probability.

    ``p_detect`` is the probability of declaring a truly busy channel busy;
    ``p_false_alarm`` is the probability of declaring a truly idle channel
    busy; ``prior_busy`` is the probability the channel is actually occupied.
    """

    p_detect: float
    p_false_alarm: float
    prior_busy: float

    def __post_init__(self) -> None:
        _check_prob("p_detect", self.p_detect)
        _check_prob("p_false_alarm", self.p_false_alarm)
        _check_prob("prior_busy", self.prior_busy)

    @property
    def prior_idle(self) -> float:
        return 1.0 - self.prior_busy

    def prior(self, state: Occupancy) -> float:
        return self.prior_busy if state == Occupancy.BUSY else self.prior_idle

    def decision_given_state(self, decision: Occupancy, state: Occupancy) -> float:
        """Pr{decision | true state} from (P_d, P_f)."""
        p_busy_decision = self.p_detect if state == Occupancy.BUSY else self.p_false_alarm
        return p_busy_decision if decision == Occupancy.BUSY else 1.0 - p_busy_decision

    def decision_prob(self, decision: Occupancy) -> float:
        """Marginal probability of a sensing decision.

        Pr{busy decision} = prior_busy * P_d + prior_idle * P_f.
        """
        p_busy = self.prior_busy * self.p_detect + self.prior_idle * self.p_false_alarm
        return p_busy if decision == Occupancy.BUSY else 1.0 - p_busy

    def posterior(self, true_state: Occupancy, decision: Occupancy) -> float:
        """Bayes posterior Pr{true state | sensing decision}."""
        denom = self.decision_prob(decision)
        if denom <= 0.0:
            raise ConditioningError(
                f"decision {decision.name} has probability 0; posterior undefined"
            )
        joint = self.prior(true_state) * self.decision_given_state(decision, true_state)
        return joint / denom

    def sample_occupancy_and_decision(
        self, rng: np.random.Generator
    ) -> tuple[Occupancy, Occupancy]:
        """Draw (true state, sensing decision) for one channel use."""
        busy = rng.random() < self.prior_busy
        p_busy_decision = self.p_detect if busy else self.p_false_alarm
        decided_busy = rng.random() < p_busy_decision
        return (
            Occupancy.BUSY if busy else Occupancy.IDLE,
            Occupancy.BUSY if decided_busy else Occupancy.IDLE,
        )
