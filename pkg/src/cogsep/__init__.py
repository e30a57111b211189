"""Symbol error probability analysis and simulation for cognitive radio links
operating under imperfect spectrum sensing, Gaussian-mixture interference,
and transmit/interference power constraints.
"""

from .analytic import (
    ConstraintSet,
    OptimalPowers,
    Scenario,
    Scheme,
    max_power_osa,
    optimize_powers_sss,
    peak_power_policy,
    sep_class_conditional,
    sep_conditional,
    sep_general_numeric,
    sep_peak_interference,
    sep_peak_interference_exact,
    sep_peak_interference_oracle,
    sep_rayleigh,
    sep_rayleigh_numeric,
    sep_rayleigh_osa,
    sep_rayleigh_sss,
    sep_upper_bound,
)
from .detection import FadingSample, derotate, detect_threshold, map_detect_numeric
from .mathcore import GaussianMixture, craig_q_numeric, gaussian_q
from .modulation import ConstellationPoint, ConstellationSpec, PointClass
from .sensing import Occupancy, SensingModel
from .simulation import MonteCarloConfig, SepEstimate, run_monte_carlo, run_trial

__version__ = "0.1.0"

__all__ = [
    "ConstellationPoint",
    "ConstellationSpec",
    "ConstraintSet",
    "FadingSample",
    "GaussianMixture",
    "MonteCarloConfig",
    "Occupancy",
    "OptimalPowers",
    "PointClass",
    "Scenario",
    "Scheme",
    "SensingModel",
    "SepEstimate",
    "craig_q_numeric",
    "derotate",
    "detect_threshold",
    "gaussian_q",
    "map_detect_numeric",
    "max_power_osa",
    "optimize_powers_sss",
    "peak_power_policy",
    "run_monte_carlo",
    "run_trial",
    "sep_class_conditional",
    "sep_conditional",
    "sep_general_numeric",
    "sep_peak_interference",
    "sep_peak_interference_exact",
    "sep_peak_interference_oracle",
    "sep_rayleigh",
    "sep_rayleigh_numeric",
    "sep_rayleigh_osa",
    "sep_rayleigh_sss",
    "sep_upper_bound",
]
