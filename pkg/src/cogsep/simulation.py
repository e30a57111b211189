"""Seeded, chunked Monte Carlo engine for the cognitive link.

Each trial draws the true channel occupancy and the sensing decision, then
(if transmission is allowed) a uniform symbol, a unit-mean Rayleigh channel,
background noise, and, on truly busy channels, an interference sample from
the *unconvolved* mixture added to an independent noise draw, so simulated
physics never reuses the analytic convolution identity.

Randomness is counter-based: chunk i draws from a Philox stream keyed by
(master_seed, i), so results depend only on (master_seed, chunk_size) and
never on scheduling or worker count.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analytic import Scenario, Scheme
from .detection import _axis_index

__all__ = [
    "MonteCarloConfig",
    "SepEstimate",
    "TrialOutcome",
    "InsufficientDataError",
    "run_trial",
    "run_monte_carlo",
]

_Z95 = 1.959963984540054  # two-sided 95% normal quantile


class InsufficientDataError(RuntimeError):
    """No non-skipped trials were available to estimate the error rate."""


@dataclass(frozen=True)
class MonteCarloConfig:
    trials: int
    master_seed: int
    chunk_size: int = 65536

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be >= 1")


@dataclass(frozen=True)
class TrialOutcome:
    error: bool
    skipped: bool


@dataclass(frozen=True)
class SepEstimate:
    """Empirical SEP with a Wilson 95% confidence half-width.

    ``trials`` counts only trials where transmission occurred; OSA trials
    suppressed by a busy sensing decision appear in ``skipped``.
    """

    errors: int
    trials: int
    sep: float
    ci95_half_width: float
    skipped: int = 0

    @property
    def skip_fraction(self) -> float:
        total = self.trials + self.skipped
        return self.skipped / total if total else 0.0


def _wilson_half_width(errors: int, trials: int) -> float:
    z2 = _Z95 * _Z95
    p = errors / trials
    half = _Z95 * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials))
    return half / (1.0 + z2 / trials)


def _chunk_rng(master_seed: int, chunk_index: int) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=(chunk_index,))
    return np.random.Generator(np.random.Philox(seq))


def _simulate_chunk(
    scenario: Scenario, rng: np.random.Generator, n: int
) -> tuple[np.ndarray, np.ndarray]:
    """Run n trials; return (symbol error, transmission occurred) masks.

    Draw order is part of the reproducibility contract: occupancy, sensing
    decision, [gain under the peak policy], symbol index, fading, noise,
    interference.
    """
    s = scenario.sensing
    busy = rng.random(n) < s.prior_busy
    p_busy_decision = np.where(busy, s.p_detect, s.p_false_alarm)
    decided_busy = rng.random(n) < p_busy_decision

    peak_mode = scenario.power_policy == "peak_interference"
    if peak_mode:
        c = scenario.constraints
        gain = rng.exponential(1.0, n)
        with np.errstate(divide="ignore"):
            power = np.minimum(c.peak_power, c.peak_interference / gain)
    elif scenario.scheme is Scheme.SSS:
        power = np.where(decided_busy, scenario.spec_busy.power,
                         scenario.spec_idle.power)
    else:
        power = np.full(n, scenario.spec_idle.power)

    transmit = ~decided_busy if scenario.scheme is Scheme.OSA else np.ones(n, bool)

    spec = scenario.spec_idle
    mi, mq = spec.m_inphase, spec.m_quadrature
    sym = rng.integers(0, spec.size, n)
    n_true = sym % mi
    q_true = sym // mi

    h = math.sqrt(0.5) * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    noise_std = math.sqrt(scenario.noise_variance)
    disturbance = noise_std * (rng.standard_normal(n) + 1j * rng.standard_normal(n))

    mix = scenario.interference
    comp = rng.choice(len(mix.components), size=n, p=mix.weights)
    comp_std = np.sqrt(mix.variances[comp])
    w = comp_std * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    disturbance = disturbance + np.where(busy, w, 0.0)

    # unit-power amplitudes scaled per trial by sqrt(power)
    k_mod = mi * mi + mq * mq - 2
    d_unit = math.sqrt(12.0 / k_mod)
    amp_n = (2 * np.arange(mi) + 1 - mi) * (d_unit / 2.0)
    amp_q = (2 * np.arange(mq) + 1 - mq) * (d_unit / 2.0)
    scale = np.sqrt(power)
    sent = (amp_n[n_true] + 1j * amp_q[q_true]) * scale

    y = h * sent + disturbance
    mag = np.abs(h)
    ok = mag > 0
    safe_mag = np.where(ok, mag, 1.0)
    derot = y * np.conj(h) / safe_mag

    d_trial = d_unit * scale
    n_det = _axis_index(derot.real, safe_mag, mi, d_trial)
    q_det = _axis_index(derot.imag, safe_mag, mq, d_trial)
    # deep fade (measure zero): deterministic index-0 decision
    n_det = np.where(ok, n_det, 0)
    q_det = np.where(ok, q_det, 0)

    error = (n_det != n_true) | (q_det != q_true)
    return error & transmit, transmit


def run_trial(scenario: Scenario, rng: np.random.Generator) -> TrialOutcome:
    """Simulate a single channel use with the caller's random stream."""
    error, transmit = _simulate_chunk(scenario, rng, 1)
    return TrialOutcome(error=bool(error[0]), skipped=not bool(transmit[0]))


def _chunk_counts(args) -> tuple[int, int]:
    scenario, master_seed, chunk_index, size = args
    error, transmit = _simulate_chunk(scenario, _chunk_rng(master_seed, chunk_index), size)
    return int(error.sum()), int(transmit.sum())


def run_monte_carlo(
    scenario: Scenario, config: MonteCarloConfig, workers: int = 1
) -> SepEstimate:
    """Estimate the SEP over ``config.trials`` channel uses.

    The estimate conditions on transmission having occurred (OSA trials with
    a busy decision are skipped, not counted as successes). Deterministic for
    a fixed (master_seed, chunk_size) regardless of ``workers``.
    """
    sizes = [config.chunk_size] * (config.trials // config.chunk_size)
    rem = config.trials % config.chunk_size
    if rem:
        sizes.append(rem)
    tasks = [(scenario, config.master_seed, i, size) for i, size in enumerate(sizes)]

    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_chunk_counts, tasks, chunksize=4))
    else:
        results = [_chunk_counts(t) for t in tasks]

    errors = sum(r[0] for r in results)
    transmitted = sum(r[1] for r in results)
    if transmitted == 0:
        raise InsufficientDataError(
            "all trials were skipped; cannot estimate a conditional error rate")
    return SepEstimate(
        errors=errors,
        trials=transmitted,
        sep=errors / transmitted,
        ci95_half_width=_wilson_half_width(errors, transmitted),
        skipped=config.trials - transmitted,
    )
