import math

import numpy as np
import pytest

from cogsep import (
    ConstellationSpec,
    FadingSample,
    Occupancy,
    derotate,
    detect_threshold,
    map_detect_numeric,
)
from cogsep.detection import DeepFadeError

MODULATIONS = [(2, 1), (4, 1), (8, 1), (2, 2), (8, 2)]


class TestDerotate:
    def test_identity(self):
        assert derotate(1 + 0j, FadingSample(1.0, 0.0)) == pytest.approx(1 + 0j)

    def test_quarter_rotation(self):
        out = derotate(1j, FadingSample(1.0, math.pi / 2))
        assert out == pytest.approx(1 + 0j, abs=1e-15)

    def test_isometry(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            y = complex(rng.normal(), rng.normal())
            theta = rng.uniform(-math.pi, math.pi)
            assert abs(derotate(y, FadingSample(1.0, theta))) == pytest.approx(
                abs(y), abs=1e-12)

    def test_negative_magnitude_rejected(self):
        with pytest.raises(ValueError):
            FadingSample(-1.0, 0.0)


class TestThresholdDetector:
    def test_exact_points_zero_noise(self):
        for mi, mq in MODULATIONS:
            spec = ConstellationSpec(mi, mq, 1.0)
            for point in spec.build_constellation():
                for mag in (0.3, 1.0, 2.5):
                    n, q = detect_threshold(spec, point.amplitude * mag, mag)
                    assert (n, q) == (point.n, point.q)

    def test_two_pam_sign_threshold(self):
        spec = ConstellationSpec(2, 1, 1.0)
        assert detect_threshold(spec, -0.01 + 0j, 0.5) == (0, 0)
        assert detect_threshold(spec, +0.01 + 0j, 0.5) == (1, 0)

    def test_midpoint_tie_goes_to_lower_index(self):
        for mi, mq in MODULATIONS:
            spec = ConstellationSpec(mi, mq, 1.0)
            d = spec.min_distance()
            levels = spec.inphase_levels()
            for n in range(mi - 1):
                boundary = complex(levels[n] + d / 2.0, levels[0] if mq == 1 else 0.0)
                got_n, _ = detect_threshold(spec, boundary, 1.0)
                assert got_n == n

    def test_far_samples_clamp_to_extremes(self):
        spec = ConstellationSpec(8, 2, 1.0)
        n, q = detect_threshold(spec, complex(1e6, -1e6), 1.0)
        assert (n, q) == (7, 0)

    def test_scale_equivariance(self):
        rng = np.random.default_rng(5)
        spec = ConstellationSpec(8, 2, 1.0)
        for _ in range(200):
            z = complex(rng.normal(0, 2), rng.normal(0, 2))
            mag = rng.uniform(0.05, 3.0)
            c = rng.uniform(0.01, 50.0)
            assert detect_threshold(spec, z, mag) == detect_threshold(spec, c * z, c * mag)

    def test_partition_every_sample_maps_once(self):
        rng = np.random.default_rng(6)
        spec = ConstellationSpec(4, 2, 1.0)
        z = rng.normal(0, 5, 1000) + 1j * rng.normal(0, 5, 1000)
        n, q = detect_threshold(spec, z, 1.0)
        assert n.shape == (1000,) and q.shape == (1000,)
        assert np.all((0 <= n) & (n < 4)) and np.all((0 <= q) & (q < 2))

    def test_deep_fade_raises(self):
        with pytest.raises(DeepFadeError):
            detect_threshold(ConstellationSpec(2, 2, 1.0), 1 + 1j, 0.0)


class TestMapDetector:
    def test_perfect_sensing_idle_is_nearest_neighbor(self, mixture):
        from cogsep import SensingModel
        model = SensingModel(1.0, 0.0, 0.4)
        spec = ConstellationSpec(4, 2, 1.0)
        rng = np.random.default_rng(7)
        z = rng.normal(0, 1.5, 3000) + 1j * rng.normal(0, 1.5, 3000)
        mag = rng.uniform(0.2, 2.0, 3000)
        n1, q1 = detect_threshold(spec, z, mag)
        n2, q2 = map_detect_numeric(spec, spec, z, mag, Occupancy.IDLE, model,
                                    0.01, mixture)
        assert np.array_equal(n1, n2) and np.array_equal(q1, q2)

    @pytest.mark.parametrize("mi,mq", MODULATIONS)
    @pytest.mark.parametrize("decision", [Occupancy.IDLE, Occupancy.BUSY])
    def test_equivalence_random_sweep(self, mi, mq, decision, sensing, mixture):
        spec_idle = ConstellationSpec(mi, mq, 1.2)
        spec_busy = ConstellationSpec(mi, mq, 0.3)
        spec = spec_busy if decision == Occupancy.BUSY else spec_idle
        rng = np.random.default_rng(mi * 100 + mq * 10 + decision)
        n_samples = 20_000
        z = rng.normal(0, 1.5, n_samples) + 1j * rng.normal(0, 1.5, n_samples)
        mag = rng.rayleigh(math.sqrt(0.5), n_samples) + 1e-6
        n1, q1 = detect_threshold(spec, z, mag)
        n2, q2 = map_detect_numeric(spec_idle, spec_busy, z, mag, decision,
                                    sensing, 0.01, mixture)
        assert np.array_equal(n1, n2)
        assert np.array_equal(q1, q2)

    def test_midpoint_tie_lexicographic(self, sensing, mixture):
        spec = ConstellationSpec(2, 1, 1.0)
        n, q = map_detect_numeric(spec, spec, 0j, 1.0, Occupancy.IDLE,
                                  sensing, 0.01, mixture)
        assert (n, q) == (0, 0)

    def test_precomputed_convolution_matches(self, sensing, mixture):
        spec = ConstellationSpec(4, 1, 1.0)
        conv = mixture.convolve_with_gaussian(0.01)
        rng = np.random.default_rng(8)
        z = rng.normal(0, 1, 500) + 1j * rng.normal(0, 1, 500)
        a = map_detect_numeric(spec, spec, z, 1.0, Occupancy.BUSY, sensing,
                               0.01, mixture)
        b = map_detect_numeric(spec, spec, z, 1.0, Occupancy.BUSY, sensing,
                               0.01, mixture, convolved=conv)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
