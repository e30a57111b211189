import pytest

from cogsep import ConstellationSpec, ConstraintSet, Scenario, Scheme, SensingModel
from cogsep.presets import default_sensing, gaussian_equivalent_mixture, default_mixture

P_4DB = 10.0 ** 0.4


@pytest.fixture
def mixture():
    return default_mixture()


@pytest.fixture
def gaussian_mix():
    return gaussian_equivalent_mixture()


@pytest.fixture
def sensing():
    return default_sensing()


def make_scenario(scheme=Scheme.SSS, modulation=(2, 2), p0=P_4DB, p1=None,
                  sensing=None, noise_variance=0.01, mixture=None,
                  constraints=None, power_policy="fixed"):
    """Assemble a scenario around the default operating point."""
    sensing = sensing or default_sensing()
    mixture = mixture or default_mixture()
    mi, mq = modulation
    spec_idle = ConstellationSpec(mi, mq, p0)
    spec_busy = None
    if scheme is Scheme.SSS:
        spec_busy = ConstellationSpec(mi, mq, p0 if p1 is None else p1)
    return Scenario(
        scheme=scheme,
        spec_idle=spec_idle,
        spec_busy=spec_busy,
        sensing=sensing,
        noise_variance=noise_variance,
        interference=mixture,
        constraints=constraints or ConstraintSet(peak_power=P_4DB,
                                                 avg_interference=0.1),
        power_policy=power_policy,
    )
