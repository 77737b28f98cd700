import math

import numpy as np
import pytest
from scipy import integrate

from djdephasing.analytic import (
    markovian_fidelity,
    ou_fidelity,
    phase_sum_variance,
    white_limit_fidelity,
)
from djdephasing.experiment import PAPER_SIGMAS, PAPER_TAUS, markovian_exact_fidelity
from djdephasing.dj_circuit import OracleKind
from djdephasing.ou_noise import OUParams


def _quadrature_moments(v):
    # E[cos^2(t/2)] and E[cos^4(t/2)] for t ~ N(0, v), by direct integration
    sd = math.sqrt(v)
    pdf = lambda t: math.exp(-t * t / (2 * v)) / math.sqrt(2 * math.pi * v)
    m1 = integrate.quad(lambda t: math.cos(t / 2) ** 2 * pdf(t), -12 * sd, 12 * sd, limit=200)[0]
    m2 = integrate.quad(lambda t: math.cos(t / 2) ** 4 * pdf(t), -12 * sd, 12 * sd, limit=200)[0]
    return m1, math.sqrt(m2 - m1 * m1)


def test_phase_sum_variance_values():
    assert phase_sum_variance(OUParams(0.0, 1.0)) == 0.0
    assert phase_sum_variance(OUParams(5.0, 1.0)) == pytest.approx(0.95242, abs=1e-5)
    assert phase_sum_variance(OUParams(5.0, 1e12)) == pytest.approx(1.0, abs=1e-9)


def test_phase_sum_variance_against_sampled_pairs():
    rng = np.random.default_rng(0)
    n = 1_000_000
    s, rho = 0.5, math.exp(-0.1)
    p0 = s * rng.standard_normal(n)
    p1 = rho * p0 + s * math.sqrt(1 - rho**2) * rng.standard_normal(n)
    v = (p0 + p1).var()
    assert v == pytest.approx(phase_sum_variance(OUParams(5.0, 1.0)), abs=3 * v * math.sqrt(2 / n))


def test_ou_fidelity_values():
    z = ou_fidelity(OUParams(0.0, 1.0))
    assert z.mean_fidelity == 1.0 and z.per_trajectory_std == 0.0
    p = ou_fidelity(OUParams(5.0, 1.0))
    assert p.mean_fidelity == pytest.approx(0.81057, abs=1e-5)
    assert p.per_trajectory_std == pytest.approx(0.21715, abs=1e-5)
    assert ou_fidelity(OUParams(1.0, 0.1)).mean_fidelity == pytest.approx(0.99321, abs=1e-5)
    assert ou_fidelity(OUParams(2.0, 1.0)).mean_fidelity == pytest.approx(0.96332, abs=1e-5)


@pytest.mark.parametrize("sigma", PAPER_SIGMAS)
@pytest.mark.parametrize("tau_c", PAPER_TAUS)
def test_closed_form_against_quadrature(sigma, tau_c):
    p = OUParams(sigma, tau_c)
    pred = ou_fidelity(p)
    m1, sd = _quadrature_moments(phase_sum_variance(p))
    assert pred.mean_fidelity == pytest.approx(m1, abs=1e-10)
    assert pred.per_trajectory_std == pytest.approx(sd, abs=1e-8)


@pytest.mark.slow
@pytest.mark.parametrize("sigma", PAPER_SIGMAS)
@pytest.mark.parametrize("tau_c", PAPER_TAUS)
def test_closed_form_against_brute_force(sigma, tau_c):
    # 10^7 correlated Gaussian phase pairs, F = cos^2((phi0 + phi1)/2)
    p = OUParams(sigma, tau_c)
    rng = np.random.default_rng(hash((sigma, tau_c)) & 0xFFFFFFFF)
    s, rho = p.dt * sigma, p.decay
    total, total2, n = 0.0, 0.0, 0
    for _ in range(10):
        m = 1_000_000
        p0 = s * rng.standard_normal(m)
        p1 = rho * p0 + s * math.sqrt(1 - rho**2) * rng.standard_normal(m)
        f = np.cos((p0 + p1) / 2) ** 2
        total += f.sum()
        total2 += (f * f).sum()
        n += m
    mean = total / n
    se = math.sqrt((total2 / n - mean**2) / n)
    assert abs(mean - ou_fidelity(p).mean_fidelity) < 3 * se + 1e-12


def test_monotone_in_sigma():
    means = [ou_fidelity(OUParams(s, 1.0)).mean_fidelity for s in np.linspace(0, 6, 50)]
    assert all(b < a for a, b in zip(means, means[1:]))


def test_monotone_in_tau():
    means = [ou_fidelity(OUParams(4.0, t)).mean_fidelity for t in np.geomspace(0.01, 100, 50)]
    assert all(b <= a for a, b in zip(means, means[1:]))


def test_limits():
    dt, sigma = 0.1, 5.0
    assert phase_sum_variance(OUParams(sigma, 1e-6)) == pytest.approx(2 * (dt * sigma) ** 2, abs=1e-12)
    assert phase_sum_variance(OUParams(sigma, 1e9)) == pytest.approx(4 * (dt * sigma) ** 2, abs=1e-8)
    assert white_limit_fidelity(OUParams(sigma, 1.0)) == pytest.approx(0.88940, abs=1e-5)


def test_markovian_values():
    assert markovian_fidelity(0.0) == 1.0
    assert markovian_fidelity(0.25) == 0.875
    assert markovian_fidelity(0.09) == pytest.approx(0.955, abs=1e-15)


@pytest.mark.parametrize("lam", [0, 0.01, 0.04, 0.09, 0.16, 0.25, 1])
def test_markovian_matches_density_pipeline(lam):
    for oracle in OracleKind:
        assert abs(markovian_exact_fidelity(oracle, lam) - markovian_fidelity(lam)) < 1e-12


def test_prediction_bounds():
    for s in PAPER_SIGMAS:
        for t in PAPER_TAUS:
            p = ou_fidelity(OUParams(s, t))
            assert 0 <= p.mean_fidelity <= 1 and 0 <= p.per_trajectory_std <= 0.5
