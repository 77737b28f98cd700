import math
from dataclasses import replace

import numpy as np
import pytest

from djdephasing.analytic import ou_fidelity
from djdephasing.dj_circuit import OracleKind
from djdephasing.errors import ArgumentError
from djdephasing.experiment import (
    Model,
    SweepConfig,
    mean_and_se,
    ou_trajectory_fidelities,
    paper_main_config,
    paper_refined_config,
    run_markovian_point,
    run_ou_point,
    run_ou_trajectory,
    run_sweep,
    sample_shots,
    trajectory_rng,
)
from djdephasing.ou_noise import OUParams

BAL = OracleKind.BALANCED_IDENTITY


def test_sample_shots_edges(rng):
    assert sample_shots(1.0, 1024, rng) == 1024
    assert sample_shots(0.0, 1024, rng) == 0
    assert sample_shots(1.0 + 1e-13, 10, rng) == 10
    with pytest.raises(ArgumentError):
        sample_shots(1.01, 10, rng)
    with pytest.raises(ArgumentError):
        sample_shots(-0.01, 10, rng)


def test_sample_shots_moments(rng):
    k = np.array([sample_shots(0.5, 1024, rng) for _ in range(20_000)])
    assert k.mean() == pytest.approx(512, abs=3 * 16 / math.sqrt(k.size))
    assert k.std(ddof=1) == pytest.approx(16, rel=0.03)


def test_trajectory_zero_noise(rng):
    assert run_ou_trajectory(BAL, OUParams(0.0, 1.0), rng) == pytest.approx(1.0, abs=1e-15)


def test_trajectory_phase_hook(rng):
    assert run_ou_trajectory(BAL, OUParams(5.0, 1.0), rng, phases=[math.pi, 0, 0]) == pytest.approx(0, abs=1e-12)


def test_trajectory_mean_matches_closed_form():
    p = OUParams(5.0, 1.0)
    g = np.random.default_rng(31)
    f = [run_ou_trajectory(BAL, p, g) for _ in range(10_000)]
    assert np.mean(f) == pytest.approx(0.8106, abs=3 * 0.217 / 100)


def test_batched_point_matches_single_trajectory_path():
    cfg = SweepConfig(sigma_values=(3.0,), tau_c_values=(2.0,), n_traj=50, exact_mode=True, master_seed=5)
    exact, _ = ou_trajectory_fidelities(cfg, 3.0, 2.0, 0, 0)
    single = [run_ou_trajectory(BAL, OUParams(3.0, 2.0), trajectory_rng(5, 0, 0, t)) for t in range(50)]
    assert exact.tolist() == single


def test_point_zero_sigma():
    cfg = SweepConfig(sigma_values=(0.0,), tau_c_values=(1.0,))
    r = run_ou_point(cfg, 0.0, 1.0)
    assert r.fidelity_mean == 1.0 and r.fidelity_se == 0.0 and r.analytic_mean == 1.0
    r = run_ou_point(replace(cfg, exact_mode=True), 0.0, 1.0)
    assert r.fidelity_mean == pytest.approx(1.0, abs=1e-15) and r.fidelity_se < 1e-15


def test_point_not_in_grid():
    with pytest.raises(ArgumentError):
        run_ou_point(SweepConfig(sigma_values=(1.0,), tau_c_values=(1.0,)), 2.0, 1.0)


def test_point_paper_scale_sigma5():
    cfg = paper_main_config(master_seed=2024)
    r = run_ou_point(cfg, 5.0, 1.0)
    pred = ou_fidelity(OUParams(5.0, 1.0))
    assert abs(r.fidelity_mean - 0.8106) < 3 * pred.predicted_se(100, 1024)
    assert r.n_traj == 100 and r.n_shots == 1024


def test_point_large_sigma2():
    cfg = paper_main_config(master_seed=99, n_traj=10_000)
    r = run_ou_point(cfg, 2.0, 1.0)
    assert r.fidelity_mean == pytest.approx(0.9633, abs=0.004)


def test_se_definition():
    cfg = SweepConfig(sigma_values=(4.0,), tau_c_values=(0.5,), n_traj=200, master_seed=8)
    _, fid = ou_trajectory_fidelities(cfg, 4.0, 0.5, 0, 0)
    r = run_ou_point(cfg, 4.0, 0.5)
    assert r.fidelity_se == pytest.approx(np.std(fid, ddof=1) / math.sqrt(200), rel=1e-12)
    assert r.fidelity_mean == pytest.approx(np.mean(fid), rel=1e-14)


def test_mean_and_se_small():
    assert mean_and_se([0.7]) == (0.7, 0.0)
    m, se = mean_and_se([1.0, 0.0])
    assert m == 0.5 and se == pytest.approx(0.5)


def test_shot_noise_layering():
    cfg = SweepConfig(sigma_values=(1.0,), tau_c_values=(0.1,), n_traj=40_000, master_seed=77)
    exact, sampled = ou_trajectory_fidelities(cfg, 1.0, 0.1, 0, 0)
    binom = np.mean(exact * (1 - exact)) / cfg.n_shots
    assert np.var(sampled - exact, ddof=1) == pytest.approx(binom, rel=0.05)
    excess = np.var(sampled, ddof=1) - np.var(exact, ddof=1)
    assert excess > 0
    assert excess == pytest.approx(binom, rel=0.2)


def test_sampled_exact_share_trajectories():
    cfg = SweepConfig(sigma_values=(5.0,), tau_c_values=(1.0,), n_traj=30, master_seed=3)
    e1, _ = ou_trajectory_fidelities(cfg, 5.0, 1.0, 0, 0)
    e2, _ = ou_trajectory_fidelities(replace(cfg, exact_mode=True), 5.0, 1.0, 0, 0)
    assert e1.tobytes() == e2.tobytes()


@pytest.mark.parametrize("sigma, expected", [(5.0, 0.875), (1.0, 0.995), (0.0, 1.0)])
def test_markovian_exact(sigma, expected):
    cfg = SweepConfig(sigma_values=(sigma,), model=Model.MARKOVIAN, exact_mode=True)
    r = run_markovian_point(cfg, sigma)
    assert abs(r.fidelity_mean - expected) < 1e-12 and r.fidelity_se == 0.0 and r.tau_c is None


def test_markovian_sampled():
    cfg = SweepConfig(sigma_values=(5.0,), model=Model.MARKOVIAN, master_seed=1)
    r = run_markovian_point(cfg, 5.0)
    total = 1024 * 100
    assert r.fidelity_mean * total == int(r.fidelity_mean * total)
    assert abs(r.fidelity_mean - 0.875) < 4 * math.sqrt(0.875 * 0.125 / total)


def test_sweep_counts():
    recs = run_sweep(paper_main_config(n_traj=5))
    assert len(recs) == 35
    assert [r.model for r in recs].count(Model.OU) == 30
    assert [(r.sigma_ou, r.tau_c) for r in recs[:7]] == [
        (1.0, 0.1), (1.0, 0.5), (1.0, 1.0), (1.0, 2.0), (1.0, 5.0), (1.0, 10.0), (2.0, 0.1)
    ]
    markov = SweepConfig(sigma_values=(1, 2, 3, 4, 5), tau_c_values=(), model=Model.MARKOVIAN)
    assert len(run_sweep(markov)) == 5


def test_refined_grid():
    cfg = paper_refined_config()
    assert cfg.sigma_values == (4.0, 5.0)
    assert cfg.tau_c_values == (0.1, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 10.0)


def test_analytic_filled():
    for r in run_sweep(paper_main_config(n_traj=3)):
        if r.model is Model.OU:
            assert r.analytic_mean == ou_fidelity(OUParams(r.sigma_ou, r.tau_c)).mean_fidelity
        else:
            assert r.analytic_mean == pytest.approx(1 - (0.1 * r.sigma_ou) ** 2 / 2)


def test_reproducible_across_workers():
    cfg = SweepConfig(sigma_values=(1.0, 5.0), tau_c_values=(0.1, 2.0), n_traj=200, master_seed=42)
    a = run_sweep(cfg)
    b = run_sweep(cfg)
    c = run_sweep(cfg, workers=3)
    assert a == b == c


def test_individual_trajectory_replay():
    # reversing the trajectory order cannot change any single trajectory
    a = [trajectory_rng(9, 1, 2, t).standard_normal(3).tobytes() for t in range(5)]
    b = [trajectory_rng(9, 1, 2, t).standard_normal(3).tobytes() for t in reversed(range(5))]
    assert a == b[::-1]
    assert len(set(a)) == 5


@pytest.mark.parametrize(
    "kw",
    [
        dict(sigma_values=(1.0,), n_traj=0),
        dict(sigma_values=(1.0,), n_shots=0),
        dict(sigma_values=(-1.0,)),
        dict(sigma_values=(1.0,), tau_c_values=(0.0,)),
        dict(sigma_values=(1.0,), master_seed=-1),
    ],
)
def test_config_invariants(kw):
    with pytest.raises(ArgumentError):
        SweepConfig(**kw)
