"""
Monte Carlo harness for fidelity sweeps.

Every OU trajectory gets its own random stream, derived from
``(master_seed, sigma index, tau index, trajectory index)`` through
``numpy.random.SeedSequence``. Results therefore do not depend on how the
grid points are scheduled across worker processes, and any single trajectory
can be replayed with :func:`trajectory_rng`.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import analytic
from .dj_circuit import (
    NUM_QUBITS,
    QUERY,
    OracleKind,
    bind_phase_noise,
    build_dj_circuit,
    expected_outcome,
    simulate_density,
    simulate_phase_batch,
    simulate_statevector,
    success_probability,
)
from .errors import ArgumentError
from .noise_models import NUM_NOISE_POINTS, lambda_for_sigma, phase_damping_kraus, sample_ou_phases
from .ou_noise import DEFAULT_DT, OUParams
from .quantum_state import qubit_marginal

PAPER_SIGMAS = (1.0, 2.0, 3.0, 4.0, 5.0)
PAPER_TAUS = (0.1, 0.5, 1.0, 2.0, 5.0, 10.0)
REFINED_EXTRA_TAUS = (1.5, 2.5, 3.0, 4.0, 6.0, 7.0, 8.0)
REFINED_SIGMAS = (4.0, 5.0)
PAPER_N_TRAJ = 100
PAPER_N_SHOTS = 1024

_OU_STREAM = 0
_MARKOV_STREAM = 1


class Model(enum.Enum):
    OU = "ou"
    MARKOVIAN = "markovian"
    BOTH = "both"


@dataclass(frozen=True)
class SweepConfig:
    sigma_values: tuple[float, ...]
    tau_c_values: tuple[float, ...] = PAPER_TAUS
    model: Model = Model.BOTH
    oracle: OracleKind = OracleKind.BALANCED_IDENTITY
    dt: float = DEFAULT_DT
    n_traj: int = PAPER_N_TRAJ
    n_shots: int = PAPER_N_SHOTS
    master_seed: int = 0
    exact_mode: bool = False

    def __post_init__(self):
        object.__setattr__(self, "sigma_values", tuple(float(s) for s in self.sigma_values))
        object.__setattr__(self, "tau_c_values", tuple(float(t) for t in self.tau_c_values))
        if self.n_traj < 1:
            raise ArgumentError(f"n_traj must be >= 1, got {self.n_traj}")
        if self.n_shots < 1:
            raise ArgumentError(f"n_shots must be >= 1, got {self.n_shots}")
        if any(not s >= 0 for s in self.sigma_values):
            raise ArgumentError(f"sigma values must be >= 0, got {self.sigma_values}")
        if any(not t > 0 for t in self.tau_c_values):
            raise ArgumentError(f"tau_c values must be > 0, got {self.tau_c_values}")
        if not self.dt > 0:
            raise ArgumentError(f"dt must be > 0, got {self.dt}")
        if not 0 <= self.master_seed < 2**64:
            raise ArgumentError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}")

    @property
    def runs_ou(self) -> bool:
        return self.model in (Model.OU, Model.BOTH)

    @property
    def runs_markovian(self) -> bool:
        return self.model in (Model.MARKOVIAN, Model.BOTH)


@dataclass(frozen=True)
class FidelityRecord:
    model: Model
    sigma_ou: float
    tau_c: float | None
    dt: float
    n_traj: int
    n_shots: int
    seed: int
    fidelity_mean: float
    fidelity_se: float
    analytic_mean: float
    exact_mode: bool = field(default=False, compare=False)


def trajectory_rng(master_seed: int, sigma_index: int, tau_index: int, traj_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(master_seed, spawn_key=(_OU_STREAM, sigma_index, tau_index, traj_index))
    return np.random.Generator(np.random.PCG64(ss))


def markovian_rng(master_seed: int, sigma_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(master_seed, spawn_key=(_MARKOV_STREAM, sigma_index))
    return np.random.Generator(np.random.PCG64(ss))


def sample_shots(p: float, n_shots: int, rng: np.random.Generator) -> int:
    """Number of successes in ``n_shots`` measurements with success probability ``p``."""
    if not -1e-12 <= p <= 1.0 + 1e-12:
        raise ArgumentError(f"probability {p} outside [0, 1]")
    if n_shots < 1:
        raise ArgumentError(f"n_shots must be >= 1, got {n_shots}")
    return int(rng.binomial(n_shots, min(max(p, 0.0), 1.0)))


def run_ou_trajectory(
    oracle: OracleKind,
    params: OUParams,
    rng: np.random.Generator,
    phases: Sequence[float] | None = None,
) -> float:
    """Exact success probability of one noisy execution.

    ``phases`` overrides the sampled OU phases (``rng`` is then unused).
    """
    if phases is None:
        phases = sample_ou_phases(params, NUM_NOISE_POINTS, rng)
    circuit = bind_phase_noise(build_dj_circuit(oracle), phases)
    return success_probability(simulate_statevector(circuit), oracle)


def mean_and_se(values: Sequence[float]) -> tuple[float, float]:
    """Mean and standard error (n-1 denominator), summed in index order with fsum."""
    n = len(values)
    mean = math.fsum(values) / n
    if n < 2:
        return mean, 0.0
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var / n)


def ou_trajectory_fidelities(
    config: SweepConfig, sigma: float, tau_c: float, sigma_index: int, tau_index: int
) -> tuple[np.ndarray, np.ndarray]:
    """Exact and reported per-trajectory fidelities for one grid point.

    The second array equals the first in exact mode, otherwise it holds the
    binomial shot frequencies.
    """
    params = OUParams(sigma, tau_c, config.dt)
    outcome = expected_outcome(config.oracle)
    rngs = [trajectory_rng(config.master_seed, sigma_index, tau_index, t) for t in range(config.n_traj)]
    phases = np.stack([sample_ou_phases(params, NUM_NOISE_POINTS, g) for g in rngs])
    amps = simulate_phase_batch(build_dj_circuit(config.oracle), phases)
    p = np.clip(qubit_marginal(np.abs(amps) ** 2, QUERY, NUM_QUBITS)[outcome], 0.0, 1.0)
    if config.exact_mode:
        return p, p
    counts = np.array([sample_shots(float(pt), config.n_shots, g) for pt, g in zip(p, rngs)])
    return p, counts / config.n_shots


def _grid_index(values: tuple[float, ...], x: float, name: str) -> int:
    try:
        return values.index(float(x))
    except ValueError:
        raise ArgumentError(f"{name}={x} is not in the configured grid {values}") from None


def run_ou_point(config: SweepConfig, sigma: float, tau_c: float) -> FidelityRecord:
    i = _grid_index(config.sigma_values, sigma, "sigma")
    j = _grid_index(config.tau_c_values, tau_c, "tau_c")
    _, fid = ou_trajectory_fidelities(config, float(sigma), float(tau_c), i, j)
    mean, se = mean_and_se(fid.tolist())
    return FidelityRecord(
        model=Model.OU,
        sigma_ou=float(sigma),
        tau_c=float(tau_c),
        dt=config.dt,
        n_traj=config.n_traj,
        n_shots=config.n_shots,
        seed=config.master_seed,
        fidelity_mean=mean,
        fidelity_se=se,
        analytic_mean=analytic.ou_fidelity(OUParams(sigma, tau_c, config.dt)).mean_fidelity,
        exact_mode=config.exact_mode,
    )


def markovian_exact_fidelity(oracle: OracleKind, lambda_pd: float) -> float:
    rho = simulate_density(build_dj_circuit(oracle), phase_damping_kraus(lambda_pd))
    return success_probability(rho, oracle)


def run_markovian_point(config: SweepConfig, sigma: float) -> FidelityRecord:
    """Phase damping at all three slots.

    Exact mode reads the success probability off the final density matrix.
    Sampled mode pools ``n_shots * n_traj`` shots into one binomial draw.
    """
    i = _grid_index(config.sigma_values, sigma, "sigma")
    lam = lambda_for_sigma(float(sigma), config.dt)
    p = markovian_exact_fidelity(config.oracle, lam)
    if config.exact_mode:
        mean, se = p, 0.0
    else:
        total = config.n_shots * config.n_traj
        mean = sample_shots(p, total, markovian_rng(config.master_seed, i)) / total
        se = math.sqrt(mean * (1.0 - mean) / total)
    return FidelityRecord(
        model=Model.MARKOVIAN,
        sigma_ou=float(sigma),
        tau_c=None,
        dt=config.dt,
        n_traj=config.n_traj,
        n_shots=config.n_shots,
        seed=config.master_seed,
        fidelity_mean=mean,
        fidelity_se=se,
        analytic_mean=analytic.markovian_fidelity(lam),
        exact_mode=config.exact_mode,
    )


def _run_task(task):
    config, kind, args = task
    if kind == "ou":
        return run_ou_point(config, *args)
    return run_markovian_point(config, *args)


def sweep_tasks(config: SweepConfig) -> list:
    tasks = []
    if config.runs_ou:
        tasks += [(config, "ou", (s, t)) for s in config.sigma_values for t in config.tau_c_values]
    if config.runs_markovian:
        tasks += [(config, "markovian", (s,)) for s in config.sigma_values]
    return tasks


def run_sweep(config: SweepConfig, workers: int = 1) -> list[FidelityRecord]:
    """All grid points: OU records in sigma-major order, then Markovian records."""
    tasks = sweep_tasks(config)
    if workers <= 1 or len(tasks) <= 1:
        return [_run_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_task, tasks))


def paper_main_config(**overrides) -> SweepConfig:
    return SweepConfig(sigma_values=PAPER_SIGMAS, tau_c_values=PAPER_TAUS, **overrides)


def paper_refined_config(**overrides) -> SweepConfig:
    taus = tuple(sorted(PAPER_TAUS + REFINED_EXTRA_TAUS))
    return SweepConfig(sigma_values=REFINED_SIGMAS, tau_c_values=taus, **overrides)
