"""
Closed-form fidelities for the noisy two-qubit Deutsch-Jozsa circuit.

With RZ phases (phi_0, phi_1, phi_2) at the three slots, the query qubit
ends in the correct state with probability ``cos^2((phi_0 + phi_1)/2)``.
The last phase sits right before a computational-basis measurement and drops
out. For OU phases the sum theta = phi_0 + phi_1 is zero-mean Gaussian with

    V = Var(theta) = 2 (dt sigma)^2 (1 + exp(-dt/tau_c)),

hence E[F] = (1 + exp(-V/2)) / 2 and
E[F^2] = (1 + 2 exp(-V/2) + (1 + exp(-2V)) / 2) / 4.

Phase damping multiplies the query-qubit coherence by sqrt(1 - lambda) at
each slot; two slots precede the final H, giving F = 1 - lambda/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ArgumentError
from .ou_noise import OUParams


@dataclass(frozen=True)
class AnalyticPrediction:
    mean_fidelity: float
    per_trajectory_std: float
    second_moment: float

    def predicted_se(self, n_traj: int, n_shots: int | None = None) -> float:
        """Standard error of an ``n_traj``-trajectory mean.

        With ``n_shots`` given, each trajectory's fidelity is a binomial
        frequency and the shot variance E[F(1-F)]/n_shots is added to the
        trajectory spread.
        """
        var = self.per_trajectory_std**2
        if n_shots is not None:
            var += (self.mean_fidelity - self.second_moment) / n_shots
        return math.sqrt(var / n_traj)


def phase_sum_variance(params: OUParams) -> float:
    s2 = (params.dt * params.sigma_ou) ** 2
    return 2.0 * s2 * (1.0 + params.decay)


def fidelity_from_variance(v: float) -> AnalyticPrediction:
    c1 = math.exp(-v / 2.0)
    c2 = math.exp(-2.0 * v)
    mean = (1.0 + c1) / 2.0
    second = (1.0 + 2.0 * c1 + (1.0 + c2) / 2.0) / 4.0
    std = math.sqrt(max(second - mean * mean, 0.0))
    return AnalyticPrediction(mean, std, second)


def ou_fidelity(params: OUParams) -> AnalyticPrediction:
    return fidelity_from_variance(phase_sum_variance(params))


def white_limit_fidelity(params: OUParams) -> float:
    """Mean fidelity for independent slot phases (tau_c -> 0)."""
    return (1.0 + math.exp(-((params.dt * params.sigma_ou) ** 2))) / 2.0


def markovian_fidelity(lambda_pd: float) -> float:
    if not 0.0 <= lambda_pd <= 1.0:
        raise ArgumentError(f"lambda_pd must be in [0, 1], got {lambda_pd}")
    return 1.0 - lambda_pd / 2.0
