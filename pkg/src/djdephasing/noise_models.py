"""
The two dephasing models applied at the circuit's noise slots.

* OU: each circuit execution draws one fresh OU trajectory of
  ``num_noise_points`` values and binds ``nu_k * dt`` as RZ phases.
* Markovian: a phase-damping channel with ``lambda = (dt * sigma)**2``,
  which matches the single-slot coherence loss of the OU phases to first
  order, ``exp(-Var(phi)/2) ~ sqrt(1 - lambda)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, MatchingRangeError
from .ou_noise import OUParams, generate_trajectory, phases_from_trajectory
from .quantum_state import KrausSet

NUM_NOISE_POINTS = 3


@dataclass(frozen=True)
class NoiseModelSpec:
    """Either ``ou`` params or a Markovian ``lambda_pd``; exactly one is set."""

    ou: OUParams | None = None
    lambda_pd: float | None = None
    num_noise_points: int = NUM_NOISE_POINTS

    def __post_init__(self):
        if (self.ou is None) == (self.lambda_pd is None):
            raise ArgumentError("specify exactly one of ou or lambda_pd")
        if self.lambda_pd is not None and not 0.0 <= self.lambda_pd <= 1.0:
            raise ArgumentError(f"lambda_pd must be in [0, 1], got {self.lambda_pd}")
        if self.num_noise_points != NUM_NOISE_POINTS:
            raise ArgumentError(f"num_noise_points is fixed at {NUM_NOISE_POINTS}")

    @property
    def is_markovian(self) -> bool:
        return self.lambda_pd is not None

    @classmethod
    def markovian_matched(cls, params: OUParams) -> NoiseModelSpec:
        return cls(lambda_pd=matched_lambda(params))


def matched_lambda(params: OUParams) -> float:
    """Phase-damping parameter whose coherence loss matches one OU phase slot.

    Raises
    ------
    MatchingRangeError
        If ``(dt * sigma)**2 > 1``; the small-error matching has no valid
        channel there and is not clamped.
    """
    return lambda_for_sigma(params.sigma_ou, params.dt)


def lambda_for_sigma(sigma_ou: float, dt: float) -> float:
    lam = (dt * sigma_ou) ** 2
    if lam > 1.0:
        raise MatchingRangeError(f"matched lambda {lam:.4g} > 1 for sigma={sigma_ou}, dt={dt}")
    return lam


def phase_damping_kraus(lambda_pd: float) -> KrausSet:
    if not 0.0 <= lambda_pd <= 1.0:
        raise ArgumentError(f"lambda_pd must be in [0, 1], got {lambda_pd}")
    e0 = np.diag([1.0, math.sqrt(1.0 - lambda_pd)]).astype(complex)
    e1 = np.diag([0.0, math.sqrt(lambda_pd)]).astype(complex)
    return KrausSet((e0, e1))


def sample_ou_phases(params: OUParams, num_points: int, rng: np.random.Generator) -> np.ndarray:
    """Phases for one noisy execution, from a fresh trajectory."""
    if num_points < 1:
        raise ArgumentError(f"num_points must be >= 1, got {num_points}")
    return phases_from_trajectory(generate_trajectory(params, num_points, rng))
