"""
Ornstein-Uhlenbeck noise trajectories.

The process obeys

    d nu = -(nu / tau_c) dt + sqrt(2 sigma^2 / tau_c) dW

and is sampled with its exact Gaussian transition,

    nu_{k+1} = nu_k * exp(-dt/tau_c) + sigma * sqrt(1 - exp(-2 dt/tau_c)) * z_k,

starting from the stationary law N(0, sigma^2). Unlike Euler-Maruyama this is
exact for any step size, so the lag-m autocorrelation is exp(-m dt / tau_c)
even when dt is comparable to tau_c.

A random source is a ``numpy.random.Generator``; one standard normal draw is
consumed per trajectory value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError

DEFAULT_DT = 0.1


@dataclass(frozen=True)
class OUParams:
    """Noise strength ``sigma_ou``, correlation time ``tau_c``, step ``dt``.

    ``tau_c`` and ``dt`` share one time unit.
    """

    sigma_ou: float
    tau_c: float
    dt: float = DEFAULT_DT

    def __post_init__(self):
        vals = (self.sigma_ou, self.tau_c, self.dt)
        if not all(math.isfinite(v) for v in vals):
            raise ArgumentError(f"OU parameters must be finite, got {vals}")
        if self.sigma_ou < 0:
            raise ArgumentError(f"sigma_ou must be >= 0, got {self.sigma_ou}")
        if self.tau_c <= 0:
            raise ArgumentError(f"tau_c must be > 0, got {self.tau_c}")
        if self.dt <= 0:
            raise ArgumentError(f"dt must be > 0, got {self.dt}")

    @property
    def decay(self) -> float:
        """One-step autocorrelation exp(-dt/tau_c)."""
        return math.exp(-self.dt / self.tau_c)

    @property
    def diffusion(self) -> float:
        """Standard deviation of the one-step innovation."""
        # -expm1 keeps precision when dt/tau_c is tiny
        return self.sigma_ou * math.sqrt(-math.expm1(-2.0 * self.dt / self.tau_c))


@dataclass(frozen=True)
class OUTrajectory:
    values: np.ndarray = field(repr=False)
    params: OUParams

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 1 or v.size < 1:
            raise ArgumentError("trajectory needs at least one value")
        if not np.all(np.isfinite(v)):
            raise ArgumentError("trajectory values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.values.size


def sample_stationary(params: OUParams, rng: np.random.Generator) -> float:
    return params.sigma_ou * float(rng.standard_normal())


def step(params: OUParams, current: float, rng: np.random.Generator) -> float:
    return current * params.decay + params.diffusion * float(rng.standard_normal())


def generate_trajectory(params: OUParams, length: int, rng: np.random.Generator) -> OUTrajectory:
    """Sample ``length`` consecutive values, the first from the stationary law.

    Consumes exactly ``length`` standard normal draws from ``rng``.
    """
    if length < 1:
        raise ArgumentError(f"length must be >= 1, got {length}")
    z = rng.standard_normal(length)
    values = np.empty(length)
    values[0] = params.sigma_ou * z[0]
    a, b = params.decay, params.diffusion
    for k in range(1, length):
        values[k] = values[k - 1] * a + b * z[k]
    return OUTrajectory(values, params)


def generate_ensemble(params: OUParams, length: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` independent trajectories as an ``(n, length)`` array.

    Row ``i`` equals the ``i``-th of ``n`` successive
    :func:`generate_trajectory` calls on the same ``rng``.
    """
    if length < 1 or n < 1:
        raise ArgumentError(f"length and n must be >= 1, got {length}, {n}")
    z = rng.standard_normal((n, length))
    values = np.empty((n, length))
    values[:, 0] = params.sigma_ou * z[:, 0]
    a, b = params.decay, params.diffusion
    for k in range(1, length):
        values[:, k] = values[:, k - 1] * a + b * z[:, k]
    return values


def phases_from_trajectory(traj: OUTrajectory) -> np.ndarray:
    """Phase error accumulated over each step, ``nu_k * dt`` (radians)."""
    return traj.values * traj.params.dt


def estimate_autocorrelation(samples, lag: int) -> float:
    """Normalized sample autocorrelation at ``lag``.

    Uses the biased estimator: the lag-``lag`` autocovariance summed over
    the overlapping pairs is divided by the full-length sum of squares, both
    after subtracting the sample mean. Lag 0 is exactly 1.
    """
    x = np.asarray(samples, dtype=float)
    if lag < 0:
        raise ArgumentError(f"lag must be >= 0, got {lag}")
    if x.ndim != 1 or x.size <= lag + 1:
        raise ArgumentError(f"need more than {lag + 1} samples for lag {lag}, got {x.size}")
    d = x - x.mean()
    denom = float(np.dot(d, d))
    if denom == 0.0:
        raise ArgumentError("samples have zero variance")
    if lag == 0:
        return 1.0
    return float(np.dot(d[:-lag], d[lag:])) / denom
