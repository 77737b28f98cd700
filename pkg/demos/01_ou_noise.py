"""
Ornstein-Uhlenbeck phase noise
==============================

Sample a long OU trajectory and compare its autocorrelation with
exp(-m dt / tau_c). At dt = tau_c the exact update still reproduces
exp(-1); an Euler-Maruyama step would give 1 - dt/tau_c = 0.
"""

import math

import numpy as np

from djdephasing.ou_noise import OUParams, estimate_autocorrelation, generate_trajectory, phases_from_trajectory

rng = np.random.default_rng(1)

# %%
# A strongly correlated process: tau_c = 2, dt = 0.1
params = OUParams(sigma_ou=5.0, tau_c=2.0, dt=0.1)
traj = generate_trajectory(params, 100_000, rng)
print(f"sample variance {traj.values.var():.3f}  (sigma^2 = {params.sigma_ou**2})")
for m in (1, 5, 10, 20):
    est = estimate_autocorrelation(traj.values, m)
    print(f"lag {m:>2}: {est:.4f}   theory {math.exp(-m * params.dt / params.tau_c):.4f}")

# %%
# The coarse step dt = tau_c
coarse = OUParams(sigma_ou=5.0, tau_c=0.1, dt=0.1)
x = generate_trajectory(coarse, 100_000, rng).values
print(f"\ndt = tau_c: lag-1 acf {estimate_autocorrelation(x, 1):.4f}, exp(-1) = {math.exp(-1):.4f}, Euler 0")

# %%
# Phases injected into the circuit are nu_k * dt
phi = phases_from_trajectory(generate_trajectory(params, 3, rng))
print("\none set of circuit phases (rad):", np.round(phi, 4))
