"""
Deutsch-Jozsa with phase errors on the query qubit
==================================================

Build the two-qubit circuit, bind three RZ phases into its noise slots, and
check the success probability against cos^2((phi_0 + phi_1) / 2). The phase
in the last slot never matters.
"""

import math

import numpy as np

from djdephasing.dj_circuit import (
    OracleKind,
    bind_phase_noise,
    build_dj_circuit,
    simulate_statevector,
    success_probability,
)

# %%
circuit = build_dj_circuit(OracleKind.BALANCED_IDENTITY)
for op in circuit.ops:
    print(op)

# %%
# Noiseless runs for every oracle
for oracle in OracleKind:
    p = success_probability(simulate_statevector(bind_phase_noise(build_dj_circuit(oracle), [0, 0, 0])), oracle)
    print(f"{oracle.value:<18} success {p:.12f}")

# %%
rng = np.random.default_rng(0)
print("\n   phi0     phi1     phi2   simulated  cos^2((phi0+phi1)/2)")
for phi in rng.normal(scale=0.8, size=(5, 3)):
    p = success_probability(simulate_statevector(bind_phase_noise(circuit, phi)), OracleKind.BALANCED_IDENTITY)
    print(f"{phi[0]:7.3f}  {phi[1]:7.3f}  {phi[2]:7.3f}   {p:.6f}   {math.cos((phi[0] + phi[1]) / 2) ** 2:.6f}")
