"""Fidelity of the two-qubit Deutsch-Jozsa algorithm under correlated dephasing.

Submodules
----------
quantum_state   dense statevector / density-matrix simulation
ou_noise        Ornstein-Uhlenbeck trajectories and estimators
dj_circuit      circuit construction and noise-slot binding
noise_models    OU phase injection and matched phase damping
analytic        closed-form fidelity predictions
experiment      seeded Monte Carlo sweeps
cli             command-line entry point, CSV and plot-series output
"""

from .analytic import AnalyticPrediction, markovian_fidelity, ou_fidelity, phase_sum_variance
from .dj_circuit import OracleKind, bind_phase_noise, build_dj_circuit, expected_outcome
from .experiment import FidelityRecord, Model, SweepConfig, run_ou_point, run_markovian_point, run_sweep
from .noise_models import matched_lambda, phase_damping_kraus, sample_ou_phases
from .ou_noise import OUParams, OUTrajectory, generate_trajectory, phases_from_trajectory

__version__ = "0.1.0"
