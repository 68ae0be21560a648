"""Early-time dynamics of the atom-optics kicked rotor.

Classical standard-map ensembles, exact quantum delta-kick and
rectangular-pulse evolution on momentum ladders, closed-form two-kick
energies, and deterministic parallel sweeps over kbar.
"""

from .analytic import (AnalyticInputs, energy_one_kick, energy_two_kicks,
                       energy_two_kicks_broad, kbar_critical, kbar_critical_si,
                       quasilinear_rate)
from .classical import (ClassicalState, evolve_classical_ensemble, inverse_map_step,
                        phase_portrait, standard_map_step)
from .ensemble import (EnergyRecord, EnsembleSpec, MomentumEnsemble, energy_from_momenta,
                       estimate_kick_ratio_difference, estimate_kick_ratio_plateau,
                       sample_initial_conditions, subtract_thermal)
from .errors import (CalibrationError, ConvergenceError, InvalidParameterError,
                     InvalidStateError, KickedRotorError, PulseTooLongError, SchemaError,
                     TruncationError)
from .params import (CAESIUM, PhysicalConstants, RotorParams, kbar_from_period,
                     momentum_from_scaled, period_from_kbar, pulse_fraction, scaled_momentum)
from .pulse import PulseSchedule, apply_pulse_period, simulate_pulse_ensemble, traversal_fraction
from .quantum import (QuantumState, apply_free, apply_kick, energy_of_state, init_plane_wave,
                      simulate_delta_ensemble)
from .sweep import SweepConfig, run_portrait, run_sweep

__version__ = "0.1.0"

__all__ = [
    "AnalyticInputs", "energy_one_kick", "energy_two_kicks", "energy_two_kicks_broad",
    "kbar_critical", "kbar_critical_si", "quasilinear_rate",
    "ClassicalState", "evolve_classical_ensemble", "inverse_map_step", "phase_portrait",
    "standard_map_step",
    "EnergyRecord", "EnsembleSpec", "MomentumEnsemble", "energy_from_momenta",
    "estimate_kick_ratio_difference", "estimate_kick_ratio_plateau",
    "sample_initial_conditions", "subtract_thermal",
    "CalibrationError", "ConvergenceError", "InvalidParameterError", "InvalidStateError",
    "KickedRotorError", "PulseTooLongError", "SchemaError", "TruncationError",
    "CAESIUM", "PhysicalConstants", "RotorParams", "kbar_from_period", "momentum_from_scaled",
    "period_from_kbar", "pulse_fraction", "scaled_momentum",
    "PulseSchedule", "apply_pulse_period", "simulate_pulse_ensemble", "traversal_fraction",
    "QuantumState", "apply_free", "apply_kick", "energy_of_state", "init_plane_wave",
    "simulate_delta_ensemble",
    "SweepConfig", "run_portrait", "run_sweep",
]
