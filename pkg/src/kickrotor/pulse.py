"""Rectangular kicking pulses of fixed laboratory width.

The pulse occupies the first fraction ``alpha = tau_p/T`` of every period
with potential ``-(kappa/alpha) cos phi``, so its area equals the
delta-kick strength ``kappa``. The rest of the period is free evolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .ensemble import EnergyRecord, EnsembleSpec, MomentumEnsemble, energy_from_momenta
from .errors import ConvergenceError, InvalidParameterError
from .params import RotorParams
from .quantum import (QuantumState, _check_tails, _padded, _trim, apply_free,
                      batch_second_moment, check_batch, default_halfwidth, delta_block,
                      ladder_batch, run_with_widening)

MIN_SUBSTEPS = 64
MAX_SUBSTEPS = 1 << 14
SUBSTEP_RTOL = 1e-4


@dataclass(frozen=True)
class PulseSchedule:
    alpha: float
    n_sub: int
    amplitude: float

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise InvalidParameterError(f"pulse fraction must be in (0, 1], got {self.alpha!r}")
        if self.n_sub < 1:
            raise InvalidParameterError(f"n_sub must be >= 1, got {self.n_sub!r}")

    @classmethod
    def for_params(cls, params: RotorParams, n_sub: int = MIN_SUBSTEPS,
                   alpha: float | None = None) -> "PulseSchedule":
        """Schedule with pulse area ``kappa``; ``alpha`` defaults to ``params.alpha``."""
        alpha = params.alpha if alpha is None else alpha
        return cls(alpha, n_sub, params.kappa / alpha)

    @property
    def area(self) -> float:
        return self.amplitude * self.alpha


def apply_pulse_period(state: QuantumState, params: RotorParams,
                       schedule: PulseSchedule) -> QuantumState:
    """One full period: Strang-split pulse, then free evolution for ``1 - alpha``."""
    kbar = params.kbar
    k_eff = schedule.area / kbar
    if k_eff == 0:
        return apply_free(state, kbar, 1.0)
    state = _padded(state, kernels.band_halfwidth(k_eff) + 8)
    amps = kernels.strang_pulse(state.amplitudes[None, :], state.momenta[None, :], kbar,
                                k_eff, schedule.alpha, schedule.n_sub)[0]
    state = _check_tails(QuantumState(state.beta, state.n_min, amps))
    return _trim(apply_free(state, kbar, 1.0 - schedule.alpha))


def pulse_block(p0, kbar: float, kick_ratio: float, alpha: float, n_sub: int,
                n_kicks: int, halfwidth: int):
    """Per-trajectory ``<p^2>`` after ``n_kicks`` rectangular pulses."""
    amps, momenta = ladder_batch(p0, halfwidth)
    if n_kicks > 0 and kick_ratio > 0:
        rest = kernels.free_phases(momenta, kbar, 1.0 - alpha)
        for i in range(n_kicks):
            if i:
                amps *= rest
            amps = kernels.strang_pulse(amps, momenta, kbar, kick_ratio, alpha, n_sub)
            check_batch(amps)
    return batch_second_moment(amps, momenta)


def _pulse_halfwidth(kick_ratio: float, n_kicks: int) -> int:
    # drift during the pulse adds a little spread on top of the delta-kick width
    return default_halfwidth(kick_ratio, n_kicks) + 8


def evolve_pulse_ensemble(spec: EnsembleSpec, params: RotorParams, n_kicks: int,
                          n_sub: int | None = None, workers: int | None = None):
    """Evolve the thermal ensemble with rectangular pulses.

    With ``n_sub=None`` the substep count starts at 64 and doubles until the
    ensemble energy changes by less than ``SUBSTEP_RTOL`` (relative); the
    finer of the last two runs is returned.

    Returns
    -------
    ensemble : MomentumEnsemble
    n_sub : int
        Substeps per pulse actually used.
    """
    if n_kicks < 0:
        raise InvalidParameterError(f"n_kicks must be >= 0, got {n_kicks}")
    if spec.sigma_p != params.sigma_p:
        raise InvalidParameterError("ensemble and params disagree on sigma_p")
    alpha = params.alpha
    k = params.kick_ratio
    if alpha == 0:
        p2 = run_with_widening(lambda p0, w: delta_block(p0, params.kbar, k, n_kicks, w),
                               spec, default_halfwidth(k, n_kicks), workers)
        return MomentumEnsemble(np.sqrt(p2), "quantum_pulse", n_kicks), 0

    def run(m):
        return run_with_widening(
            lambda p0, w: pulse_block(p0, params.kbar, k, alpha, m, n_kicks, w),
            spec, _pulse_halfwidth(k, n_kicks), workers)

    if n_sub is not None:
        return MomentumEnsemble(np.sqrt(run(n_sub)), "quantum_pulse", n_kicks), n_sub

    m = MIN_SUBSTEPS
    prev = run(m)
    while True:
        if 2 * m > MAX_SUBSTEPS:
            raise ConvergenceError(f"pulse energy not converged at {m} substeps")
        m *= 2
        cur = run(m)
        e_prev, e_cur = np.mean(prev), np.mean(cur)
        if abs(e_cur - e_prev) <= SUBSTEP_RTOL * abs(e_cur) or e_cur == e_prev:
            return MomentumEnsemble(np.sqrt(cur), "quantum_pulse", n_kicks), m
        prev = cur


def simulate_pulse_ensemble(spec: EnsembleSpec, params: RotorParams, n_kicks: int,
                            n_sub: int | None = None,
                            workers: int | None = None) -> EnergyRecord:
    if params.pulse_width is None:
        raise InvalidParameterError("pulse simulations need params.pulse_width")
    ens, _ = evolve_pulse_ensemble(spec, params, n_kicks, n_sub, workers)
    energy, err = energy_from_momenta(ens)
    return EnergyRecord(params.kbar, params.kick_ratio, params.sigma_p, n_kicks,
                        "quantum_pulse", energy, err, spec.n_traj, spec.seed)


def traversal_fraction(p_rms: float, params: RotorParams) -> float:
    """Fraction of a lattice period (lambda/2) crossed during one pulse at ``p_rms``."""
    return params.kbar * p_rms * params.alpha / (2.0 * math.pi)
