"""Quantum delta-kicked rotor on a momentum ladder.

A plane wave with momentum ``p0`` (2-photon recoils) only couples to the
sites ``n + beta`` with ``beta = p0 - round(p0)``, so each thermal trajectory
lives on its own integer ladder. One kick multiplies by ``exp(i k cos phi)``
(``k = kappa/kbar``), which shifts the ladder with amplitudes ``i^m J_m(k)``;
free evolution over one period multiplies site ``n`` by
``exp(-i kbar (n + beta)^2 / 2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .ensemble import (EnergyRecord, EnsembleSpec, MomentumEnsemble, energy_from_momenta,
                       map_blocks, sample_initial_conditions)
from .errors import InvalidParameterError, InvalidStateError, TruncationError
from .params import RotorParams

TAIL_TOL = 1e-10
NORM_TOL = 1e-9
MAX_HALFWIDTH = 1 << 14


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Amplitudes ``c_n`` for ``n = n_min .. n_max`` at quasimomentum ``beta``."""

    beta: float
    n_min: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if not -0.5 <= self.beta < 0.5:
            raise InvalidStateError(f"beta must lie in [-0.5, 0.5), got {self.beta!r}")

    @property
    def n_max(self) -> int:
        return self.n_min + len(self.amplitudes) - 1

    @property
    def momenta(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1) + self.beta

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    @property
    def tail_mass(self) -> float:
        a = self.amplitudes
        return float(abs(a[0]) ** 2 + abs(a[-1]) ** 2)


def split_momentum(p0):
    """``p0 = n0 + beta`` with ``n0 = floor(p0 + 1/2)`` and ``beta`` in [-0.5, 0.5)."""
    n0 = np.floor(np.asarray(p0) + 0.5)
    return n0, np.asarray(p0) - n0


def init_plane_wave(p0: float, ladder_halfwidth: int = 32) -> QuantumState:
    if ladder_halfwidth < 1:
        raise InvalidParameterError("ladder_halfwidth must be >= 1")
    n0, beta = split_momentum(p0)
    amps = np.zeros(2 * ladder_halfwidth + 1, dtype=np.complex128)
    amps[ladder_halfwidth] = 1.0
    return QuantumState(float(beta), int(n0) - ladder_halfwidth, amps)


def _trim(state: QuantumState, floor: float = 1e-40) -> QuantumState:
    weight = np.abs(state.amplitudes) ** 2
    keep = np.nonzero(weight > floor)[0]
    if keep.size == 0:
        return state
    lo, hi = keep[0], keep[-1]
    # keep one empty site on each side so the tail check stays meaningful
    lo = max(lo - 1, 0)
    hi = min(hi + 1, len(weight) - 1)
    return QuantumState(state.beta, state.n_min + int(lo), state.amplitudes[lo:hi + 1].copy())


def _padded(state: QuantumState, pad: int) -> QuantumState:
    if len(state.amplitudes) + 2 * pad > 2 * MAX_HALFWIDTH + 1:
        raise TruncationError("momentum ladder would exceed the maximum size")
    amps = np.pad(state.amplitudes, pad)
    return QuantumState(state.beta, state.n_min - pad, amps)


def _check_tails(state: QuantumState) -> QuantumState:
    if state.tail_mass >= TAIL_TOL:
        raise TruncationError(f"ladder tail mass {state.tail_mass:.3g} exceeds {TAIL_TOL}")
    return state


def apply_kick(state: QuantumState, kick_ratio: float) -> QuantumState:
    """Apply ``exp(i k cos phi)``; the ladder is widened to hold the result."""
    if kick_ratio == 0:
        return state
    state = _padded(state, kernels.band_halfwidth(kick_ratio) + 1)
    amps = kernels.kick(state.amplitudes[None, :], kick_ratio)[0]
    out = QuantumState(state.beta, state.n_min, amps)
    return _trim(_check_tails(out))


def apply_free(state: QuantumState, kbar: float, duration: float = 1.0) -> QuantumState:
    """Free evolution over ``duration`` kicking periods."""
    if not kbar > 0:
        raise InvalidParameterError(f"kbar must be positive, got {kbar!r}")
    amps = state.amplitudes * kernels.free_phases(state.momenta, kbar, duration)
    return QuantumState(state.beta, state.n_min, amps)


def energy_of_state(state: QuantumState) -> float:
    """``<p^2>/2`` in 2-photon recoil units."""
    norm = state.norm
    if abs(norm - 1.0) > 1e-6:
        raise InvalidStateError(f"state is not normalised (norm={norm:.8g})")
    return 0.5 * float(np.sum(np.abs(state.amplitudes) ** 2 * state.momenta**2))


# ---------------------------------------------------------------------------
# Batched evolution of many plane waves on a common relative ladder
# ---------------------------------------------------------------------------

def default_halfwidth(kick_ratio: float, n_kicks: int) -> int:
    return math.ceil(n_kicks * kick_ratio) + 32


def ladder_batch(p0, halfwidth: int):
    """Initial amplitudes and site momenta for plane waves at ``p0``.

    Row ``b`` holds sites ``n0_b - W .. n0_b + W``.
    """
    n0, beta = split_momentum(np.asarray(p0, dtype=np.float64))
    m = np.arange(-halfwidth, halfwidth + 1)
    momenta = (n0[:, None] + m) + beta[:, None]
    amps = np.zeros(momenta.shape, dtype=np.complex128)
    amps[:, halfwidth] = 1.0
    return amps, momenta


def check_batch(amps) -> None:
    weight = np.abs(amps) ** 2
    tail = float(np.max(weight[:, 0] + weight[:, -1]))
    drift = float(np.max(np.abs(weight.sum(axis=1) - 1.0)))
    if tail >= TAIL_TOL or drift >= NORM_TOL:
        raise TruncationError(f"ladder too narrow: tail mass {tail:.3g}, norm drift {drift:.3g}")


def batch_second_moment(amps, momenta) -> np.ndarray:
    return np.sum(np.abs(amps) ** 2 * momenta**2, axis=1)


def delta_block(p0, kbar: float, kick_ratio: float, n_kicks: int, halfwidth: int):
    """Per-trajectory ``<p^2>`` after ``n_kicks`` delta kicks."""
    amps, momenta = ladder_batch(p0, halfwidth)
    if n_kicks > 0 and kick_ratio > 0:
        free = kernels.free_phases(momenta, kbar, 1.0)
        for i in range(n_kicks):
            if i:
                amps *= free
            amps = kernels.kick(amps, kick_ratio)
            check_batch(amps)
    return batch_second_moment(amps, momenta)


def run_with_widening(block_fn, spec: EnsembleSpec, halfwidth: int, workers=None) -> np.ndarray:
    """Run ``block_fn(p0, halfwidth)`` over the ensemble, doubling the ladder
    half-width until no trajectory reaches the ladder ends."""
    while True:
        def one(start, stop, w=halfwidth):
            _, p0 = sample_initial_conditions(spec, start, stop)
            return block_fn(p0, w)
        try:
            return map_blocks(one, spec.n_traj, workers)
        except TruncationError:
            if 2 * halfwidth > MAX_HALFWIDTH:
                raise
            halfwidth *= 2


def evolve_delta_ensemble(spec: EnsembleSpec, params: RotorParams, n_kicks: int,
                          workers: int | None = None) -> MomentumEnsemble:
    if n_kicks < 0:
        raise InvalidParameterError(f"n_kicks must be >= 0, got {n_kicks}")
    if spec.sigma_p != params.sigma_p:
        raise InvalidParameterError("ensemble and params disagree on sigma_p")
    k = params.kick_ratio
    p2 = run_with_widening(
        lambda p0, w: delta_block(p0, params.kbar, k, n_kicks, w),
        spec, default_halfwidth(k, n_kicks), workers)
    return MomentumEnsemble(np.sqrt(p2), "quantum_delta", n_kicks)


def simulate_delta_ensemble(spec: EnsembleSpec, params: RotorParams, n_kicks: int,
                            workers: int | None = None) -> EnergyRecord:
    """Thermal-ensemble energy after ``n_kicks`` delta kicks.

    Energy is taken straight after the last kick (free evolution does not
    change it), so ``n_kicks`` kicks are separated by ``n_kicks - 1`` free
    periods.
    """
    ens = evolve_delta_ensemble(spec, params, n_kicks, workers)
    energy, err = energy_from_momenta(ens)
    return EnergyRecord(params.kbar, params.kick_ratio, params.sigma_p, n_kicks,
                        "quantum_delta", energy, err, spec.n_traj, spec.seed)
