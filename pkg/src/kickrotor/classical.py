"""Classical delta-kicked rotor (standard map).

One step is kick then drift::

    rho' = rho - kappa sin(phi)
    phi' = phi + rho'

which is the ordering that makes two steps give
``rho_2 = rho_0 - kappa sin(phi_0) - kappa sin(phi_1)``. Phases are kept
unwrapped during evolution; only portraits reduce them modulo 2 pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .ensemble import EnsembleSpec, MomentumEnsemble, sample_initial_conditions
from .errors import InvalidParameterError
from .params import RotorParams


@dataclass(frozen=True)
class ClassicalState:
    phi: float
    rho: float


def standard_map_step(state: ClassicalState, kappa: float) -> ClassicalState:
    rho = state.rho - kappa * math.sin(state.phi)
    return ClassicalState(state.phi + rho, rho)


def inverse_map_step(state: ClassicalState, kappa: float) -> ClassicalState:
    phi = state.phi - state.rho
    return ClassicalState(phi, state.rho + kappa * math.sin(phi))


def _check(spec: EnsembleSpec, params: RotorParams) -> None:
    if spec.sigma_p != params.sigma_p:
        raise InvalidParameterError(
            f"ensemble sigma_p={spec.sigma_p} disagrees with params sigma_p={params.sigma_p}")


def evolve_classical_ensemble(spec: EnsembleSpec, params: RotorParams,
                              n_kicks: int) -> MomentumEnsemble:
    """Momenta (2-photon recoils) of the sampled ensemble after ``n_kicks`` kicks."""
    if n_kicks < 0:
        raise InvalidParameterError(f"n_kicks must be >= 0, got {n_kicks}")
    _check(spec, params)
    phi0, p0 = sample_initial_conditions(spec)
    _, rho = kernels.standard_map(phi0, params.kbar * p0, params.kappa, n_kicks)
    return MomentumEnsemble(rho / params.kbar, "classical", n_kicks)


def phase_portrait(spec: EnsembleSpec, params: RotorParams, n_iter: int):
    """Points ``(phi mod 2pi, p)`` of every trajectory for iterations 0..n_iter.

    Returns two flat arrays of length ``n_traj * (n_iter + 1)``, ordered by
    iteration and then by trajectory.
    """
    if n_iter < 1:
        raise InvalidParameterError(f"n_iter must be >= 1, got {n_iter}")
    _check(spec, params)
    phi0, p0 = sample_initial_conditions(spec)
    phis, rhos = kernels.standard_map(phi0, params.kbar * p0, params.kappa, n_iter, record=True)
    phi = np.mod(phis, 2.0 * np.pi).ravel()
    # mod can round up to exactly 2 pi for tiny negative inputs
    phi[phi >= 2.0 * np.pi] = 0.0
    return phi, (rhos / params.kbar).ravel()
