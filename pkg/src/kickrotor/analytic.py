"""Closed-form early-time energies of the delta-kicked rotor.

All energies are in 2-photon recoil units (``<p^2>/2``) and are written in
terms of the fixed ratio ``k = kappa/kbar`` and the spread ``sigma_p``, which
is how an experiment holds them when it scans the period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import InvalidParameterError
from .params import CAESIUM, PhysicalConstants, kbar_from_period


@dataclass(frozen=True)
class AnalyticInputs:
    kbar: float
    kick_ratio: float
    sigma_p: float = 0.0

    def __post_init__(self):
        if not self.kbar > 0:
            raise InvalidParameterError(f"kbar must be positive, got {self.kbar!r}")
        if not self.kick_ratio >= 0:
            raise InvalidParameterError(f"kick_ratio must be >= 0, got {self.kick_ratio!r}")
        if not self.sigma_p >= 0:
            raise InvalidParameterError(f"sigma_p must be >= 0, got {self.sigma_p!r}")

    @property
    def kappa(self) -> float:
        return self.kick_ratio * self.kbar

    @property
    def sigma_rho(self) -> float:
        return self.kbar * self.sigma_p

    @property
    def kappa_q(self) -> float:
        """2 kappa sin(kbar/2)/kbar, evaluated as 2 k sin(kbar/2) (no 0/0)."""
        return 2.0 * self.kick_ratio * math.sin(0.5 * self.kbar)

    @property
    def kappa_2q(self) -> float:
        return 2.0 * self.kick_ratio * math.sin(self.kbar)


def _unpack(inputs, kick_ratio, sigma_p):
    if isinstance(inputs, AnalyticInputs):
        return inputs.kbar, inputs.kick_ratio, inputs.sigma_p
    if kick_ratio is None or sigma_p is None:
        raise TypeError("pass AnalyticInputs or (kbar, kick_ratio, sigma_p)")
    return inputs, kick_ratio, sigma_p


def energy_one_kick(inputs, kick_ratio=None, sigma_p=None) -> float:
    """Quasilinear one-kick energy; independent of kbar."""
    _, k, s = _unpack(inputs, kick_ratio, sigma_p)
    return 0.5 * s**2 + quasilinear_rate(k)


def energy_two_kicks_broad(inputs, kick_ratio=None, sigma_p=None) -> float:
    """Quasilinear two-kick energy ``(sigma_rho^2 + kappa^2) / (2 kbar^2)``."""
    _, k, s = _unpack(inputs, kick_ratio, sigma_p)
    return 0.5 * s**2 + 0.5 * k**2


def energy_two_kicks(inputs, kick_ratio=None, sigma_p=None, *, printed: bool = False):
    """Two-kick energy of a Gaussian thermal ensemble at finite width.

    Accepts ``AnalyticInputs`` or ``(kbar, kick_ratio, sigma_p)``; vectorised
    over ``kbar`` in the second form. The bracket is divided through by ``kbar^2`` so that the ``kbar -> 0`` limit is regular::

        E = 1/2 [ sigma_p^2 + k^2/2 + k^2/2 (1 - J2(kappa_2q) exp(-2 sigma_rho^2))
                  - c k J1(kappa_q) kbar sigma_p^2 exp(-sigma_rho^2/2)
                  + k^2 (J0(kappa_q) - J2(kappa_q)) cos(kbar/2) exp(-sigma_rho^2/2) ]

    with ``c = 2``. That coefficient is what the exact quantum evolution of a
    thermal mixture of plane waves gives (and what the classical average of
    ``rho0 sin(phi1)`` gives for small kbar). ``printed=True`` selects
    ``c = 1``, a variant kept only for comparison.

    The limits are the quasilinear ``sigma_p^2/2 + k^2/2`` for
    ``sigma_rho >> 1`` and the ballistic ``sigma_p^2/2 + k^2`` for
    ``kbar -> 0``.
    """
    kbar, kick_ratio, sigma_p = _unpack(inputs, kick_ratio, sigma_p)
    kb = np.asarray(kbar, dtype=np.float64)
    if np.any(kb <= 0):
        raise InvalidParameterError("kbar must be positive")
    k = float(kick_ratio)
    s2 = float(sigma_p) ** 2
    srho2 = kb**2 * s2
    kq = 2.0 * k * np.sin(0.5 * kb)
    k2q = 2.0 * k * np.sin(kb)
    g = np.exp(-0.5 * srho2)
    c = 1.0 if printed else 2.0
    bracket = (s2 + 0.5 * k**2
               + 0.5 * k**2 * (1.0 - special.jv(2, k2q) * np.exp(-2.0 * srho2))
               - c * k * special.jv(1, kq) * kb * s2 * g
               + k**2 * (special.jv(0, kq) - special.jv(2, kq)) * np.cos(0.5 * kb) * g)
    out = 0.5 * bracket
    return float(out) if out.ndim == 0 else out


def quasilinear_rate(kick_ratio: float) -> float:
    """Energy gained per kick without correlations, ``k^2/4``."""
    if kick_ratio < 0:
        raise InvalidParameterError("kick_ratio must be >= 0")
    return 0.25 * kick_ratio**2


def _sigma_total(kick_ratio: float, sigma_p: float) -> float:
    if kick_ratio < 0 or sigma_p < 0:
        raise InvalidParameterError("kick_ratio and sigma_p must be >= 0")
    # first-kick variance 2 k^2 (hbar k_l)^2 is k^2/2 in 2-photon recoils
    sigma_tot = math.sqrt(sigma_p**2 + 0.5 * kick_ratio**2)
    if sigma_tot == 0:
        raise InvalidParameterError("kbar_crit is undefined for k = sigma_p = 0")
    return sigma_tot


def kbar_critical(kick_ratio: float, sigma_p: float) -> float:
    """kbar below which atoms at the post-kick rms momentum no longer cross a
    full lattice period between kicks: ``2 pi / sigma_tot``."""
    return 2.0 * math.pi / _sigma_total(kick_ratio, sigma_p)


def kbar_critical_si(kick_ratio: float, sigma_p: float,
                     constants: PhysicalConstants = CAESIUM) -> float:
    """Same threshold computed through laboratory units.

    ``T_crit = lambda M / (2 sigma_tot)`` with ``sigma_tot`` in kg m/s, then
    ``kbar = 8 omega_r T_crit``.
    """
    p_si = _sigma_total(kick_ratio, sigma_p) * constants.two_photon_recoil
    t_crit = constants.wavelength * constants.cs_mass / (2.0 * p_si)
    return kbar_from_period(t_crit, constants)
