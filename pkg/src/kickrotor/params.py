"""Caesium constants and conversions between laboratory and scaled units.

Scaled units: time in kicking periods, momentum ``rho = kbar * p`` where
``p`` is the momentum in 2-photon recoils (units of ``2 hbar k_l``) and
``kbar = 8 omega_r T``. Energies are reported as ``<p^2>/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from scipy import constants as _sc

from .errors import InvalidParameterError, PulseTooLongError

CS133_MASS_U = 132.905451931


@dataclass(frozen=True)
class PhysicalConstants:
    """Species constants. Only ``wavelength`` and ``cs_mass`` are free."""

    wavelength: float = 852e-9
    cs_mass: float = CS133_MASS_U * _sc.atomic_mass

    def __post_init__(self):
        if not (self.wavelength > 0 and self.cs_mass > 0):
            raise InvalidParameterError("wavelength and mass must be positive")

    @property
    def k_l(self) -> float:
        return 2.0 * math.pi / self.wavelength

    @property
    def recoil_frequency(self) -> float:
        """omega_r = hbar k_l^2 / (2 M), in rad/s (single-photon recoil)."""
        return _sc.hbar * self.k_l**2 / (2.0 * self.cs_mass)

    @property
    def two_photon_recoil(self) -> float:
        """Momentum unit 2 hbar k_l in kg m/s."""
        return 2.0 * _sc.hbar * self.k_l

    @classmethod
    def from_config(cls, config: Mapping[str, float]) -> "PhysicalConstants":
        """Build from the keys ``wavelength_nm`` and ``cs_mass_kg``.

        Missing keys keep the Caesium defaults; unknown keys are rejected.
        """
        unknown = set(config) - {"wavelength_nm", "cs_mass_kg"}
        if unknown:
            raise InvalidParameterError(f"unknown constant keys: {sorted(unknown)}")
        kwargs = {}
        if "wavelength_nm" in config:
            kwargs["wavelength"] = float(config["wavelength_nm"]) * 1e-9
        if "cs_mass_kg" in config:
            kwargs["cs_mass"] = float(config["cs_mass_kg"])
        return cls(**kwargs)


CAESIUM = PhysicalConstants()

_f_r = CAESIUM.recoil_frequency / (2.0 * math.pi)
if not 2.05e3 <= _f_r <= 2.08e3:  # pragma: no cover - guards edits to the defaults
    raise RuntimeError(f"Caesium recoil frequency {_f_r:.1f} Hz outside 2.05-2.08 kHz")
del _f_r


def kbar_from_period(T: float, constants: PhysicalConstants = CAESIUM) -> float:
    """Effective Planck constant ``8 omega_r T`` for a kicking period ``T`` in s."""
    if not T > 0:
        raise InvalidParameterError(f"kicking period must be positive, got {T!r}")
    return 8.0 * constants.recoil_frequency * T


def period_from_kbar(kbar: float, constants: PhysicalConstants = CAESIUM) -> float:
    if not kbar > 0:
        raise InvalidParameterError(f"kbar must be positive, got {kbar!r}")
    return kbar / (8.0 * constants.recoil_frequency)


def pulse_fraction(kbar: float, pulse_width: float,
                   constants: PhysicalConstants = CAESIUM) -> float:
    """Fraction of the kicking period occupied by a pulse of ``pulse_width`` seconds.

    Raises
    ------
    PulseTooLongError
        If the pulse is longer than the period.
    """
    if pulse_width < 0:
        raise InvalidParameterError(f"pulse width must be >= 0, got {pulse_width!r}")
    alpha = pulse_width / period_from_kbar(kbar, constants)
    if alpha > 1.0:
        raise PulseTooLongError(
            f"pulse of {pulse_width * 1e9:.4g} ns exceeds the period at kbar={kbar:.6g} "
            f"(alpha={alpha:.4g})")
    return alpha


def scaled_momentum(p, kbar: float):
    """rho = kbar * p. Works elementwise on arrays."""
    if not kbar > 0:
        raise InvalidParameterError(f"kbar must be positive, got {kbar!r}")
    return kbar * p


def momentum_from_scaled(rho, kbar: float):
    if not kbar > 0:
        raise InvalidParameterError(f"kbar must be positive, got {kbar!r}")
    return rho / kbar


@dataclass(frozen=True)
class RotorParams:
    """Dimensionless parameter set of one experimental run.

    ``kick_ratio`` is kappa/kbar, which stays fixed at constant laser power,
    and ``sigma_p`` is the initial momentum spread in 2-photon recoils.
    ``pulse_width`` (seconds) is only needed for finite-pulse simulations.
    """

    kbar: float
    kick_ratio: float
    sigma_p: float = 0.0
    pulse_width: float | None = None
    constants: PhysicalConstants = CAESIUM

    def __post_init__(self):
        if not (math.isfinite(self.kbar) and self.kbar > 0):
            raise InvalidParameterError(f"kbar must be positive, got {self.kbar!r}")
        if not self.kick_ratio >= 0:
            raise InvalidParameterError(f"kick_ratio must be >= 0, got {self.kick_ratio!r}")
        if not self.sigma_p >= 0:
            raise InvalidParameterError(f"sigma_p must be >= 0, got {self.sigma_p!r}")
        if self.pulse_width is not None and not self.pulse_width >= 0:
            raise InvalidParameterError(f"pulse_width must be >= 0, got {self.pulse_width!r}")

    @property
    def kappa(self) -> float:
        return self.kick_ratio * self.kbar

    @property
    def sigma_rho(self) -> float:
        return self.kbar * self.sigma_p

    @property
    def period(self) -> float:
        return period_from_kbar(self.kbar, self.constants)

    @property
    def alpha(self) -> float:
        """Pulse fraction tau_p/T; requires ``pulse_width``."""
        if self.pulse_width is None:
            raise InvalidParameterError("pulse_width is not set")
        return pulse_fraction(self.kbar, self.pulse_width, self.constants)
