"""Thermal ensembles: sampling, energy estimates and kick-ratio calibration.

Trajectory ``i`` draws its initial condition from the Philox block with
counter ``(i, 0, 0, 0)`` and key ``(seed, 0)``, so every trajectory is
reproducible on its own and the ensemble does not depend on how it is split
into blocks or across threads.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Literal, NamedTuple, Sequence

import numpy as np

from . import kernels
from .errors import CalibrationError, InvalidParameterError

Method = Literal["classical", "quantum_delta", "quantum_pulse",
                 "analytic1", "analytic2", "analytic_broad"]

BLOCK_SIZE = 2048
WORKERS_ENV = "KICKROTOR_WORKERS"
PLATEAU_KBAR = 1.0


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        raise InvalidParameterError(f"{WORKERS_ENV} must be an integer") from None


@dataclass(frozen=True)
class EnsembleSpec:
    n_traj: int
    seed: int = 0
    sigma_p: float = 0.0

    def __post_init__(self):
        if int(self.n_traj) != self.n_traj or self.n_traj < 1:
            raise InvalidParameterError(f"n_traj must be a positive integer, got {self.n_traj!r}")
        if not 0 <= self.seed < 2**64:
            raise InvalidParameterError(f"seed must fit in 64 unsigned bits, got {self.seed!r}")
        if not self.sigma_p >= 0:
            raise InvalidParameterError(f"sigma_p must be >= 0, got {self.sigma_p!r}")


@dataclass
class MomentumEnsemble:
    """Final momenta in 2-photon recoils.

    For quantum methods each entry is the rms momentum ``sqrt(<p^2>)`` of
    one evolved plane wave, so ``energy_from_momenta`` averages
    per-trajectory expectation values.
    """

    momenta: np.ndarray
    method: str
    n_kicks: int

    def __len__(self):
        return len(self.momenta)


@dataclass(frozen=True)
class EnergyRecord:
    kbar: float
    kick_ratio: float
    sigma_p: float
    n_kicks: int
    method: str
    energy: float
    std_err: float = 0.0
    n_traj: int = 0
    seed: int = 0
    error: str = ""

    @property
    def ok(self) -> bool:
        return not self.error

    def with_error(self, message: str) -> "EnergyRecord":
        return replace(self, energy=math.nan, std_err=math.nan, error=message)


def sample_initial_conditions(spec: EnsembleSpec, start: int = 0, stop: int | None = None):
    """Initial phases (uniform on [0, 2pi)) and momenta (Gaussian, 2-photon recoils).

    ``start``/``stop`` select a slice of trajectory indices; the values for a
    given index never depend on the slice.

    Returns
    -------
    phi0, p0 : ndarray
    """
    stop = spec.n_traj if stop is None else stop
    if not 0 <= start <= stop <= spec.n_traj:
        raise InvalidParameterError(f"bad trajectory slice [{start}, {stop})")
    idx = np.arange(start, stop, dtype=np.uint64)
    words = kernels.philox_blocks(idx, 0, spec.seed)
    u = kernels.uniform_from_bits(words)
    phi0 = 2.0 * np.pi * u[:, 0]
    # Box-Muller; 1 - u lies in (0, 1] so the log is finite.
    radius = np.sqrt(-2.0 * np.log1p(-u[:, 1]))
    p0 = spec.sigma_p * radius * np.cos(2.0 * np.pi * u[:, 2])
    return phi0, p0


def map_blocks(func: Callable[[int, int], np.ndarray], n: int, workers: int | None = None,
               block_size: int = BLOCK_SIZE) -> np.ndarray:
    """Evaluate ``func(start, stop)`` over fixed index blocks and concatenate in order.

    Block boundaries depend only on ``n`` and ``block_size``, never on
    ``workers``, which keeps results bit-identical across thread counts.
    """
    workers = default_workers() if workers is None else workers
    bounds = [(s, min(s + block_size, n)) for s in range(0, n, block_size)]
    if workers <= 1 or len(bounds) == 1:
        parts = [func(a, b) for a, b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda ab: func(*ab), bounds))
    return np.concatenate(parts)


def energy_from_momenta(ensemble: MomentumEnsemble | np.ndarray) -> tuple[float, float]:
    """Mean energy ``<p^2>/2`` and its standard error."""
    p = np.asarray(getattr(ensemble, "momenta", ensemble), dtype=np.float64)
    if p.size == 0:
        raise InvalidParameterError("cannot estimate energy of an empty ensemble")
    e = 0.5 * np.square(p)
    energy = float(np.mean(e))
    if p.size == 1:
        return energy, 0.0
    return energy, float(np.std(e, ddof=1) / math.sqrt(p.size))


class ThermalSubtracted(NamedTuple):
    energy: float
    negative: bool


def subtract_thermal(energy: float, sigma_p: float) -> ThermalSubtracted:
    """Remove the initial thermal energy ``sigma_p^2/2``.

    Negative results are passed through unclamped and flagged.
    """
    value = energy - 0.5 * sigma_p**2
    return ThermalSubtracted(value, value < 0)


class KickRatioEstimate(NamedTuple):
    value: float
    std_err: float


def _mean_with_err(records: Sequence[EnergyRecord]) -> tuple[float, float]:
    e = np.array([r.energy for r in records])
    se = np.array([r.std_err for r in records])
    return float(np.mean(e)), float(np.sqrt(np.sum(se**2)) / len(records))


def _plateau(records: Iterable[EnergyRecord], n_kicks: int) -> list[EnergyRecord]:
    return [r for r in records
            if r.ok and r.n_kicks == n_kicks and r.kbar >= PLATEAU_KBAR]


def estimate_kick_ratio_plateau(records: Iterable[EnergyRecord], sigma_p: float,
                                sigma_p_err: float = 0.0) -> KickRatioEstimate:
    """kappa/kbar from the mean two-kick energy over kbar >= 1.

    Inverts the broad-distribution energy ``sigma_p^2/2 + k^2/2``. Records
    are averaged without weights.
    """
    sel = _plateau(records, 2)
    if not sel:
        raise InvalidParameterError("no two-kick records with kbar >= 1")
    mean, mean_err = _mean_with_err(sel)
    radicand = _clip_rounding(2.0 * (mean - 0.5 * sigma_p**2), mean)
    if radicand < 0:
        raise CalibrationError(
            f"plateau energy {mean:.6g} is below the thermal energy {0.5 * sigma_p**2:.6g}")
    value = math.sqrt(radicand)
    # d(radicand) = 2 dE - 2 sigma_p dsigma_p
    d_rad = 2.0 * math.hypot(mean_err, sigma_p * sigma_p_err)
    err = d_rad / (2.0 * value) if value > 0 else math.sqrt(d_rad)
    return KickRatioEstimate(value, err)


def estimate_kick_ratio_difference(one_kick: Iterable[EnergyRecord],
                                   two_kick: Iterable[EnergyRecord]) -> KickRatioEstimate:
    """kappa/kbar from the plateau difference ``E2 - E1 = k^2/4``.

    Only kbar values present in both sets (and >= 1) are used.
    """
    ones = {_kbar_key(r.kbar): r for r in _plateau(one_kick, 1)}
    twos = {_kbar_key(r.kbar): r for r in _plateau(two_kick, 2)}
    common = sorted(ones.keys() & twos.keys())
    if not common:
        raise InvalidParameterError("no matching one- and two-kick records with kbar >= 1")
    e1, se1 = _mean_with_err([ones[k] for k in common])
    e2, se2 = _mean_with_err([twos[k] for k in common])
    diff = _clip_rounding(e2 - e1, e2)
    if diff < 0:
        raise CalibrationError(f"two-kick plateau {e2:.6g} lies below one-kick plateau {e1:.6g}")
    value = 2.0 * math.sqrt(diff)
    d_diff = math.hypot(se1, se2)
    err = 2.0 * d_diff / value if value > 0 else 2.0 * math.sqrt(d_diff)
    return KickRatioEstimate(value, err)


def _clip_rounding(value: float, scale: float) -> float:
    # exact data can land a few ulps below zero after averaging
    return 0.0 if -8 * np.finfo(float).eps * abs(scale) <= value < 0 else value


def _kbar_key(kbar: float) -> float:
    return float(f"{kbar:.12g}")
