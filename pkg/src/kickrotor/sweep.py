"""Parameter sweeps over kbar, figure presets and the CSV record format."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import analytic
from .classical import evolve_classical_ensemble, phase_portrait
from .ensemble import EnergyRecord, EnsembleSpec, energy_from_momenta
from .errors import (ConvergenceError, InvalidParameterError, PulseTooLongError, SchemaError,
                     TruncationError)
from .params import RotorParams
from .pulse import simulate_pulse_ensemble
from .quantum import simulate_delta_ensemble

CSV_HEADER = ("kbar", "kappa_ratio", "sigma_p", "n_kicks", "method",
              "energy", "std_err", "n_traj", "seed", "error")
PORTRAIT_HEADER = ("phi", "p")

ANALYTIC_METHODS = {"analytic1": 1, "analytic2": 2, "analytic_broad": 2}
SIM_METHODS = ("classical", "quantum_delta", "quantum_pulse")
METHODS = tuple(ANALYTIC_METHODS) + SIM_METHODS
SPACINGS = ("log", "linear")


@dataclass(frozen=True)
class SweepConfig:
    kbar_min: float = 0.05
    kbar_max: float = 5.0
    steps: int = 40
    spacing: str = "log"
    kick_ratio: float = 7.0
    sigma_p: float = 1.8
    n_kicks: tuple[int, ...] = (2,)
    methods: tuple[str, ...] = ("analytic2",)
    n_traj: int = 2000
    seed: int = 0
    pulse_width_ns: float = 480.0
    workers: int | None = None
    output: str | None = None
    # explicit grid; overrides min/max/steps/spacing when given
    kbar_values: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kbar_values is not None:
            if not self.kbar_values or min(self.kbar_values) <= 0:
                raise InvalidParameterError("kbar values must be positive and non-empty")
        else:
            if not self.kbar_min > 0:
                raise InvalidParameterError(f"kbar_min must be positive, got {self.kbar_min!r}")
            if not self.kbar_max >= self.kbar_min:
                raise InvalidParameterError("kbar_max must be >= kbar_min")
            if self.steps < 1:
                raise InvalidParameterError(f"steps must be >= 1, got {self.steps!r}")
        if self.spacing not in SPACINGS:
            raise InvalidParameterError(f"spacing must be one of {SPACINGS}, got {self.spacing!r}")
        if not self.methods:
            raise InvalidParameterError("at least one method is required")
        bad = [m for m in self.methods if m not in METHODS]
        if bad:
            raise InvalidParameterError(f"unknown method(s) {bad}; choose from {METHODS}")
        if not self.n_kicks or min(self.n_kicks) < 0:
            raise InvalidParameterError("n_kicks must be non-empty and >= 0")
        if self.kick_ratio < 0 or self.sigma_p < 0 or self.pulse_width_ns < 0:
            raise InvalidParameterError("kick_ratio, sigma_p and pulse_width_ns must be >= 0")
        if self.workers is not None and self.workers < 1:
            raise InvalidParameterError("workers must be >= 1")
        EnsembleSpec(self.n_traj, self.seed, self.sigma_p)

    def grid(self) -> np.ndarray:
        if self.kbar_values is not None:
            return np.array(sorted(set(self.kbar_values)), dtype=np.float64)
        if self.steps == 1:
            return np.array([self.kbar_min])
        if self.spacing == "log":
            return np.geomspace(self.kbar_min, self.kbar_max, self.steps)
        return np.linspace(self.kbar_min, self.kbar_max, self.steps)


@dataclass(frozen=True)
class PortraitConfig:
    kbar: float
    kick_ratio: float
    sigma_p: float
    n_iter: int = 100
    n_traj: int = 200
    seed: int = 0
    output: str | None = None


_FIG1 = dict(kick_ratio=7.0, n_kicks=(2,), kbar_min=0.02, kbar_max=5.0, steps=40,
             methods=("analytic2", "analytic_broad", "quantum_delta", "quantum_pulse"),
             n_traj=20000)
_FIG3 = dict(sigma_p=3.35, n_kicks=(2,), methods=("analytic2", "analytic_broad", "quantum_delta"),
             n_traj=20000)
_FIG4 = dict(kick_ratio=5.8, n_kicks=(2,), methods=("analytic2", "analytic_broad", "quantum_delta"),
             n_traj=20000)

SWEEP_PRESETS: dict[str, dict] = {
    "fig1-a": dict(_FIG1, sigma_p=1.8),
    "fig1-b": dict(_FIG1, sigma_p=3.2),
    "fig2": dict(kick_ratio=5.2, sigma_p=4.2, n_kicks=(1, 2), n_traj=20000,
                 methods=("analytic1", "analytic2", "analytic_broad", "quantum_delta")),
    "fig3a": dict(_FIG3, kick_ratio=7.5),
    "fig3b": dict(_FIG3, kick_ratio=6.4),
    "fig3c": dict(_FIG3, kick_ratio=5.6),
    "fig3d": dict(_FIG3, kick_ratio=4.5),
    "fig4a": dict(_FIG4, sigma_p=3.3),
    "fig4b": dict(_FIG4, sigma_p=4.2),
    "fig4c": dict(_FIG4, sigma_p=5.3),
    "fig4d": dict(_FIG4, sigma_p=6.0),
}

PORTRAIT_PRESETS: dict[str, dict] = {
    "fig5-top": dict(kbar=0.001, kick_ratio=5.5, sigma_p=3.6, n_iter=100),
    "fig5-middle": dict(kbar=0.3, kick_ratio=5.5, sigma_p=3.6, n_iter=100),
    "fig5-bottom": dict(kbar=3.0, kick_ratio=5.5, sigma_p=3.6, n_iter=100),
}


def sweep_config(preset: str | None = None, **overrides) -> SweepConfig:
    """Build a config from an optional preset; ``None`` overrides are ignored."""
    base = {}
    if preset is not None:
        if preset not in SWEEP_PRESETS:
            raise InvalidParameterError(
                f"unknown sweep preset {preset!r}; choose from {sorted(SWEEP_PRESETS)}")
        base = dict(SWEEP_PRESETS[preset])
    base.update({k: v for k, v in overrides.items() if v is not None})
    return SweepConfig(**base)


def portrait_config(preset: str | None = None, **overrides) -> PortraitConfig:
    base = {}
    if preset is not None:
        if preset not in PORTRAIT_PRESETS:
            raise InvalidParameterError(
                f"unknown portrait preset {preset!r}; choose from {sorted(PORTRAIT_PRESETS)}")
        base = dict(PORTRAIT_PRESETS[preset])
    base.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return PortraitConfig(**base)
    except TypeError:
        raise InvalidParameterError(
            "portrait needs kbar, kick_ratio and sigma_p (or a preset)") from None


# ---------------------------------------------------------------------------

def _analytic_record(method: str, kbar: float, cfg: SweepConfig) -> EnergyRecord:
    inputs = analytic.AnalyticInputs(kbar, cfg.kick_ratio, cfg.sigma_p)
    fn = {"analytic1": analytic.energy_one_kick,
          "analytic2": analytic.energy_two_kicks,
          "analytic_broad": analytic.energy_two_kicks_broad}[method]
    return EnergyRecord(kbar, cfg.kick_ratio, cfg.sigma_p, ANALYTIC_METHODS[method],
                        method, float(fn(inputs)))


def _simulated_record(method: str, kbar: float, n_kicks: int, cfg: SweepConfig) -> EnergyRecord:
    spec = EnsembleSpec(cfg.n_traj, cfg.seed, cfg.sigma_p)
    stub = EnergyRecord(kbar, cfg.kick_ratio, cfg.sigma_p, n_kicks, method, math.nan,
                        math.nan, cfg.n_traj, cfg.seed)
    try:
        if method == "classical":
            params = RotorParams(kbar, cfg.kick_ratio, cfg.sigma_p)
            energy, err = energy_from_momenta(evolve_classical_ensemble(spec, params, n_kicks))
            return replace(stub, energy=energy, std_err=err)
        if method == "quantum_delta":
            params = RotorParams(kbar, cfg.kick_ratio, cfg.sigma_p)
            return simulate_delta_ensemble(spec, params, n_kicks, cfg.workers)
        params = RotorParams(kbar, cfg.kick_ratio, cfg.sigma_p,
                             pulse_width=cfg.pulse_width_ns * 1e-9)
        return simulate_pulse_ensemble(spec, params, n_kicks, workers=cfg.workers)
    except PulseTooLongError as exc:
        return stub.with_error(f"pulse_too_long: {exc}")
    except (TruncationError, ConvergenceError, FloatingPointError) as exc:
        return stub.with_error(f"numerical: {exc}")


def run_sweep(cfg: SweepConfig) -> list[EnergyRecord]:
    """One record per (kbar, method, n_kicks), sorted by kbar then method.

    Analytic methods have a fixed kick count (one for ``analytic1``, two
    otherwise) and ignore ``cfg.n_kicks``. Simulation failures at a grid point
    become records with ``error`` set and NaN energy.
    """
    rows = []
    for kbar in cfg.grid():
        kbar = float(kbar)
        for method in cfg.methods:
            if method in ANALYTIC_METHODS:
                rows.append(_analytic_record(method, kbar, cfg))
            else:
                rows.extend(_simulated_record(method, kbar, n, cfg) for n in cfg.n_kicks)
    rows.sort(key=lambda r: (r.kbar, r.method, r.n_kicks))
    return rows


def numerical_failures(records: Iterable[EnergyRecord]) -> list[EnergyRecord]:
    return [r for r in records if r.error.startswith("numerical")]


# ---------------------------------------------------------------------------
# CSV

def _fmt(x: float) -> str:
    # repr is the shortest round-trip form and is platform independent
    return "nan" if math.isnan(x) else repr(float(x))


def format_records(records: Sequence[EnergyRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow([_fmt(r.kbar), _fmt(r.kick_ratio), _fmt(r.sigma_p), r.n_kicks, r.method,
                    _fmt(r.energy), _fmt(r.std_err), r.n_traj, r.seed, r.error])
    return buf.getvalue()


def write_records(records: Sequence[EnergyRecord], path) -> None:
    Path(path).write_text(format_records(records))


def parse_records(text: str, source: str = "<input>") -> list[EnergyRecord]:
    """Parse sweep CSV text, raising ``SchemaError`` on any deviation from the layout."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise SchemaError(f"{source}: empty input (expected header {','.join(CSV_HEADER)})")
    if tuple(rows[0]) != CSV_HEADER:
        raise SchemaError(f"{source}: bad header {','.join(rows[0])!r}; "
                          f"expected {','.join(CSV_HEADER)!r}")
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(CSV_HEADER):
            raise SchemaError(f"{source}:{lineno}: expected {len(CSV_HEADER)} fields, got {len(row)}")
        try:
            rec = EnergyRecord(float(row[0]), float(row[1]), float(row[2]), int(row[3]), row[4],
                               float(row[5]), float(row[6]), int(row[7]), int(row[8]), row[9])
        except ValueError as exc:
            raise SchemaError(f"{source}:{lineno}: {exc}") from None
        if rec.method not in METHODS:
            raise SchemaError(f"{source}:{lineno}: unknown method {rec.method!r}")
        out.append(rec)
    if not out:
        raise SchemaError(f"{source}: no data rows")
    return out


def read_records(path) -> list[EnergyRecord]:
    return parse_records(Path(path).read_text(), str(path))


def format_portrait(phi: np.ndarray, p: np.ndarray) -> str:
    buf = io.StringIO()
    buf.write(",".join(PORTRAIT_HEADER) + "\n")
    for a, b in zip(phi.tolist(), p.tolist()):
        buf.write(f"{a!r},{b!r}\n")
    return buf.getvalue()


@dataclass
class PortraitResult:
    phi: np.ndarray
    p: np.ndarray
    config: PortraitConfig = field(repr=False)


def run_portrait(cfg: PortraitConfig) -> PortraitResult:
    spec = EnsembleSpec(cfg.n_traj, cfg.seed, cfg.sigma_p)
    params = RotorParams(cfg.kbar, cfg.kick_ratio, cfg.sigma_p)
    phi, p = phase_portrait(spec, params, cfg.n_iter)
    return PortraitResult(phi, p, cfg)
