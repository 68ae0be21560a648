import math

import numpy as np
import pytest

from kickrotor.ensemble import EnsembleSpec
from kickrotor.errors import InvalidParameterError, PulseTooLongError
from kickrotor.params import RotorParams, period_from_kbar
from kickrotor.pulse import (PulseSchedule, apply_pulse_period, evolve_pulse_ensemble,
                             pulse_block, simulate_pulse_ensemble, traversal_fraction)
from kickrotor.quantum import (apply_free, apply_kick, energy_of_state, init_plane_wave,
                               simulate_delta_ensemble)


def _params(kbar, alpha, k=7.0, sigma=1.8):
    return RotorParams(kbar, k, sigma, pulse_width=alpha * period_from_kbar(kbar))


def test_schedule_area():
    p = _params(0.5, 0.3)
    s = PulseSchedule.for_params(p, 64)
    assert s.amplitude * s.alpha == pytest.approx(p.kappa, rel=1e-12)
    assert s.area == pytest.approx(p.kappa, rel=1e-12)
    with pytest.raises(InvalidParameterError):
        PulseSchedule(0.0, 10, 1.0)
    with pytest.raises(InvalidParameterError):
        PulseSchedule(0.5, 0, 1.0)


def test_zero_kick_period_is_free_evolution():
    p = _params(0.8, 0.2, k=0.0)
    s = apply_kick(init_plane_wave(0.4), 3.0)
    out = apply_pulse_period(s, p, PulseSchedule.for_params(p, 16))
    np.testing.assert_allclose(out.amplitudes, apply_free(s, 0.8).amplitudes, atol=1e-14)


def test_period_is_unitary():
    p = _params(0.3, 0.45)
    s = init_plane_wave(1.3)
    for _ in range(3):
        s = apply_pulse_period(s, p, PulseSchedule.for_params(p, 64))
        assert abs(s.norm - 1) < 1e-10


def test_short_pulse_approaches_kick_then_free():
    p = _params(1.2, 1e-5)
    s0 = init_plane_wave(0.7)
    a = apply_pulse_period(s0, p, PulseSchedule.for_params(p, 4))
    b = apply_free(apply_kick(s0, 7.0), 1.2)
    lo = max(a.n_min, b.n_min)
    hi = min(a.n_max, b.n_max)
    np.testing.assert_allclose(a.amplitudes[lo - a.n_min:hi - a.n_min + 1],
                               b.amplitudes[lo - b.n_min:hi - b.n_min + 1], atol=1e-4)
    assert energy_of_state(a) == pytest.approx(energy_of_state(b), rel=1e-4)


@pytest.mark.parametrize("kbar,alpha", [(0.5, 0.3), (0.1, 0.5), (1.0, 0.1)])
def test_second_order_convergence(kbar, alpha):
    p0 = np.array([0.37, -1.2, 2.6])
    e = [pulse_block(p0, kbar, 7.0, alpha, n, 2, 60) for n in (16, 32, 64)]
    ratio = (e[0] - e[1]) / (e[1] - e[2])
    np.testing.assert_allclose(ratio, 4.0, atol=0.5)


def test_alpha_to_zero_limit():
    spec = EnsembleSpec(4000, 1, 1.8)
    delta = simulate_delta_ensemble(spec, RotorParams(0.5, 7.0, 1.8), 2).energy
    errs = [abs(simulate_pulse_ensemble(spec, _params(0.5, a), 2).energy / delta - 1)
            for a in (1e-2, 1e-3, 1e-4)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-3


def test_zero_kick_ensemble():
    spec = EnsembleSpec(3000, 2, 1.8)
    r = simulate_pulse_ensemble(spec, _params(1.0, 0.2, k=0.0), 2)
    assert abs(r.energy - 1.62) < 3 * r.std_err


def test_adaptive_substeps_report():
    spec = EnsembleSpec(500, 0, 1.8)
    ens, n_sub = evolve_pulse_ensemble(spec, _params(0.5, 0.1), 2)
    assert n_sub >= 128 and ens.method == "quantum_pulse"
    fixed, m = evolve_pulse_ensemble(spec, _params(0.5, 0.1), 2, n_sub=n_sub)
    np.testing.assert_array_equal(fixed.momenta, ens.momenta)


def test_errors():
    spec = EnsembleSpec(10, 0, 1.8)
    with pytest.raises(InvalidParameterError):
        simulate_pulse_ensemble(spec, RotorParams(1.0, 7.0, 1.8), 2)
    with pytest.raises(PulseTooLongError):
        simulate_pulse_ensemble(spec, RotorParams(0.04, 7.0, 1.8, pulse_width=480e-9), 2)


def test_traversal_fraction():
    p = RotorParams(0.5, 7.0, 1.8, pulse_width=480e-9)
    assert traversal_fraction(0.0, p) == 0.0
    assert traversal_fraction(3.0, p) == pytest.approx(0.5 * 3.0 * p.alpha / (2 * math.pi))
    p2 = RotorParams(0.5, 7.0, 1.8, pulse_width=960e-9)
    assert traversal_fraction(3.0, p2) == pytest.approx(2 * traversal_fraction(3.0, p))
