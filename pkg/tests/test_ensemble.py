import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kickrotor.analytic import energy_one_kick, energy_two_kicks_broad
from kickrotor.ensemble import (EnergyRecord, EnsembleSpec, MomentumEnsemble, energy_from_momenta,
                                estimate_kick_ratio_difference, estimate_kick_ratio_plateau,
                                map_blocks, sample_initial_conditions, subtract_thermal)
from kickrotor.errors import CalibrationError, InvalidParameterError


def test_spec_validation():
    with pytest.raises(InvalidParameterError):
        EnsembleSpec(0)
    with pytest.raises(InvalidParameterError):
        EnsembleSpec(10, seed=-1)
    with pytest.raises(InvalidParameterError):
        EnsembleSpec(10, sigma_p=-0.1)


def test_zero_width_gives_zero_momenta():
    phi, p = sample_initial_conditions(EnsembleSpec(100, 5, 0.0))
    assert np.all(p == 0)
    assert np.all((phi >= 0) & (phi < 2 * np.pi))


def test_sampling_deterministic():
    spec = EnsembleSpec(5000, 42, 3.35)
    a = sample_initial_conditions(spec)
    b = sample_initial_conditions(spec)
    np.testing.assert_array_equal(a[0], b[0])
    np.testing.assert_array_equal(a[1], b[1])
    other = sample_initial_conditions(EnsembleSpec(5000, 43, 3.35))
    assert not np.array_equal(a[1], other[1])


@given(st.integers(0, 2**64 - 1), st.integers(0, 300), st.integers(0, 300))
def test_slices_match_full_draw(seed, a, b):
    lo, hi = sorted((a, b))
    spec = EnsembleSpec(300, seed, 1.0)
    full_phi, full_p = sample_initial_conditions(spec)
    phi, p = sample_initial_conditions(spec, lo, hi)
    np.testing.assert_array_equal(phi, full_phi[lo:hi])
    np.testing.assert_array_equal(p, full_p[lo:hi])


def test_sample_width():
    _, p = sample_initial_conditions(EnsembleSpec(10**6, 7, 3.35))
    assert abs(np.std(p) / 3.35 - 1) < 0.005
    assert abs(np.mean(p)) < 5 * 3.35 / 1000


def test_map_blocks_independent_of_workers():
    spec = EnsembleSpec(9000, 1, 2.0)

    def f(a, b):
        return sample_initial_conditions(spec, a, b)[1] ** 2

    ref = map_blocks(f, spec.n_traj, workers=1)
    for w in (2, 8):
        np.testing.assert_array_equal(map_blocks(f, spec.n_traj, workers=w), ref)
    np.testing.assert_array_equal(map_blocks(f, spec.n_traj, 1, block_size=1000), ref)


def test_energy_from_momenta_examples():
    assert energy_from_momenta(MomentumEnsemble(np.array([2.0, -2.0]), "classical", 0))[0] == 2.0
    assert energy_from_momenta(np.zeros(7)) == (0.0, 0.0)
    with pytest.raises(InvalidParameterError):
        energy_from_momenta(np.array([]))
    _, p = sample_initial_conditions(EnsembleSpec(40000, 3, 4.2))
    e, se = energy_from_momenta(p)
    assert abs(e - 8.82) < 3 * se


def test_thermal_convergence_rate():
    errs = []
    for n in (1000, 16000):
        _, p = sample_initial_conditions(EnsembleSpec(n, 11, 2.0))
        errs.append(energy_from_momenta(p)[1])
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.15)


def test_subtract_thermal():
    assert subtract_thermal(8.82, 4.2).energy == pytest.approx(0.0, abs=1e-12)
    assert subtract_thermal(50.62, 1.8).energy == pytest.approx(49.0)
    r = subtract_thermal(0.0, 1.0)
    assert r.energy == -0.5 and r.negative


def _records(kbars, energy_fn, n_kicks=2, err=0.0):
    return [EnergyRecord(kb, 0.0, 0.0, n_kicks, "analytic2", energy_fn(kb), err) for kb in kbars]


@given(st.floats(0, 15), st.floats(0, 8))
def test_plateau_inverts_broad_energy(k, s):
    recs = _records([0.5, 1.0, 2.0, 3.5], lambda kb: energy_two_kicks_broad(kb, k, s))
    assert estimate_kick_ratio_plateau(recs, s).value == pytest.approx(k, abs=1e-6)


def test_plateau_examples():
    recs = _records([1, 2, 3], lambda kb: 0.5 * 3.35**2 + 0.5 * 7.5**2, err=0.1)
    est = estimate_kick_ratio_plateau(recs, 3.35)
    assert est.value == pytest.approx(7.5)
    assert est.std_err == pytest.approx(0.1 / math.sqrt(3) / 7.5)
    assert estimate_kick_ratio_plateau(_records([1.0], lambda kb: 2.0), 2.0).value == 0.0
    with pytest.raises(CalibrationError):
        estimate_kick_ratio_plateau(_records([1.0], lambda kb: 1.0), 2.0)
    with pytest.raises(InvalidParameterError):
        estimate_kick_ratio_plateau(_records([0.5], lambda kb: 1.0), 0.0)
    # rows with errors or other kick counts are ignored
    bad = [EnergyRecord(2.0, 0, 0, 2, "quantum_delta", math.nan, error="numerical: x")]
    assert estimate_kick_ratio_plateau(recs + bad, 3.35).value == pytest.approx(7.5)


def test_difference_examples():
    one = _records([1, 2, 3], lambda kb: energy_one_kick(kb, 5.2, 4.2), n_kicks=1)
    two = _records([1, 2, 3], lambda kb: energy_two_kicks_broad(kb, 5.2, 4.2))
    assert estimate_kick_ratio_difference(one, two).value == pytest.approx(5.2)
    same = _records([1, 2, 3], lambda kb: energy_one_kick(kb, 5.2, 4.2))
    assert estimate_kick_ratio_difference(one, same).value == 0.0
    two_over_one = _records([1], lambda kb: 6.76 + 1.0)
    assert estimate_kick_ratio_difference(_records([1], lambda kb: 1.0, 1),
                                          two_over_one).value == pytest.approx(5.2)
    with pytest.raises(CalibrationError):
        estimate_kick_ratio_difference(_records([1], lambda kb: 3.0, 1),
                                       _records([1], lambda kb: 2.0))
    with pytest.raises(InvalidParameterError):
        estimate_kick_ratio_difference(one, _records([5.0], lambda kb: 1.0))


def test_record_with_error():
    r = EnergyRecord(1.0, 7.0, 1.8, 2, "quantum_pulse", 3.0, 0.1).with_error("boom")
    assert not r.ok and math.isnan(r.energy) and r.error == "boom"
