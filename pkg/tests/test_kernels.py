import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kickrotor import kernels as K

needs_numba = pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba not installed")


def _numpy_philox(seed, counter):
    # numpy bumps the counter before producing a block, hence counter - 1
    c = np.array([counter - 1 if counter else 2**64 - 1, 0, 0, 0], dtype=np.uint64)
    if counter == 0:
        c[1:] = 2**64 - 1
    bg = np.random.Philox(key=seed, counter=c)
    return bg.random_raw(4)


@pytest.mark.parametrize("seed", [0, 1, 12345, 2**63 + 7, 2**64 - 1])
def test_philox_matches_numpy(seed):
    idx = np.array([1, 2, 7, 1000, 2**40], dtype=np.uint64)
    words = K.philox_blocks_numpy(idx, 0, seed)
    for row, i in zip(words, idx.tolist()):
        np.testing.assert_array_equal(row, _numpy_philox(seed, i))


@needs_numba
@given(st.integers(0, 2**64 - 1), st.integers(0, 2**32))
def test_philox_backends_agree(seed, start):
    idx = np.arange(start, start + 17, dtype=np.uint64)
    for block in (0, 3):
        np.testing.assert_array_equal(K.philox_blocks_numba(idx, block, seed, 5),
                                      K.philox_blocks_numpy(idx, block, seed, 5))


def test_uniform_range():
    u = K.uniform_from_bits(K.philox_blocks(np.arange(5000, dtype=np.uint64), 0, 3))
    assert u.min() >= 0 and u.max() < 1
    assert abs(u.mean() - 0.5) < 0.01


def test_band_coefficients_against_mpmath():
    rng = np.random.default_rng(0)
    for a in rng.uniform(0, 25, 20):
        c = K.band_coefficients(a)
        for s in range(min(len(c), 40)):
            exact = complex(mpmath.mpc(0, 1) ** s * mpmath.besselj(s, a))
            # stored as signed real J_s; odd orders are the imaginary part
            got = c[s] * (1j if s % 2 else 1.0)
            assert got == pytest.approx(exact, abs=1e-14)


def test_band_halfwidth_covers_tail():
    for a in (0.0, 0.5, 7.0, 30.0):
        m = K.band_halfwidth(a)
        assert abs(float(mpmath.besselj(m + 1, a))) < K.BAND_TOL * 10


def _random_rows(rng, rows, n, margin):
    a = rng.normal(size=(rows, n)) + 1j * rng.normal(size=(rows, n))
    a[:, :margin] = 0
    a[:, n - margin:] = 0
    return a / np.linalg.norm(a, axis=1)[:, None]


@needs_numba
@pytest.mark.parametrize("strength", [0.3, 2.0, 7.0])
def test_kick_backends_agree(strength):
    a = _random_rows(np.random.default_rng(1), 4, 120, 40)
    np.testing.assert_allclose(K.kick_numba(a, strength), K.kick_numpy(a, strength),
                               atol=1e-14, rtol=0)


@needs_numba
def test_strang_backends_agree():
    rng = np.random.default_rng(2)
    a = _random_rows(rng, 3, 121, 50)
    mom = np.arange(-60, 61)[None, :] + rng.uniform(-0.5, 0.5, (3, 1))
    np.testing.assert_allclose(K.strang_pulse_numba(a, mom, 0.5, 7.0, 0.3, 32),
                               K.strang_pulse_numpy(a, mom, 0.5, 7.0, 0.3, 32),
                               atol=1e-13, rtol=0)


@needs_numba
def test_standard_map_backends_agree():
    rng = np.random.default_rng(3)
    phi, rho = rng.uniform(0, 6.3, 50), rng.normal(0, 3, 50)
    for record in (False, True):
        a = K.standard_map_numba(phi, rho, 1.3, 25, record)
        b = K.standard_map_numpy(phi, rho, 1.3, 25, record)
        np.testing.assert_allclose(a[0], b[0], rtol=1e-12, atol=1e-12)
        np.testing.assert_allclose(a[1], b[1], rtol=1e-12, atol=1e-12)


def test_kick_is_unitary():
    a = _random_rows(np.random.default_rng(4), 5, 200, 60)
    out = K.kick(a, 9.0)
    np.testing.assert_allclose(np.sum(np.abs(out) ** 2, axis=1), 1.0, atol=1e-13)


def test_backend_name():
    assert K.backend() in {"numba", "numpy"}
