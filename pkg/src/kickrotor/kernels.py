"""Hot numeric kernels with a numba path and a pure-numpy fallback.

Every public kernel dispatches on ``USE_NUMBA``, which is false when numba is
missing or the environment variable ``KICKROTOR_PURE_NUMPY`` is set to a true
value. Both paths are importable directly (``*_numba`` / ``*_numpy``) so the
test-suite and ``benchmarks/bench_kernels.py`` can compare them.

The two quantum paths deliberately use different algorithms:

* numba applies ``exp(i a cos phi)`` as a banded convolution with the
  Jacobi-Anger coefficients ``i^s J_s(a)`` directly on the momentum ladder;
* numpy moves to a zero-padded ``2^q`` point phase grid with an FFT, multiplies
  by the kick phase there and transforms back.
"""

from __future__ import annotations

import math
import os

import numpy as np
from scipy import special

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
PURE_NUMPY = os.environ.get("KICKROTOR_PURE_NUMPY", "").strip().lower() in {"1", "true", "yes", "on"}
USE_NUMBA = HAVE_NUMBA and not PURE_NUMPY


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


def _njit(func):
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=True, nogil=True)(func)


# ---------------------------------------------------------------------------
# Philox4x64-10 counter-based generator
# ---------------------------------------------------------------------------

_M32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)
_PHILOX_M0 = np.uint64(0xD2E7470EE14C6C93)
_PHILOX_M1 = np.uint64(0xCA5A826395121157)
_PHILOX_W0 = np.uint64(0x9E3779B97F4A7C15)
_PHILOX_W1 = np.uint64(0xBB67AE8584CAA73B)


def _mulhilo(a, b):
    # 64x64 -> 128 bit product from 32-bit limbs; works on scalars and arrays.
    a_lo = a & _M32
    a_hi = a >> _S32
    b_lo = b & _M32
    b_hi = b >> _S32
    ll = a_lo * b_lo
    lh = a_lo * b_hi
    hl = a_hi * b_lo
    hh = a_hi * b_hi
    mid = (ll >> _S32) + (lh & _M32) + (hl & _M32)
    hi = hh + (lh >> _S32) + (hl >> _S32) + (mid >> _S32)
    return hi, a * b


def _philox_rounds(c0, c1, c2, c3, k0, k1):
    for r in range(10):
        if r > 0:
            k0 = k0 + _PHILOX_W0
            k1 = k1 + _PHILOX_W1
        hi0, lo0 = _mulhilo(_PHILOX_M0, c0)
        hi1, lo1 = _mulhilo(_PHILOX_M1, c2)
        c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
    return c0, c1, c2, c3


if HAVE_NUMBA:
    _mulhilo_jit = numba.njit(inline="always")(_mulhilo)

    @numba.njit(inline="always")
    def _philox_rounds_jit(c0, c1, c2, c3, k0, k1):
        for r in range(10):
            if r > 0:
                k0 = k0 + _PHILOX_W0
                k1 = k1 + _PHILOX_W1
            hi0, lo0 = _mulhilo_jit(_PHILOX_M0, c0)
            hi1, lo1 = _mulhilo_jit(_PHILOX_M1, c2)
            c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
        return c0, c1, c2, c3

    @numba.njit(cache=True, nogil=True)
    def _philox_blocks_jit(counters, c1, k0, k1):
        n = counters.shape[0]
        out = np.empty((n, 4), dtype=np.uint64)
        zero = np.uint64(0)
        for i in range(n):
            r0, r1, r2, r3 = _philox_rounds_jit(counters[i], c1, zero, zero, k0, k1)
            out[i, 0] = r0
            out[i, 1] = r1
            out[i, 2] = r2
            out[i, 3] = r3
        return out


def philox_blocks_numpy(counters, block, key0, key1=0):
    """Philox4x64-10 output for counters ``(counters[i], block, 0, 0)``."""
    c0 = np.asarray(counters, dtype=np.uint64)
    zero = np.zeros_like(c0)
    c1 = np.full_like(c0, np.uint64(block))
    # one-element key arrays: numpy scalars warn on the intended wrap-around
    k0 = np.array([key0], dtype=np.uint64)
    k1 = np.array([key1], dtype=np.uint64)
    out = _philox_rounds(c0, c1, zero, zero.copy(), k0, k1)
    return np.stack(out, axis=-1)


def philox_blocks_numba(counters, block, key0, key1=0):
    c0 = np.ascontiguousarray(counters, dtype=np.uint64)
    return _philox_blocks_jit(c0, np.uint64(block), np.uint64(key0), np.uint64(key1))


def philox_blocks(counters, block, key0, key1=0):
    """Four 64-bit words per counter; bit-identical on both backends."""
    if USE_NUMBA:
        return philox_blocks_numba(counters, block, key0, key1)
    return philox_blocks_numpy(counters, block, key0, key1)


def uniform_from_bits(words):
    """Map uint64 words to doubles in [0, 1) using the top 53 bits."""
    return (np.asarray(words, dtype=np.uint64) >> np.uint64(11)).astype(np.float64) * 2.0**-53


# ---------------------------------------------------------------------------
# Standard map
# ---------------------------------------------------------------------------

def standard_map_numpy(phi, rho, kappa, n_steps, record=False):
    """Iterate ``rho -= kappa sin(phi); phi += rho`` over all trajectories.

    With ``record`` the full orbit is returned as arrays of shape
    ``(n_steps + 1, n_traj)``; otherwise only the final state.
    """
    phi = np.array(phi, dtype=np.float64)
    rho = np.array(rho, dtype=np.float64)
    if record:
        phis = np.empty((n_steps + 1,) + phi.shape)
        rhos = np.empty_like(phis)
        phis[0], rhos[0] = phi, rho
    for n in range(n_steps):
        rho -= kappa * np.sin(phi)
        phi += rho
        if record:
            phis[n + 1], rhos[n + 1] = phi, rho
    if record:
        return phis, rhos
    return phi, rho


@_njit
def _standard_map_final(phi, rho, kappa, n_steps):
    for i in range(phi.shape[0]):
        p = phi[i]
        r = rho[i]
        for _ in range(n_steps):
            r -= kappa * math.sin(p)
            p += r
        phi[i] = p
        rho[i] = r


@_njit
def _standard_map_orbit(phis, rhos, kappa):
    for i in range(phis.shape[1]):
        p = phis[0, i]
        r = rhos[0, i]
        for n in range(1, phis.shape[0]):
            r -= kappa * math.sin(p)
            p += r
            phis[n, i] = p
            rhos[n, i] = r


def standard_map_numba(phi, rho, kappa, n_steps, record=False):
    phi = np.array(phi, dtype=np.float64).ravel()
    rho = np.array(rho, dtype=np.float64).ravel()
    if record:
        phis = np.empty((n_steps + 1, phi.size))
        rhos = np.empty_like(phis)
        phis[0], rhos[0] = phi, rho
        _standard_map_orbit(phis, rhos, float(kappa))
        return phis, rhos
    _standard_map_final(phi, rho, float(kappa), int(n_steps))
    return phi, rho


def standard_map(phi, rho, kappa, n_steps, record=False):
    if USE_NUMBA:
        return standard_map_numba(phi, rho, kappa, n_steps, record)
    return standard_map_numpy(phi, rho, kappa, n_steps, record)


# ---------------------------------------------------------------------------
# Momentum-ladder propagation
# ---------------------------------------------------------------------------

BAND_TOL = 1e-17
_I_POW = np.array([1, 1j, -1, -1j])


def band_halfwidth(strength: float, tol: float = BAND_TOL) -> int:
    """Largest shift ``s`` with ``|J_s(strength)| > tol``."""
    a = abs(float(strength))
    if a == 0.0:
        return 0
    s_max = int(1.5 * a + 40)
    j = np.abs(special.jv(np.arange(s_max + 1), a))
    big = np.nonzero(j > tol)[0]
    return int(big[-1]) if big.size else 0


def kick_band(strength: float, tol: float = BAND_TOL) -> np.ndarray:
    """Coefficients ``i^s J_s(strength)`` for ``s = -M..M`` of ``exp(i a cos phi)``."""
    m = band_halfwidth(strength, tol)
    s = np.arange(-m, m + 1)
    return _I_POW[s % 4] * special.jv(s, float(strength))


def fft_size(n: int) -> int:
    return 1 << max(int(n) - 1, 1).bit_length()


SUPPORT_FLOOR = 1e-36
_BAND_SIGN = np.array([1.0, 1.0, -1.0, -1.0])


def band_coefficients(strength: float, tol: float = BAND_TOL) -> np.ndarray:
    """Signed ``J_s(strength)`` for ``s = 0..M``: ``i^s J_s`` is real for even
    ``s`` and imaginary for odd ``s``, and symmetric in ``s``."""
    s = np.arange(band_halfwidth(strength, tol) + 1)
    return _BAND_SIGN[s % 4] * special.jv(s, float(strength))


@_njit
def _apply_band(xr, xi, lo, hi, coef, yr, yi, pad, n, acc):
    """y = exp(i a cos phi) x on a zero-padded row whose support is [lo, hi].

    Ladder site j lives at buffer index pad + j. Returns the support of y
    after trimming edge sites with weight below SUPPORT_FLOOR; x is zeroed.
    ``acc`` is (2, len) scratch for the odd-shift (imaginary) terms.
    """
    m = coef.shape[0] - 1
    nlo = max(0, lo - m)
    nhi = min(n - 1, hi + m)
    a = pad + nlo
    e = pad + nhi + 1
    # Offset views keep every index a non-negative loop counter, which lets
    # LLVM vectorise (negative-index wraparound checks block it otherwise).
    ur = yr[a:e]
    ui = yi[a:e]
    vr = acc[0, a:e]
    vi = acc[1, a:e]
    c0 = coef[0]
    xr0 = xr[a:e]
    xi0 = xi[a:e]
    for k in range(ur.shape[0]):
        ur[k] = c0 * xr0[k]
        ui[k] = c0 * xi0[k]
        vr[k] = 0.0
        vi[k] = 0.0
    for s in range(1, m + 1):
        c = coef[s]
        lr = xr[a - s:e - s]
        hr = xr[a + s:e + s]
        li = xi[a - s:e - s]
        hi_ = xi[a + s:e + s]
        if s % 2 == 0:
            for k in range(ur.shape[0]):
                ur[k] += c * (lr[k] + hr[k])
                ui[k] += c * (li[k] + hi_[k])
        else:
            for k in range(ur.shape[0]):
                vr[k] += c * (lr[k] + hr[k])
                vi[k] += c * (li[k] + hi_[k])
    for k in range(ur.shape[0]):
        ur[k] -= vi[k]
        ui[k] += vr[k]
    for j in range(lo, hi + 1):
        xr[pad + j] = 0.0
        xi[pad + j] = 0.0
    while nlo < nhi and yr[pad + nlo] ** 2 + yi[pad + nlo] ** 2 < SUPPORT_FLOOR:
        yr[pad + nlo] = 0.0
        yi[pad + nlo] = 0.0
        nlo += 1
    while nhi > nlo and yr[pad + nhi] ** 2 + yi[pad + nhi] ** 2 < SUPPORT_FLOOR:
        yr[pad + nhi] = 0.0
        yi[pad + nhi] = 0.0
        nhi -= 1
    return nlo, nhi


@_njit
def _load_row(amps_r, amps_i, b, xr, xi, pad):
    n = amps_r.shape[1]
    lo = n
    hi = -1
    for j in range(n):
        xr[pad + j] = amps_r[b, j]
        xi[pad + j] = amps_i[b, j]
        if amps_r[b, j] != 0.0 or amps_i[b, j] != 0.0:
            if lo == n:
                lo = j
            hi = j
    if hi < 0:
        lo = 0
        hi = 0
    return lo, hi


@_njit
def _store_row(xr, xi, lo, hi, amps_r, amps_i, b, pad):
    n = amps_r.shape[1]
    for j in range(n):
        amps_r[b, j] = 0.0
        amps_i[b, j] = 0.0
    for j in range(lo, hi + 1):
        amps_r[b, j] = xr[pad + j]
        amps_i[b, j] = xi[pad + j]
        xr[pad + j] = 0.0
        xi[pad + j] = 0.0


@_njit
def _kick_rows(amps_r, amps_i, coef):
    n = amps_r.shape[1]
    pad = max(coef.shape[0] - 1, 1)
    xr = np.zeros(n + 2 * pad)
    xi = np.zeros(n + 2 * pad)
    yr = np.zeros(n + 2 * pad)
    yi = np.zeros(n + 2 * pad)
    acc = np.zeros((2, n + 2 * pad))
    for b in range(amps_r.shape[0]):
        lo, hi = _load_row(amps_r, amps_i, b, xr, xi, pad)
        lo, hi = _apply_band(xr, xi, lo, hi, coef, yr, yi, pad, n, acc)
        _store_row(yr, yi, lo, hi, amps_r, amps_i, b, pad)


def _split(amps):
    amps = np.asarray(amps, dtype=np.complex128)
    return np.ascontiguousarray(amps.real), np.ascontiguousarray(amps.imag)


def kick_numba(amps, strength):
    """Apply ``exp(i strength cos phi)`` to every row of a ladder batch."""
    re, im = _split(amps)
    _kick_rows(re, im, band_coefficients(strength))
    return re + 1j * im


def kick_numpy(amps, strength):
    amps = np.asarray(amps, dtype=np.complex128)
    n = amps.shape[-1]
    m = band_halfwidth(strength)
    nfft = fft_size(n + 2 * m)
    padded = np.zeros(amps.shape[:-1] + (nfft,), dtype=np.complex128)
    padded[..., m:m + n] = amps
    phase = np.exp(1j * strength * np.cos(2.0 * np.pi * np.arange(nfft) / nfft))
    padded = np.fft.fft(np.fft.ifft(padded, axis=-1) * phase, axis=-1)
    return padded[..., m:m + n].copy()


def kick(amps, strength):
    if USE_NUMBA:
        return kick_numba(amps, strength)
    return kick_numpy(amps, strength)


def free_phases(momenta, kbar, duration):
    """``exp(-i kbar p^2 duration / 2)`` for momenta in 2-photon recoils."""
    return np.exp(-0.5j * kbar * duration * np.square(momenta))


@_njit
def _strang_rows(amps_r, amps_i, kin_r, kin_i, coef_half, coef_full, n_sub):
    n = amps_r.shape[1]
    pad = max(coef_half.shape[0], coef_full.shape[0])
    xr = np.zeros(n + 2 * pad)
    xi = np.zeros(n + 2 * pad)
    yr = np.zeros(n + 2 * pad)
    yi = np.zeros(n + 2 * pad)
    acc = np.zeros((2, n + 2 * pad))
    for b in range(amps_r.shape[0]):
        lo, hi = _load_row(amps_r, amps_i, b, xr, xi, pad)
        for step in range(n_sub + 1):
            if step == 0 or step == n_sub:
                lo, hi = _apply_band(xr, xi, lo, hi, coef_half, yr, yi, pad, n, acc)
            else:
                lo, hi = _apply_band(xr, xi, lo, hi, coef_full, yr, yi, pad, n, acc)
            if step < n_sub:
                ur = yr[pad + lo:pad + hi + 1]
                ui = yi[pad + lo:pad + hi + 1]
                kr = kin_r[b, lo:hi + 1]
                ki = kin_i[b, lo:hi + 1]
                for j in range(ur.shape[0]):
                    r = ur[j] * kr[j] - ui[j] * ki[j]
                    ui[j] = ur[j] * ki[j] + ui[j] * kr[j]
                    ur[j] = r
            xr, yr = yr, xr
            xi, yi = yi, xi
        _store_row(xr, xi, lo, hi, amps_r, amps_i, b, pad)


def strang_pulse_numba(amps, momenta, kbar, kick_ratio, alpha, n_sub):
    """Evolve through one rectangular pulse with Strang splitting.

    The pulse Hamiltonian is ``rho^2/2 - (kappa/alpha) cos phi`` for a
    scaled time ``alpha``; each of the ``n_sub`` substeps is
    half-potential, kinetic, half-potential, with adjacent half-potentials
    merged.
    """
    re, im = _split(amps)
    kin = free_phases(np.broadcast_to(momenta, re.shape), kbar, alpha / n_sub)
    a = kick_ratio / n_sub
    _strang_rows(re, im, np.ascontiguousarray(kin.real), np.ascontiguousarray(kin.imag),
                 band_coefficients(0.5 * a), band_coefficients(a), int(n_sub))
    return re + 1j * im


def strang_pulse_numpy(amps, momenta, kbar, kick_ratio, alpha, n_sub):
    amps = np.asarray(amps, dtype=np.complex128)
    n = amps.shape[-1]
    a = kick_ratio / n_sub
    m = band_halfwidth(a)
    nfft = fft_size(n + 2 * m)
    # Extend the ladder by m sites each side so the grid holds the band.
    padded = np.zeros(amps.shape[:-1] + (nfft,), dtype=np.complex128)
    padded[..., m:m + n] = amps
    momenta = np.broadcast_to(momenta, amps.shape)
    site = np.arange(nfft) - m
    ext = momenta[..., :1] + site  # ladder sites are unit spaced
    kin = free_phases(ext, kbar, alpha / n_sub)
    cos_grid = np.cos(2.0 * np.pi * np.arange(nfft) / nfft)
    v_half = np.exp(0.5j * a * cos_grid)
    v_full = v_half * v_half
    x = np.fft.ifft(padded, axis=-1) * v_half
    for step in range(n_sub):
        x = np.fft.ifft(np.fft.fft(x, axis=-1) * kin, axis=-1)
        x *= v_half if step == n_sub - 1 else v_full
    padded = np.fft.fft(x, axis=-1)
    return padded[..., m:m + n].copy()


def strang_pulse(amps, momenta, kbar, kick_ratio, alpha, n_sub):
    if USE_NUMBA:
        return strang_pulse_numba(amps, momenta, kbar, kick_ratio, alpha, n_sub)
    return strang_pulse_numpy(amps, momenta, kbar, kick_ratio, alpha, n_sub)
