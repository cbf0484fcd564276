"""Compiled inner loops: fixed-step RK4 shooting and Filon-type Fourier sums.

Kept free of any package imports so the jitted functions cache cleanly.
Potential kinds are passed as integer codes (see KIND_CODES).
"""

from __future__ import annotations

import math
import os

import numpy as np
from numba import njit, prange

try:  # honour the documented thread cap
    _cap = os.environ.get("HALFWELL_THREADS")
    if _cap:
        import numba

        numba.set_num_threads(max(1, min(int(_cap), numba.config.NUMBA_NUM_THREADS)))
except (ValueError, RuntimeError):  # pragma: no cover
    pass

KIND_CODES = {
    "half-parabolic": 0,
    "half-triangular": 1,
    "half-eckart": 2,
    "half-exponential": 3,
    "fsw": 4,
    "full-eckart": 5,
}

#: mid-integration rescale threshold for the growing shooting solution
RESCALE_LIMIT = 1e250

#: magnitude of the decaying seed planted at x_max
SEED = 1e-30


@njit(cache=True)
def _vpot(code, v0, a, x, x_side):
    """V(x) for integration; x_side (the step midpoint) picks the branch of
    the square well so that a step never mixes values from both sides."""
    if code == 0:
        return -v0 * (1.0 - (x / a) ** 2)
    elif code == 1:
        return -v0 * (1.0 - x / a)
    elif code == 2:
        c = math.cosh(x / a)
        return -v0 / (c * c)
    elif code == 3:
        return -v0 * (2.0 - math.exp(2.0 * x / a))
    elif code == 4:
        return -v0 if x_side < a else 0.0
    else:
        c = math.cosh(x / a)
        return -v0 / (c * c)


@njit(cache=True)
def _shoot_scalar(code, v0, a, E, h, n):
    """RK4 from x = n*h down to 0; returns (psi0, dpsi0, maxabs, seed, rescales, ok).

    psi0/dpsi0/seed are in a common arbitrary scale with maxabs the largest
    |psi| seen along the way; ok = False when V(x_max) <= E.
    """
    x_max = n * h
    v_start = _vpot(code, v0, a, x_max, x_max - 0.5 * h)
    if v_start <= E:
        return 0.0, 0.0, 0.0, 0.0, 0, False
    u = SEED
    v = -math.sqrt(v_start - E) * u
    seed = u
    amax = abs(u)
    rescales = 0
    for i in range(n, 0, -1):
        x0 = i * h
        xm = x0 - 0.5 * h
        x1 = x0 - h
        f0 = _vpot(code, v0, a, x0, xm) - E
        fm = _vpot(code, v0, a, xm, xm) - E
        f1 = _vpot(code, v0, a, x1, xm) - E
        s = -h
        k1u = v
        k1v = f0 * u
        u2 = u + 0.5 * s * k1u
        v2 = v + 0.5 * s * k1v
        k2u = v2
        k2v = fm * u2
        u3 = u + 0.5 * s * k2u
        v3 = v + 0.5 * s * k2v
        k3u = v3
        k3v = fm * u3
        u4 = u + s * k3u
        v4 = v + s * k3v
        k4u = v4
        k4v = f1 * u4
        u = u + s * (k1u + 2.0 * (k2u + k3u) + k4u) / 6.0
        v = v + s * (k1v + 2.0 * (k2v + k3v) + k4v) / 6.0
        au = abs(u)
        if au > amax:
            amax = au
        if au > RESCALE_LIMIT:
            sc = 1.0 / au
            u *= sc
            v *= sc
            amax *= sc
            seed *= sc
            rescales += 1
    return u, v, amax, seed, rescales, True


@njit(cache=True)
def _shoot_sampled(code, v0, a, E, h, n, out):
    """Same march as _shoot_scalar but storing psi at every grid point.

    out has length n+1; out[j] = psi(j*h) in the raw (unnormalised) scale.
    Returns (dpsi0, rescales, ok).
    """
    x_max = n * h
    v_start = _vpot(code, v0, a, x_max, x_max - 0.5 * h)
    if v_start <= E:
        return 0.0, 0, False
    u = SEED
    v = -math.sqrt(v_start - E) * u
    out[n] = u
    rescales = 0
    for i in range(n, 0, -1):
        x0 = i * h
        xm = x0 - 0.5 * h
        x1 = x0 - h
        f0 = _vpot(code, v0, a, x0, xm) - E
        fm = _vpot(code, v0, a, xm, xm) - E
        f1 = _vpot(code, v0, a, x1, xm) - E
        s = -h
        k1u = v
        k1v = f0 * u
        u2 = u + 0.5 * s * k1u
        v2 = v + 0.5 * s * k1v
        k2u = v2
        k2v = fm * u2
        u3 = u + 0.5 * s * k2u
        v3 = v + 0.5 * s * k2v
        k3u = v3
        k3v = fm * u3
        u4 = u + s * k3u
        v4 = v + s * k3v
        k4u = v4
        k4v = f1 * u4
        u = u + s * (k1u + 2.0 * (k2u + k3u) + k4u) / 6.0
        v = v + s * (k1v + 2.0 * (k2v + k3v) + k4v) / 6.0
        if abs(u) > RESCALE_LIMIT:
            sc = 1.0 / abs(u)
            u *= sc
            v *= sc
            for j in range(i, n + 1):
                out[j] *= sc
            rescales += 1
        out[i - 1] = u
    return v, rescales, True


@njit(cache=True, parallel=True)
def _scan_shots(code, v0, a, energies, h, n_steps):
    """Scalar shots at many trial energies; returns (psi0, dpsi0) pairs
    normalised by the per-shot maximum amplitude."""
    m = energies.size
    psi0 = np.empty(m)
    dpsi0 = np.empty(m)
    for i in prange(m):
        u, v, amax, _seed, _r, ok = _shoot_scalar(code, v0, a, energies[i], h, n_steps[i])
        if ok and amax > 0.0:
            psi0[i] = u / amax
            dpsi0[i] = v / amax
        else:
            psi0[i] = np.nan
            dpsi0[i] = np.nan
    return psi0, dpsi0


@njit(cache=True, parallel=True)
def _filon_halfline(psi, h, p):
    """integral_0^L psi(x) exp(-i p x) dx on the uniform grid by Filon's rule.

    psi is interpolated by a quadratic on each pair of intervals and the
    oscillatory moments are integrated exactly, so the accuracy does not
    degrade as p grows (p*h up to ~2 is safe).  len(psi) must be odd.
    """
    npts = p.size
    out = np.empty(npts, dtype=np.complex128)
    n = psi.size - 1
    m = n // 2
    for ip in prange(npts):
        pp = p[ip]
        th = pp * h
        t = th * th
        if th < 0.25:
            m0 = 2.0 * (1.0 - t / 6.0 + t * t / 120.0 - t * t * t / 5040.0 + t * t * t * t / 362880.0)
            m1r = 2.0 * th * (1.0 / 3.0 - t / 30.0 + t * t / 840.0 - t * t * t / 45360.0)
            m2 = 2.0 * (1.0 / 3.0 - t / 10.0 + t * t / 168.0 - t * t * t / 6480.0 + t * t * t * t / 443520.0)
        else:
            sn = math.sin(th)
            cs = math.cos(th)
            m0 = 2.0 * sn / th
            m1r = 2.0 * (sn - th * cs) / t
            m2 = 2.0 * (2.0 * th * cs + (t - 2.0) * sn) / (t * th)
        # panel weights: f(x) ~ fc + u*(fR-fL)/2 + u^2*(fL-2fc+fR)/2, u in [-1,1]
        cc = m0 - m2
        cl = complex(0.5 * m2, 0.5 * m1r)
        cr = complex(0.5 * m2, -0.5 * m1r)
        step = complex(math.cos(2.0 * pp * h), -math.sin(2.0 * pp * h))
        acc = 0.0j
        ph = complex(math.cos(pp * h), -math.sin(pp * h))
        for j in range(m):
            if j % 256 == 0:
                xc = (2 * j + 1) * h
                ph = complex(math.cos(pp * xc), -math.sin(pp * xc))
            acc += ph * (cl * psi[2 * j] + cc * psi[2 * j + 1] + cr * psi[2 * j + 2])
            ph *= step
        out[ip] = h * acc
    return out
