"""Spectrum finder: bracket the matching residual on an energy scan, refine
each bracket with Brent's method, and validate the node-index ladder.

Closed-form quantization conditions are provided as cross-checks where they
are elementary (square well, delta well, half-Eckart via the gamma function)
and optionally for the other models via special functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import airy, gammaln, gammasgn, pbdv

from .engine import integrate_inward, matching_residual, scan_residuals
from .model import PotentialKind, PotentialSpec, energy_floor

__all__ = [
    "BoundState",
    "ClosedFormParams",
    "scan_brackets",
    "refine",
    "solve_all",
    "closed_form_residual",
    "closed_form_params",
]

DEFAULT_N_SCAN = 400


@dataclass(frozen=True)
class BoundState:
    """One eigenpair.  n is the node index of the full-line eigenfunction,
    nodes the sign-change count of the right-side shot on (0, x_max); the
    two coincide except for the symmetric full Eckart well."""

    n: int
    energy: float
    k: float
    residual: float
    bracket: tuple[float, float]
    nodes: int
    parity: int | None = None  # +1/-1 for the full Eckart well, else None


@dataclass(frozen=True)
class ClosedFormParams:
    """Special-function parameters of the solvable models at (E, v0, a)."""

    nu: float  # parabolic-cylinder order
    gamma: float  # parabolic-cylinder argument scale
    omega: float  # oscillator energy scale 2 sqrt(v0)/a
    g: float  # Airy scale (v0/a)^(1/3)
    y0: float  # Airy argument at x = 0
    s: float  # sech^2 well index, s(s+1) = v0 a^2
    kappa: float  # Bessel order parameter sqrt(E + 2 v0)
    q: float  # Bessel argument scale sqrt(v0)


def closed_form_params(spec: PotentialSpec, E: float) -> ClosedFormParams:
    """Evaluate every model's special-function parameters in 2m = hbar = 1
    units (the index s solves s(s+1) = v0 a^2)."""
    v0, a = spec.v0, spec.a
    omega = 2.0 * math.sqrt(v0) / a
    gam = (4.0 * v0 / a**2) ** 0.25
    g = (v0 / a) ** (1.0 / 3.0)
    return ClosedFormParams(
        nu=(E + v0) / omega - 0.5,
        gamma=gam,
        omega=omega,
        g=g,
        y0=-(E + v0) / g**2,
        s=0.5 * (-1.0 + math.sqrt(1.0 + 4.0 * v0 * a**2)),
        kappa=math.sqrt(max(E + 2.0 * v0, 0.0)),
        q=math.sqrt(v0),
    )


def scan_brackets(
    spec: PotentialSpec, n_scan: int = DEFAULT_N_SCAN, dx: float | None = None
) -> list[tuple[float, float]]:
    """Sign-change brackets of the matching residual on a uniform energy grid
    over (floor + delta, -delta), delta = 1e-6 v0."""
    if n_scan < 100:
        raise ValueError("n_scan must be at least 100")
    delta = 1e-6 * spec.v0
    energies = np.linspace(energy_floor(spec) + delta, -delta, n_scan)
    res = scan_residuals(spec, energies, dx=dx)
    out = []
    for i in range(n_scan - 1):
        if np.isfinite(res[i]) and np.isfinite(res[i + 1]) and res[i] * res[i + 1] < 0.0:
            out.append((float(energies[i]), float(energies[i + 1])))
    return out


def _parity_of(psi0: float, dpsi0: float, k: float) -> int:
    """Which factor of the symmetric-well residual psi(0) psi'(0) vanished:
    +1 (even, psi'(0) = 0) or -1 (odd, psi(0) = 0)."""
    return -1 if abs(psi0) * max(k, 1.0) < abs(dpsi0) else +1


def refine(spec: PotentialSpec, bracket: tuple[float, float], dx: float | None = None) -> BoundState:
    """Brent root of the matching residual inside a sign-change bracket."""
    lo, hi = bracket
    e_root = brentq(
        lambda e: matching_residual(spec, e, dx=dx),
        lo,
        hi,
        xtol=1e-14,
        rtol=4 * np.finfo(float).eps,
        maxiter=200,
    )
    shot = integrate_inward(spec, e_root, dx=dx)
    k = math.sqrt(-e_root)
    if spec.kind is PotentialKind.FULL_ECKART:
        parity = _parity_of(shot.psi0, shot.dpsi0, k)
        n = 2 * shot.nodes + (1 if parity < 0 else 0)
        residual = abs(shot.psi0 * shot.dpsi0)
    else:
        parity = None
        n = shot.nodes
        residual = abs(shot.dpsi0 - k * shot.psi0)
    return BoundState(
        n=n,
        energy=e_root,
        k=k,
        residual=residual,
        bracket=(lo, hi),
        nodes=shot.nodes,
        parity=parity,
    )


def _delta_state(spec: PotentialSpec) -> BoundState:
    k = spec.lam / 2.0
    e = -k * k
    return BoundState(n=0, energy=e, k=k, residual=0.0, bracket=(e, e), nodes=0)


def solve_all(
    spec: PotentialSpec, n_scan: int = DEFAULT_N_SCAN, dx: float | None = None
) -> list[BoundState]:
    """All bound states, sorted by energy and node-validated.

    The delta well short-circuits to its analytic state k = lam/2.  If the
    node indices of the refined states are not 0..N-1 the scan is repeated
    once with twice the resolution before giving up.
    """
    if spec.kind is PotentialKind.DELTA_WELL:
        return [_delta_state(spec)]
    for attempt, scan_n in enumerate((n_scan, 2 * n_scan)):
        states = [refine(spec, b, dx=dx) for b in scan_brackets(spec, scan_n, dx=dx)]
        states.sort(key=lambda s: s.energy)
        if [s.n for s in states] == list(range(len(states))):
            return states
        if attempt == 1:
            raise RuntimeError(
                f"node indices {[s.n for s in states]} are not 0..N-1; spectrum incomplete"
            )
    raise AssertionError("unreachable")  # pragma: no cover


def _fsw_residual(spec: PotentialSpec, E: float) -> float:
    """Square-well quantization: ((k^2-q^2)/2) sin(qa) + k q cos(qa) = 0,
    a pole-free combination of the even/odd edge-matching conditions."""
    k = math.sqrt(-E)
    q = math.sqrt(E + spec.v0)
    qa = q * spec.a
    return 0.5 * (k * k - q * q) * math.sin(qa) + k * q * math.cos(qa)


def _eckart_residual(spec: PotentialSpec, E: float) -> float:
    """Half-Eckart quantization via gamma functions:
    ka + 2 G((1+ka-s)/2) G((2+ka+s)/2) / (G((ka-s)/2) G((1+ka+s)/2)) = 0."""
    s = closed_form_params(spec, E).s
    ka = math.sqrt(-E) * spec.a
    num = ((1.0 + ka - s) / 2.0, (2.0 + ka + s) / 2.0)
    den = ((ka - s) / 2.0, (1.0 + ka + s) / 2.0)
    sign = gammasgn(num[0]) * gammasgn(num[1]) * gammasgn(den[0]) * gammasgn(den[1])
    logs = gammaln(num[0]) + gammaln(num[1]) - gammaln(den[0]) - gammaln(den[1])
    return ka + 2.0 * sign * math.exp(logs)


def _parabolic_residual(spec: PotentialSpec, E: float) -> float:
    """gamma D'_nu(0) - k D_nu(0) for the half-parabolic well."""
    par = closed_form_params(spec, E)
    d, dp = pbdv(par.nu, 0.0)
    return par.gamma * dp - math.sqrt(-E) * d


def _triangular_residual(spec: PotentialSpec, E: float) -> float:
    """g Ai'(y0) - k Ai(y0) for the half-triangular well."""
    par = closed_form_params(spec, E)
    ai, aip, _, _ = airy(par.y0)
    return par.g * aip - math.sqrt(-E) * ai


def _exponential_residual(spec: PotentialSpec, E: float) -> float:
    """q K'_{i kappa a}(qa) - k K_{i kappa a}(qa) = 0 via the imaginary-order
    modified Bessel function (mpmath)."""
    import mpmath as mp

    par = closed_form_params(spec, E)
    order = 1j * par.kappa * spec.a
    z = par.q * spec.a
    kv = mp.besselk(order, z)
    kvp = -0.5 * (mp.besselk(order - 1, z) + mp.besselk(order + 1, z))
    return float((par.q * kvp - math.sqrt(-E) * kv).real)


_CLOSED_FORMS = {
    PotentialKind.FINITE_SQUARE_WELL: _fsw_residual,
    PotentialKind.HALF_ECKART: _eckart_residual,
    PotentialKind.HALF_PARABOLIC: _parabolic_residual,
    PotentialKind.HALF_TRIANGULAR: _triangular_residual,
    PotentialKind.HALF_EXPONENTIAL: _exponential_residual,
}


def closed_form_residual(spec: PotentialSpec, E: float) -> float | None:
    """Residual of the model's transcendental quantization condition, or
    None when the model has no supported closed form."""
    if spec.kind is PotentialKind.DELTA_WELL:
        return math.sqrt(-E) - spec.lam / 2.0
    fn = _CLOSED_FORMS.get(spec.kind)
    if fn is None:
        return None
    return fn(spec, E)
