"""Inward shooting integration of psi'' = (V - E) psi.

The decaying solution is integrated right-to-left from x_max down to the
junction at x = 0 with a fixed-step classical RK4 scheme; the left side of
every catalog well except the full Eckart is the analytic tail e^{kx}, so
no leftward integration exists.  Only the ratio psi'(0)/psi(0) carries
physics, hence the mid-integration rescale guard.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .model import (
    PotentialKind,
    PotentialSpec,
    default_dx,
    domain_cutoff,
    energy_floor,
)

__all__ = ["ShotResult", "integrate_inward", "matching_residual", "count_nodes"]

#: samples smaller than this fraction of the peak are treated as tail noise
NODE_NOISE = 1e-12


@dataclass
class ShotResult:
    """One trial-energy integration, rescaled so max|psi| = 1."""

    e_trial: float
    psi0: float
    dpsi0: float
    samples: np.ndarray
    dx: float
    x_max: float
    nodes: int
    rescales: int

    @property
    def xs(self) -> np.ndarray:
        return np.arange(self.samples.size) * self.dx


def _grid(spec: PotentialSpec, E: float, dx: float | None) -> tuple[float, int]:
    """Step and even step count covering domain_cutoff; for the square well
    the step is snapped so that x = a falls on a grid point."""
    h = default_dx(spec) if dx is None else float(dx)
    if h <= 0.0:
        raise ValueError("dx must be positive")
    if spec.kind is PotentialKind.FINITE_SQUARE_WELL:
        h = spec.a / max(1, round(spec.a / h))
    n = int(math.ceil(domain_cutoff(spec, E) / h - 1e-9))
    if n % 2:
        n += 1
    return h, n


def _validate(spec: PotentialSpec, E: float) -> None:
    if spec.kind is PotentialKind.DELTA_WELL:
        raise ValueError("delta well is handled analytically, not by shooting")
    if not (energy_floor(spec) < E < 0.0):
        raise ValueError(f"E must lie in ({energy_floor(spec)}, 0), got {E}")


def integrate_inward(spec: PotentialSpec, E: float, dx: float | None = None) -> ShotResult:
    """Shoot from x_max down to 0 at trial energy E.

    Starts from a tiny seed with the WKB decay slope psi' = -sqrt(V-E) psi
    and returns the max-normalised samples together with psi(0+), psi'(0+)
    and the node count on (0, x_max).
    """
    _validate(spec, E)
    h, n = _grid(spec, E, dx)
    code = _kernels.KIND_CODES[spec.kind.value]
    samples = np.empty(n + 1)
    dpsi, rescales, ok = _kernels._shoot_sampled(code, spec.v0, spec.a, E, h, n, samples)
    if not ok:
        raise ValueError(f"V(x_max) <= E at E={E}; cannot seed a decaying start")
    scale = 1.0 / np.max(np.abs(samples))
    samples *= scale
    shot = ShotResult(
        e_trial=E,
        psi0=float(samples[0]),
        dpsi0=float(dpsi * scale),
        samples=samples,
        dx=h,
        x_max=n * h,
        nodes=0,
        rescales=rescales,
    )
    shot.nodes = count_nodes(shot)
    return shot


def count_nodes(shot: ShotResult) -> int:
    """Strict sign changes of psi on the open interval (0, x_max), ignoring
    samples below the tail-noise threshold."""
    interior = shot.samples[1:-1]
    live = interior[np.abs(interior) >= NODE_NOISE]
    if live.size < 2:
        return 0
    return int(np.count_nonzero(live[1:] * live[:-1] < 0.0))


def matching_residual(spec: PotentialSpec, E: float, dx: float | None = None) -> float:
    """Junction mismatch whose zeros are the eigenvalues.

    Half wells, square well: psi'(0+) - k psi(0+) with k = sqrt(-E), the
    condition for joining the analytic left tail e^{kx}.  Full Eckart well
    (symmetric about 0): psi(0) psi'(0), which vanishes at every even state
    (psi'(0) = 0) and odd state (psi(0) = 0) and changes sign at each.
    Computed from the max-normalised shot.
    """
    _validate(spec, E)
    h, n = _grid(spec, E, dx)
    code = _kernels.KIND_CODES[spec.kind.value]
    u, v, amax, _seed, _resc, ok = _kernels._shoot_scalar(code, spec.v0, spec.a, E, h, n)
    if not ok:
        raise ValueError(f"V(x_max) <= E at E={E}; cannot seed a decaying start")
    psi0 = u / amax
    dpsi0 = v / amax
    if spec.kind is PotentialKind.FULL_ECKART:
        return psi0 * dpsi0
    return dpsi0 - math.sqrt(-E) * psi0


def scan_residuals(
    spec: PotentialSpec, energies: np.ndarray, dx: float | None = None
) -> np.ndarray:
    """matching_residual at many energies (vectorised scan helper)."""
    if spec.kind is PotentialKind.DELTA_WELL:
        raise ValueError("delta well is handled analytically, not by shooting")
    energies = np.asarray(energies, dtype=float)
    code = _kernels.KIND_CODES[spec.kind.value]
    h_any = default_dx(spec) if dx is None else float(dx)
    if spec.kind is PotentialKind.FINITE_SQUARE_WELL:
        h_any = spec.a / max(1, round(spec.a / h_any))
    n_steps = np.empty(energies.size, dtype=np.int64)
    for i, E in enumerate(energies):
        _validate(spec, float(E))
        n = int(math.ceil(domain_cutoff(spec, float(E)) / h_any - 1e-9))
        n_steps[i] = n + 1 if n % 2 else n
    psi0, dpsi0 = _kernels._scan_shots(code, spec.v0, spec.a, energies, h_any, n_steps)
    if spec.kind is PotentialKind.FULL_ECKART:
        return psi0 * dpsi0
    return dpsi0 - np.sqrt(-energies) * psi0
