"""Catalog of 1-D potential wells with a finite jump at the origin.

Natural units 2m = 1, hbar = 1 are used throughout the package, so the
left-tail decay constant of a bound state at energy E < 0 is k = sqrt(-E)
and E = -k^2.

The four half wells share the shape V(x < 0) = 0, V(0+) = -v0:

    half-parabolic    V(x >= 0) = -v0 (1 - x^2/a^2)
    half-triangular   V(x >= 0) = -v0 (1 - x/a)
    half-eckart       V(x >= 0) = -v0 sech^2(x/a)
    half-exponential  V(x >= 0) = -v0 (2 - exp(2x/a))

The half-parabolic/triangular/exponential formulas keep rising for all
x >= 0 (they are not truncated at x = a).  The finite square well is
V = -v0 on [0, a), the delta well is V = -lam * delta(x), and the full
Eckart well -v0 sech^2(x/a) on the whole line is the smooth control model.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PotentialKind",
    "PotentialSpec",
    "Continuity",
    "ContinuityClass",
    "potential_value",
    "smooth_derivative",
    "classify",
    "energy_floor",
    "domain_cutoff",
    "default_dx",
    "WKB_MARGIN",
]

#: e-folds of forbidden-region decay required beyond the turning point;
#: exp(-35) ~ 6e-16 is below double-precision resolution.
WKB_MARGIN = 35.0

#: |V| <= FLAT_TAIL_EPS * v0 defines where a flat-tailed well has died off.
FLAT_TAIL_EPS = 1e-9


class PotentialKind(enum.Enum):
    """Well models; values double as the CLI names."""

    HALF_PARABOLIC = "half-parabolic"
    HALF_TRIANGULAR = "half-triangular"
    HALF_ECKART = "half-eckart"
    HALF_EXPONENTIAL = "half-exponential"
    FINITE_SQUARE_WELL = "fsw"
    DELTA_WELL = "delta"
    FULL_ECKART = "full-eckart"


HALF_WELL_KINDS = (
    PotentialKind.HALF_PARABOLIC,
    PotentialKind.HALF_TRIANGULAR,
    PotentialKind.HALF_ECKART,
    PotentialKind.HALF_EXPONENTIAL,
)

#: kinds whose V(x) has at least one finite jump
JUMP_KINDS = HALF_WELL_KINDS + (PotentialKind.FINITE_SQUARE_WELL,)

#: kinds whose smooth part rises without bound as x grows
RISING_KINDS = (
    PotentialKind.HALF_PARABOLIC,
    PotentialKind.HALF_TRIANGULAR,
    PotentialKind.HALF_EXPONENTIAL,
)


class Continuity(enum.Enum):
    SMOOTH = "smooth"
    JUMP_DISCONTINUOUS = "jump-discontinuous"
    DELTA_SINGULAR = "delta-singular"


@dataclass(frozen=True)
class ContinuityClass:
    """Continuity class of a well and the momentum-tail behaviour it implies."""

    continuity: Continuity
    predicted_tail_exponent: int | None
    first_divergent_even_moment: int | None


@dataclass(frozen=True)
class PotentialSpec:
    """A well model: kind plus depth scale v0, length scale a and delta
    strength lam (energy*length, used by the delta well only)."""

    kind: PotentialKind
    v0: float = 15.0
    a: float = 2.0
    lam: float = 2.0

    def __post_init__(self) -> None:
        for name in ("v0", "a", "lam"):
            val = getattr(self, name)
            if not math.isfinite(val) or val <= 0.0:
                raise ValueError(f"{name} must be positive and finite, got {val}")


def _check_finite(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("position must be finite")
    return arr


def potential_value(spec: PotentialSpec, x):
    """Evaluate V(x).  Accepts a scalar or an array.

    The delta well has no pointwise value and is rejected.  For the finite
    square well the step convention is V = -v0 on 0 <= x < a and 0 at x >= a.
    """
    if spec.kind is PotentialKind.DELTA_WELL:
        raise ValueError("delta well has no pointwise potential value")
    arr = _check_finite(x)
    v0, a = spec.v0, spec.a
    kind = spec.kind
    if kind is PotentialKind.HALF_PARABOLIC:
        val = np.where(arr >= 0.0, -v0 * (1.0 - (arr / a) ** 2), 0.0)
    elif kind is PotentialKind.HALF_TRIANGULAR:
        val = np.where(arr >= 0.0, -v0 * (1.0 - arr / a), 0.0)
    elif kind is PotentialKind.HALF_ECKART:
        val = np.where(arr >= 0.0, -v0 / np.cosh(arr / a) ** 2, 0.0)
    elif kind is PotentialKind.HALF_EXPONENTIAL:
        val = np.where(arr >= 0.0, -v0 * (2.0 - np.exp(np.minimum(2.0 * arr / a, 700.0))), 0.0)
    elif kind is PotentialKind.FINITE_SQUARE_WELL:
        val = np.where((arr >= 0.0) & (arr < a), -v0, 0.0)
    elif kind is PotentialKind.FULL_ECKART:
        val = -v0 / np.cosh(arr / a) ** 2
    else:  # pragma: no cover
        raise ValueError(f"unhandled kind {kind}")
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(val)
    return val


def smooth_derivative(spec: PotentialSpec, x):
    """Derivative of the smooth part of V, excluding all distributional terms.

    Rejects the discontinuity abscissae (x = 0 for every catalog well,
    additionally x = a for the finite square well); the left piece of the
    half wells differentiates to zero.
    """
    if spec.kind is PotentialKind.DELTA_WELL:
        raise ValueError("delta well has no smooth part")
    arr = _check_finite(x)
    v0, a = spec.v0, spec.a
    kind = spec.kind
    if kind is not PotentialKind.FULL_ECKART and np.any(arr == 0.0):
        raise ValueError("x = 0 lies on the jump; smooth derivative undefined there")
    if kind is PotentialKind.FINITE_SQUARE_WELL and np.any(arr == a):
        raise ValueError("x = a lies on the jump; smooth derivative undefined there")
    if kind is PotentialKind.HALF_PARABOLIC:
        val = np.where(arr > 0.0, 2.0 * v0 * arr / a**2, 0.0)
    elif kind is PotentialKind.HALF_TRIANGULAR:
        val = np.where(arr > 0.0, v0 / a, 0.0)
    elif kind is PotentialKind.HALF_ECKART:
        val = np.where(arr > 0.0, (2.0 * v0 / a) / np.cosh(arr / a) ** 2 * np.tanh(arr / a), 0.0)
    elif kind is PotentialKind.HALF_EXPONENTIAL:
        val = np.where(arr > 0.0, (2.0 * v0 / a) * np.exp(np.minimum(2.0 * arr / a, 700.0)), 0.0)
    elif kind is PotentialKind.FINITE_SQUARE_WELL:
        val = np.zeros_like(arr)
    elif kind is PotentialKind.FULL_ECKART:
        val = (2.0 * v0 / a) / np.cosh(arr / a) ** 2 * np.tanh(arr / a)
    else:  # pragma: no cover
        raise ValueError(f"unhandled kind {kind}")
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(val)
    return val


_CLASS_TABLE = {
    PotentialKind.HALF_PARABOLIC: ContinuityClass(Continuity.JUMP_DISCONTINUOUS, -6, 6),
    PotentialKind.HALF_TRIANGULAR: ContinuityClass(Continuity.JUMP_DISCONTINUOUS, -6, 6),
    PotentialKind.HALF_ECKART: ContinuityClass(Continuity.JUMP_DISCONTINUOUS, -6, 6),
    PotentialKind.HALF_EXPONENTIAL: ContinuityClass(Continuity.JUMP_DISCONTINUOUS, -6, 6),
    PotentialKind.FINITE_SQUARE_WELL: ContinuityClass(Continuity.JUMP_DISCONTINUOUS, -6, 6),
    PotentialKind.DELTA_WELL: ContinuityClass(Continuity.DELTA_SINGULAR, -4, 4),
    PotentialKind.FULL_ECKART: ContinuityClass(Continuity.SMOOTH, None, None),
}


def classify(spec: PotentialSpec) -> ContinuityClass:
    """Continuity class with the predicted momentum-tail exponent and the
    first divergent even moment (total and deterministic over the catalog)."""
    return _CLASS_TABLE[spec.kind]


def energy_floor(spec: PotentialSpec) -> float:
    """min over x of V(x); for the delta well, its single eigenvalue -lam^2/4."""
    if spec.kind is PotentialKind.DELTA_WELL:
        return -spec.lam**2 / 4.0
    return -spec.v0


def _turning_point(spec: PotentialSpec, E: float) -> float:
    """Classical turning point of the rising half wells (V(x_t) = E, x_t > 0)."""
    v0, a = spec.v0, spec.a
    if spec.kind is PotentialKind.HALF_PARABOLIC:
        return a * math.sqrt(1.0 + E / v0)
    if spec.kind is PotentialKind.HALF_TRIANGULAR:
        return a * (1.0 + E / v0)
    if spec.kind is PotentialKind.HALF_EXPONENTIAL:
        return 0.5 * a * math.log(2.0 + E / v0)
    raise ValueError(f"{spec.kind} has no rising wall")


def domain_cutoff(spec: PotentialSpec, E: float, margin: float = WKB_MARGIN) -> float:
    """Right end of the integration domain for a shot at trial energy E.

    Rising walls: smallest x with int_{x_t}^{x} sqrt(V - E) dx >= margin.
    Flat tails (Eckart, FSW, full Eckart, delta): the larger of the point
    where |V| <= 1e-9 v0 and margin/sqrt(-E) free-decay lengths.
    """
    floor = energy_floor(spec)
    if spec.kind is PotentialKind.DELTA_WELL:
        # the delta well's only state sits exactly at the floor
        if not (floor <= E < 0.0):
            raise ValueError(f"E must lie in [{floor}, 0), got {E}")
        return margin / math.sqrt(-E)
    if not (floor < E < 0.0):
        raise ValueError(f"E must lie in ({floor}, 0), got {E}")
    if spec.kind in RISING_KINDS:
        xt = max(_turning_point(spec, E), 0.0)
        step = spec.a / 256.0
        n = 2048
        while True:
            xs = xt + step * np.arange(n + 1)
            g = np.sqrt(np.maximum(potential_value(spec, xs) - E, 0.0))
            action = np.concatenate(([0.0], np.cumsum(0.5 * (g[1:] + g[:-1]) * step)))
            hit = np.nonzero(action >= margin)[0]
            if hit.size:
                return float(xs[hit[0]])
            if n > 1_000_000:  # pragma: no cover
                raise RuntimeError("WKB action failed to reach the margin")
            n *= 2
    # flat-tailed models
    v0, a = spec.v0, spec.a
    if spec.kind is PotentialKind.FINITE_SQUARE_WELL:
        x_dead = a
    else:
        # v0 sech^2(x/a) <= eps*v0  <=>  cosh(x/a) >= 1/sqrt(eps)
        x_dead = a * math.acosh(1.0 / math.sqrt(FLAT_TAIL_EPS))
    return max(x_dead, margin / math.sqrt(-E))


def default_dx(spec: PotentialSpec) -> float:
    """Default integration step, min(a/2000, 1e-3 a)."""
    return min(spec.a / 2000.0, 1e-3 * spec.a)
