"""Quantitative diagnostics: momentum moments in both representations,
partial-moment divergence verdicts, tail-exponent fits and stationary-state
force-balance (Ehrenfest) residuals.

Divergence of <p^{2j}> is operationalised through partial moments
M_{2j}(P) = int_{|p|<=P} p^{2j} I(p) dp on equally spaced cutoffs: the
growth ratio rho = [M(P4)-M(P3)] / [M(P2)-M(P1)] is ~1 for the linear
growth a p^-6 tail implies and ~0 once the moment has converged.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .model import (
    Continuity,
    PotentialKind,
    PotentialSpec,
    classify,
    potential_value,
    smooth_derivative,
)
from .momentum import MomentumDistribution, plateau_c6
from .wavefun import WaveFunction, _simpson

__all__ = [
    "Verdict",
    "DivergenceReport",
    "TailFit",
    "EhrenfestReport",
    "CrossRepReport",
    "p2_position",
    "p4_position",
    "partial_moment",
    "divergence_verdict",
    "tail_exponent",
    "ehrenfest",
    "cross_representation",
    "DivergentMomentError",
    "DEFAULT_CUTOFFS",
    "DEFAULT_WINDOW",
]

DEFAULT_CUTOFFS = (40.0, 80.0, 120.0, 160.0)
DEFAULT_WINDOW = (40.0, 150.0)

#: growth-ratio thresholds for the divergence verdict
RHO_DIVERGENT = 0.5
RHO_CONVERGENT = 0.2

#: increments below this fraction of M(P4) count as fully converged
NEGLIGIBLE_INCREMENT = 1e-9


class DivergentMomentError(ValueError):
    """Raised when a position-space moment is requested for a state whose
    moment diverges (the delta well's <p^4>)."""


class Verdict(enum.Enum):
    DIVERGENT = "divergent"
    CONVERGENT = "convergent"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class DivergenceReport:
    order: int
    cutoffs: tuple[float, ...]
    partials: tuple[float, ...]
    growth_ratio: float
    verdict: Verdict
    linear_rate: float | None = None  # slope of M(P) vs P when divergent
    limit_estimate: float | None = None  # M(P4) + tail when convergent


@dataclass(frozen=True)
class TailFit:
    window: tuple[float, float]
    slope: float
    intercept: float
    r2: float
    plateau_c6: float


@dataclass(frozen=True)
class EhrenfestReport:
    interior: float
    boundary: float
    residual: float
    relative: float
    note: str | None = None


@dataclass(frozen=True)
class CrossRepReport:
    p2_position: float
    p2_momentum: float
    p2_rel: float
    p4_position: float | None
    p4_momentum: float | None
    p4_rel: float | None
    p1_abs: float
    p3_abs: float


def _grids(wf: WaveFunction) -> tuple[np.ndarray, np.ndarray]:
    return wf.xs, wf.samples


def _fsw_split(wf: WaveFunction) -> int:
    """Grid index of the interior square-well edge (dx divides a)."""
    j = round(wf.spec.a / wf.dx)
    if abs(j * wf.dx - wf.spec.a) > 1e-12:
        raise ValueError("square-well edge does not sit on the sample grid")
    return j


def _v_moment(wf: WaveFunction, power: int) -> float:
    """int (E - V)^power psi^2 dx over the whole line.

    The left side contributes E^power * psi0^2/(2k) for the tail models
    (V = 0 there), mirrors the right side for the symmetric well, and uses
    the sifting property of the delta term for the delta well (power 1 only).
    """
    spec = wf.spec
    E = wf.state.energy
    if spec.kind is PotentialKind.DELTA_WELL:
        if power != 1:
            raise DivergentMomentError("delta-well moments above (E-V) diverge")
        # V = -lam delta(x): int V psi^2 = -lam psi(0)^2, so (E - V) integrates
        # to E + lam psi0^2 against the unit-normalized density
        return E + spec.lam * wf.psi0**2
    xs, psi = _grids(wf)
    if spec.kind is PotentialKind.FINITE_SQUARE_WELL:
        j = _fsw_split(wf)
        inner = (E + spec.v0) ** power * _simpson(psi[: j + 1] ** 2, wf.dx)
        outer = E**power * _simpson(psi[j:] ** 2, wf.dx)
        right = inner + outer
        left = E**power * wf.psi0**2 / (2.0 * wf.state.k)
        return right + left
    v = potential_value(spec, xs)
    right = _simpson((E - v) ** power * psi**2, wf.dx)
    if spec.kind is PotentialKind.FULL_ECKART:
        return 2.0 * right  # V and psi^2 are both even
    left = E**power * wf.psi0**2 / (2.0 * wf.state.k)
    return right + left


def p2_position(wf: WaveFunction, spec: PotentialSpec | None = None) -> float:
    """<p^2> in position space, E - <V> (equals <E - V>)."""
    return _v_moment(wf, 1)


def p4_position(wf: WaveFunction, spec: PotentialSpec | None = None) -> float:
    """<p^4> in position space as <(E - V)^2>.

    Valid for jump-discontinuous and smooth wells, where the boundary term
    of the operator rearrangement vanishes; refuses the delta well, whose
    <p^4> diverges.
    """
    if wf.spec.kind is PotentialKind.DELTA_WELL:
        raise DivergentMomentError("<p^4> diverges for the delta well")
    return _v_moment(wf, 2)


def partial_moment(md: MomentumDistribution, order: int, cutoff: float) -> float:
    """M_{2j}(P) = int_{|p|<=P} p^{2j} I dp = 2 Simpson over [0, P]."""
    if order not in (2, 4, 6):
        raise ValueError("order must be one of 2, 4, 6")
    if cutoff < 0.0 or cutoff > md.p_max + 1e-9:
        raise ValueError("cutoff must lie within [0, p_max]")
    idx = int(round(cutoff / md.dp))
    if idx % 2:
        idx -= 1
    if idx == 0:
        return 0.0
    p = md.p[md.n_half : md.n_half + idx + 1]
    half = md.intensity[md.n_half : md.n_half + idx + 1]
    return 2.0 * _simpson(p**order * half, md.dp)


def divergence_verdict(
    md: MomentumDistribution,
    order: int,
    cutoffs: tuple[float, ...] = DEFAULT_CUTOFFS,
) -> DivergenceReport:
    """Growth-ratio verdict on <p^order> from partial moments at equally
    spaced cutoffs.  Increments that are negligible against M(P4) count as
    converged (the ratio of two noise-level increments carries no signal)."""
    if len(cutoffs) != 4:
        raise ValueError("need exactly four cutoffs")
    gaps = np.diff(cutoffs)
    if not np.allclose(gaps, gaps[0], rtol=1e-9):
        raise ValueError("cutoffs must be equally spaced")
    partials = tuple(partial_moment(md, order, c) for c in cutoffs)
    inc_low = partials[1] - partials[0]
    inc_high = partials[3] - partials[2]
    scale = max(abs(partials[3]), 1e-300)
    if abs(inc_low) <= NEGLIGIBLE_INCREMENT * scale and abs(inc_high) <= NEGLIGIBLE_INCREMENT * scale:
        rho = 0.0
    else:
        rho = inc_high / inc_low
    if rho > RHO_DIVERGENT:
        verdict = Verdict.DIVERGENT
    elif rho < RHO_CONVERGENT:
        verdict = Verdict.CONVERGENT
    else:
        verdict = Verdict.INDETERMINATE
    linear_rate = None
    limit_estimate = None
    if verdict is Verdict.DIVERGENT:
        linear_rate = float(np.polyfit(cutoffs, partials, 1)[0])
    elif verdict is Verdict.CONVERGENT:
        limit_estimate = partials[3] + _tail_beyond(md, order, cutoffs[3])
    return DivergenceReport(
        order=order,
        cutoffs=tuple(float(c) for c in cutoffs),
        partials=partials,
        growth_ratio=float(rho),
        verdict=verdict,
        linear_rate=linear_rate,
        limit_estimate=limit_estimate,
    )


def _tail_beyond(md: MomentumDistribution, order: int, P: float) -> float:
    """Mass of p^order I beyond |p| = P assuming the I ~ c6 p^-6 tail of a
    jump well (zero for order 6, where a p^-6 tail has no finite limit)."""
    if order >= 6:
        return 0.0
    c6 = plateau_c6(md)
    return 2.0 * c6 * P ** (order - 5) / (5.0 - order)


def tail_exponent(
    md: MomentumDistribution, window: tuple[float, float] = DEFAULT_WINDOW
) -> TailFit:
    """Least-squares fit of ln I vs ln p over a positive-p window, plus the
    median p^6 I plateau."""
    lo, hi = window
    if lo < 0.0 or hi > md.p_max + 1e-9 or hi <= lo:
        raise ValueError("window must lie inside [0, p_max]")
    p = md.p[md.n_half :]
    half = md.intensity[md.n_half :]
    mask = (p >= lo) & (p <= hi)
    if np.count_nonzero(mask) < 50:
        raise ValueError("need at least 50 fit points in the window")
    if np.any(half[mask] <= 0.0):
        raise ValueError("I <= 0 in the window (quadrature noise floor); shrink the window")
    lx = np.log(p[mask])
    ly = np.log(half[mask])
    slope, intercept = np.polyfit(lx, ly, 1)
    fitted = slope * lx + intercept
    ss_res = float(np.sum((ly - fitted) ** 2))
    ss_tot = float(np.sum((ly - np.mean(ly)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0.0 else 1.0
    return TailFit(
        window=(float(lo), float(hi)),
        slope=float(slope),
        intercept=float(intercept),
        r2=r2,
        plateau_c6=float(np.median(p[mask] ** 6 * half[mask])),
    )


def ehrenfest(wf: WaveFunction, spec: PotentialSpec | None = None) -> EhrenfestReport:
    """Stationary-state force balance <V'> = 0.

    Half wells: the smooth interior force integral must cancel the jump
    term v0 psi(0)^2.  Square well: the two edge terms must cancel, so the
    report carries v0 (psi(0)^2 - psi(a)^2).  Delta well and symmetric well
    satisfy the identity by odd symmetry with no quadrature.
    """
    spec = wf.spec
    if spec.kind is PotentialKind.DELTA_WELL:
        return EhrenfestReport(0.0, 0.0, 0.0, 0.0, note="odd integrand; identity holds exactly")
    if spec.kind is PotentialKind.FULL_ECKART:
        return EhrenfestReport(0.0, 0.0, 0.0, 0.0, note="odd integrand over even density")
    xs, psi = _grids(wf)
    if spec.kind is PotentialKind.FINITE_SQUARE_WELL:
        j = _fsw_split(wf)
        psi_a = float(psi[j])
        boundary = spec.v0 * (wf.psi0**2 - psi_a**2)
        scale = spec.v0 * max(wf.psi0**2, psi_a**2)
        return EhrenfestReport(
            interior=0.0,
            boundary=boundary,
            residual=boundary,
            relative=abs(boundary) / scale,
        )
    # U' = -V' of the smooth part; its value at the junction is the x->0+ limit
    vprime = np.empty_like(xs)
    vprime[1:] = smooth_derivative(spec, xs[1:])
    vprime[0] = smooth_derivative(spec, wf.dx * 1e-6)
    interior = -_simpson(vprime * psi**2, wf.dx)  # int U' psi^2
    boundary = spec.v0 * wf.psi0**2
    residual = interior + boundary  # the identity is -interior - boundary = 0
    return EhrenfestReport(
        interior=interior,
        boundary=boundary,
        residual=residual,
        relative=abs(residual) / max(abs(interior), abs(boundary)),
    )


def cross_representation(wf: WaveFunction, md: MomentumDistribution) -> CrossRepReport:
    """<p^2> and <p^4> computed independently in both representations, and
    the odd moments <p>, <p^3> (exactly zero for an even intensity).

    The truncated momentum integrals are completed with the measured tail:
    a jump well's I ~ c6 p^-6 contributes 2 c6/(3 P^3) to <p^2> and
    2 c6/P to <p^4>; the delta well's I ~ c4 p^-4 contributes 2 c4/P
    to <p^2>.
    """
    spec = wf.spec
    cls = classify(spec)
    P = md.p_max
    m2 = partial_moment(md, 2, P)
    if cls.continuity is Continuity.DELTA_SINGULAR:
        p = md.p[md.n_half :]
        half = md.intensity[md.n_half :]
        mask = (p >= DEFAULT_WINDOW[0]) & (p <= DEFAULT_WINDOW[1])
        c4 = float(np.median(p[mask] ** 4 * half[mask]))
        p2_m = m2 + 2.0 * c4 / P
        p4_m = None
        p4_x = None
        p4_rel = None
    else:
        c6 = plateau_c6(md)
        p2_m = m2 + 2.0 * c6 / (3.0 * P**3)
        p4_m = partial_moment(md, 4, P) + 2.0 * c6 / P
        p4_x = p4_position(wf)
        p4_rel = abs(p4_x - p4_m) / abs(p4_x)
    p2_x = p2_position(wf)
    full_p = md.p
    full_i = md.intensity
    p1 = _simpson(full_p * full_i, md.dp)
    p3 = _simpson(full_p**3 * full_i, md.dp)
    return CrossRepReport(
        p2_position=p2_x,
        p2_momentum=float(p2_m),
        p2_rel=abs(p2_x - p2_m) / abs(p2_x),
        p4_position=p4_x,
        p4_momentum=p4_m,
        p4_rel=p4_rel,
        p1_abs=abs(float(p1)),
        p3_abs=abs(float(p3)),
    )
