"""One-shot verification suite: every release-gating check with its pinned
tolerance, runnable from the CLI (`halfwell suite`) or pytest.

A Workspace memoizes spectra, wavefunctions and momentum distributions so
the checks share one solve of the catalog.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .analysis import (
    DEFAULT_CUTOFFS,
    Verdict,
    cross_representation,
    divergence_verdict,
    ehrenfest,
    tail_exponent,
)
from .eigensolver import BoundState, refine, scan_brackets, solve_all
from .model import HALF_WELL_KINDS, JUMP_KINDS, PotentialKind, PotentialSpec, default_dx
from .momentum import DEFAULT_DP, DEFAULT_P_MAX, MomentumDistribution, parseval_residual, transform
from .wavefun import WaveFunction, assemble, norm_residual

__all__ = ["CriterionResult", "Workspace", "run_all", "CRITERIA"]

#: reference eigenvalues of the four half wells at v0 = 15, a = 2
REFERENCE_ENERGIES = {
    PotentialKind.HALF_PARABOLIC: (-10.6370, -3.9894),
    PotentialKind.HALF_TRIANGULAR: (-8.1408, -1.8025),
    PotentialKind.HALF_ECKART: (-10.9628, -5.8470, -2.2641, -0.3400),
    PotentialKind.HALF_EXPONENTIAL: (-3.9249,),
}

EIGENVALUE_TOL = 2e-3

ALL_KINDS = (
    PotentialKind.HALF_PARABOLIC,
    PotentialKind.HALF_TRIANGULAR,
    PotentialKind.HALF_ECKART,
    PotentialKind.HALF_EXPONENTIAL,
    PotentialKind.FINITE_SQUARE_WELL,
    PotentialKind.DELTA_WELL,
    PotentialKind.FULL_ECKART,
)


@dataclass
class CriterionResult:
    cid: str
    description: str
    passed: bool
    detail: str


@dataclass
class Workspace:
    """Lazy per-kind cache of solved states, wavefunctions and transforms."""

    dx: float | None = None
    p_max: float = DEFAULT_P_MAX
    dp: float = DEFAULT_DP
    _states: dict = field(default_factory=dict, repr=False)
    _waves: dict = field(default_factory=dict, repr=False)
    _dists: dict = field(default_factory=dict, repr=False)

    def spec(self, kind: PotentialKind) -> PotentialSpec:
        return PotentialSpec(kind)

    def states(self, kind: PotentialKind) -> list[BoundState]:
        if kind not in self._states:
            self._states[kind] = solve_all(self.spec(kind), dx=self.dx)
        return self._states[kind]

    def wave(self, kind: PotentialKind, i: int = 0) -> WaveFunction:
        key = (kind, i)
        if key not in self._waves:
            self._waves[key] = assemble(self.spec(kind), self.states(kind)[i], dx=self.dx)
        return self._waves[key]

    def dist(self, kind: PotentialKind, i: int = 0) -> MomentumDistribution:
        key = (kind, i)
        if key not in self._dists:
            self._dists[key] = transform(self.wave(kind, i), p_max=self.p_max, dp=self.dp)
        return self._dists[key]


def check_eigenvalues(ws: Workspace) -> tuple[bool, str]:
    """Half-well eigenvalues within 2e-3 of the reference values."""
    worst = 0.0
    lines = []
    ok = True
    for kind, refs in REFERENCE_ENERGIES.items():
        states = ws.states(kind)
        if len(states) != len(refs):
            return False, f"{kind.value}: found {len(states)} states, expected {len(refs)}"
        for st, ref in zip(states, refs):
            err = abs(st.energy - ref)
            worst = max(worst, err)
            if err > EIGENVALUE_TOL:
                ok = False
                lines.append(f"{kind.value} E={st.energy:.6f} vs {ref} (|err|={err:.2e})")
    detail = f"max |E - ref| = {worst:.2e} (tol {EIGENVALUE_TOL})"
    if lines:
        detail += "; " + "; ".join(lines)
    return ok, detail


def check_state_counts(ws: Workspace) -> tuple[bool, str]:
    """Exactly 2/2/4/1 bound states for the four half wells."""
    expected = {
        PotentialKind.HALF_PARABOLIC: 2,
        PotentialKind.HALF_TRIANGULAR: 2,
        PotentialKind.HALF_ECKART: 4,
        PotentialKind.HALF_EXPONENTIAL: 1,
    }
    counts = {k.value: len(ws.states(k)) for k in expected}
    ok = all(len(ws.states(k)) == n for k, n in expected.items())
    return ok, f"counts {counts}"


def check_delta_oracle(ws: Workspace) -> tuple[bool, str]:
    """Delta well end to end: numeric phi vs sqrt(2/pi)/(1+p^2) within 1e-6
    at p in {0,1,5,10,50}; <p^2> = 1 +- 1e-4 in both representations."""
    md = ws.dist(PotentialKind.DELTA_WELL, 0)
    worst = 0.0
    for p in (0.0, 1.0, 5.0, 10.0, 50.0):
        exact = math.sqrt(2.0 / math.pi) / (1.0 + p * p)
        worst = max(worst, abs(md.at(p) - exact))
    cr = cross_representation(ws.wave(PotentialKind.DELTA_WELL, 0), md)
    e_x = abs(cr.p2_position - 1.0)
    e_p = abs(cr.p2_momentum - 1.0)
    ok = worst < 1e-6 and e_x < 1e-4 and e_p < 1e-4
    return ok, f"max |phi - exact| = {worst:.2e}; <p^2> errs x:{e_x:.2e} p:{e_p:.2e}"


def check_tail_exponents(ws: Workspace) -> tuple[bool, str]:
    """Ground-state tail slopes: jump wells -6 +- 0.3 on [40,150], delta
    -4 +- 0.05, full Eckart < -12 on [20,60] (smooth control)."""
    ok = True
    parts = []
    for kind in JUMP_KINDS:
        fit = tail_exponent(ws.dist(kind, 0))
        good = abs(fit.slope + 6.0) <= 0.3
        ok &= good
        parts.append(f"{kind.value}:{fit.slope:.3f}{'' if good else '!'}")
    fit = tail_exponent(ws.dist(PotentialKind.DELTA_WELL, 0))
    good = abs(fit.slope + 4.0) <= 0.05
    ok &= good
    parts.append(f"delta:{fit.slope:.4f}{'' if good else '!'}")
    fit = tail_exponent(ws.dist(PotentialKind.FULL_ECKART, 0), window=(20.0, 60.0))
    good = fit.slope < -12.0
    ok &= good
    parts.append(f"full-eckart[20,60]:{fit.slope:.2f}{'' if good else '!'}")
    return ok, "slopes " + " ".join(parts)


def check_divergence_verdicts(ws: Workspace) -> tuple[bool, str]:
    """Order-6 divergent / order-4 convergent for jump wells, order-4
    divergent for delta, order-6 convergent for the smooth control."""
    ok = True
    parts = []
    for kind in JUMP_KINDS:
        r6 = divergence_verdict(ws.dist(kind, 0), 6)
        r4 = divergence_verdict(ws.dist(kind, 0), 4)
        good = r6.verdict is Verdict.DIVERGENT and r4.verdict is Verdict.CONVERGENT
        ok &= good
        parts.append(f"{kind.value}: rho6={r6.growth_ratio:.2f} rho4={r4.growth_ratio:.3f}{'' if good else '!'}")
    r4 = divergence_verdict(ws.dist(PotentialKind.DELTA_WELL, 0), 4)
    good = r4.verdict is Verdict.DIVERGENT
    ok &= good
    parts.append(f"delta: rho4={r4.growth_ratio:.2f}{'' if good else '!'}")
    r6 = divergence_verdict(ws.dist(PotentialKind.FULL_ECKART, 0), 6)
    good = r6.verdict is Verdict.CONVERGENT
    ok &= good
    parts.append(f"full-eckart: rho6={r6.growth_ratio:.2f}{'' if good else '!'}")
    return ok, "; ".join(parts)


def check_cross_representation(ws: Workspace) -> tuple[bool, str]:
    """<p^2> within 1e-3 relative and <p^4> within 2% across representations
    for every catalog ground state."""
    ok = True
    worst2 = worst4 = 0.0
    for kind in ALL_KINDS:
        cr = cross_representation(ws.wave(kind, 0), ws.dist(kind, 0))
        worst2 = max(worst2, cr.p2_rel)
        ok &= cr.p2_rel < 1e-3
        if cr.p4_rel is not None:
            worst4 = max(worst4, cr.p4_rel)
            ok &= cr.p4_rel < 0.02
    return ok, f"worst p2 rel {worst2:.2e} (tol 1e-3); worst p4 rel {worst4:.2e} (tol 2e-2)"


def check_ehrenfest(ws: Workspace) -> tuple[bool, str]:
    """Force balance: relative residual < 1e-3 for every half-well state;
    square-well edge densities equal to 1e-8."""
    ok = True
    worst = 0.0
    for kind in HALF_WELL_KINDS:
        for i in range(len(ws.states(kind))):
            rel = ehrenfest(ws.wave(kind, i)).relative
            worst = max(worst, rel)
            ok &= rel < 1e-3
    edge_worst = 0.0
    spec = ws.spec(PotentialKind.FINITE_SQUARE_WELL)
    for i in range(len(ws.states(PotentialKind.FINITE_SQUARE_WELL))):
        wf = ws.wave(PotentialKind.FINITE_SQUARE_WELL, i)
        rep = ehrenfest(wf)
        edge = abs(rep.boundary) / spec.v0  # |psi(0)^2 - psi(a)^2|
        edge_worst = max(edge_worst, edge)
        ok &= edge < 1e-8
    return ok, f"worst half-well rel {worst:.2e} (tol 1e-3); worst fsw edge diff {edge_worst:.2e} (tol 1e-8)"


def check_unitarity(ws: Workspace) -> tuple[bool, str]:
    """|norm - 1| < 1e-9 and Parseval residual < 1e-4 for all catalog states."""
    ok = True
    worst_n = worst_p = 0.0
    failures = []
    for kind in ALL_KINDS:
        for i in range(len(ws.states(kind))):
            nr = norm_residual(ws.wave(kind, i))
            pr = parseval_residual(ws.dist(kind, i))
            worst_n = max(worst_n, nr)
            worst_p = max(worst_p, pr)
            if nr >= 1e-9 or pr >= 1e-4:
                ok = False
                failures.append(f"{kind.value}[{i}] norm={nr:.1e} parseval={pr:.1e}")
    detail = f"worst norm res {worst_n:.2e} (tol 1e-9); worst parseval {worst_p:.2e} (tol 1e-4)"
    if failures:
        detail += "; failing: " + ", ".join(failures)
    return ok, detail


def check_richardson(ws: Workspace) -> tuple[bool, str]:
    """Every eigenvalue's error shrinks by a factor >= 10 per dx halving
    (4th-order integrator gives ~16)."""
    ok = True
    worst = math.inf
    for kind in ALL_KINDS:
        if kind is PotentialKind.DELTA_WELL:
            continue
        spec = ws.spec(kind)
        base = 4.0 * (ws.dx if ws.dx is not None else default_dx(spec))
        for bracket in scan_brackets(spec, dx=base):
            e1, e2, e3 = (refine(spec, bracket, dx=base / f).energy for f in (1.0, 2.0, 4.0))
            d1, d2 = abs(e1 - e2), abs(e2 - e3)
            ratio = d1 / d2 if d2 > 0.0 else math.inf
            worst = min(worst, ratio)
            ok &= ratio >= 10.0
    return ok, f"smallest halving ratio {worst:.1f} (need >= 10, 4th order ~16)"


def check_fault_sensitivity(ws: Workspace) -> tuple[bool, str]:
    """A 50x coarser grid must break the eigenvalue criterion (guards
    against vacuous tolerances)."""
    coarse_dx = 50.0 * (ws.dx if ws.dx is not None else default_dx(PotentialSpec(PotentialKind.HALF_PARABOLIC)))
    coarse = Workspace(dx=coarse_dx, p_max=ws.p_max, dp=ws.dp)
    try:
        passed, detail = check_eigenvalues(coarse)
    except Exception as exc:  # a crash on the coarse grid also counts as detection
        return True, f"coarse grid dx={coarse_dx:.3g} raised: {exc}"
    if passed:
        return False, f"eigenvalue check still passes at dx={coarse_dx:.3g}; tolerances vacuous"
    return True, f"eigenvalue check fails at dx={coarse_dx:.3g} as required ({detail})"


CRITERIA = (
    ("C1", "eigenvalue reproduction (tol 2e-3)", check_eigenvalues),
    ("C2", "half-well state counts 2/2/4/1", check_state_counts),
    ("C3", "delta-well momentum oracle", check_delta_oracle),
    ("C4", "momentum tail exponents", check_tail_exponents),
    ("C5", "divergence verdicts", check_divergence_verdicts),
    ("C6", "cross-representation <p^2>, <p^4>", check_cross_representation),
    ("C7", "force-balance residuals", check_ehrenfest),
    ("C8", "normalization and Parseval", check_unitarity),
    ("C9", "4th-order Richardson ratios", check_richardson),
    ("C10", "fault sensitivity at 50x dx", check_fault_sensitivity),
)


def run_all(ws: Workspace | None = None) -> list[CriterionResult]:
    """Run every criterion, never raising: exceptions become failures."""
    ws = ws or Workspace()
    results = []
    for cid, description, fn in CRITERIA:
        try:
            passed, detail = fn(ws)
        except Exception as exc:
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append(CriterionResult(cid, description, passed, detail))
    return results
