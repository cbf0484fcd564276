"""Bound states of 1-D potential wells with a finite jump, their momentum
distributions, and diagnostics for the divergence of high momentum moments.

Units: 2m = 1, hbar = 1.
"""

from .analysis import (
    CrossRepReport,
    DivergenceReport,
    DivergentMomentError,
    EhrenfestReport,
    TailFit,
    Verdict,
    cross_representation,
    divergence_verdict,
    ehrenfest,
    p2_position,
    p4_position,
    partial_moment,
    tail_exponent,
)
from .eigensolver import (
    BoundState,
    ClosedFormParams,
    closed_form_params,
    closed_form_residual,
    refine,
    scan_brackets,
    solve_all,
)
from .engine import ShotResult, count_nodes, integrate_inward, matching_residual
from .model import (
    Continuity,
    ContinuityClass,
    PotentialKind,
    PotentialSpec,
    classify,
    domain_cutoff,
    energy_floor,
    potential_value,
    smooth_derivative,
)
from .momentum import MomentumDistribution, parseval_residual, transform, weighted_curves
from .wavefun import WaveFunction, assemble, evaluate, norm_residual

__version__ = "0.1.0"
