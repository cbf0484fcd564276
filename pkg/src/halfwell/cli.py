"""Command-line front end.

Subcommands: solve, momdist, moments, tail, verify, suite.  JSON goes to
stdout (or --out), CSV always to --out.  Floats in CSV are fixed at 12
significant digits so identical configs give byte-identical files.

Exit codes: 0 success, 1 failed check, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import acceptance, analysis, momentum
from .analysis import (
    cross_representation,
    divergence_verdict,
    ehrenfest,
    tail_exponent,
)
from .eigensolver import solve_all
from .model import PotentialKind, PotentialSpec
from .momentum import parseval_residual, transform, weighted_curves
from .wavefun import assemble, norm_residual

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

_CSV_COLUMNS = ("p", "re_phi", "im_phi", "I", "p2I", "p4I", "p6I")


@dataclass
class RunConfig:
    model: str = "half-parabolic"
    v0: float = 15.0
    a: float = 2.0
    lam: float = 2.0
    state: int = 0
    p_max: float = momentum.DEFAULT_P_MAX
    dp: float = momentum.DEFAULT_DP
    dx: float | None = None
    cutoffs: tuple[float, ...] = analysis.DEFAULT_CUTOFFS
    window: tuple[float, float] = analysis.DEFAULT_WINDOW
    out: str | None = None
    json_path: str | None = None

    def spec(self) -> PotentialSpec:
        return PotentialSpec(PotentialKind(self.model), v0=self.v0, a=self.a, lam=self.lam)


class UsageError(Exception):
    pass


def _parse_cutoffs(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(t) for t in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad --cutoffs value {text!r}") from exc
    if len(vals) != 4:
        raise UsageError("--cutoffs needs four comma-separated values")
    return vals


def _parse_window(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(t) for t in text.split(":"))
    except ValueError as exc:
        raise UsageError(f"bad --window value {text!r}, expected lo:hi") from exc
    return lo, hi


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="halfwell",
        description="Bound states and momentum-distribution diagnostics for 1-D wells "
        "with a finite jump (units 2m = hbar = 1).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, needs_state: bool = True) -> None:
        p.add_argument("--model", default=None, choices=[k.value for k in PotentialKind])
        p.add_argument("--v0", type=float, default=None, help="well depth scale (default 15)")
        p.add_argument("--a", type=float, default=None, help="length scale (default 2)")
        p.add_argument("--lambda", dest="lam", type=float, default=None, help="delta strength (default 2)")
        p.add_argument("--dx", type=float, default=None, help="integration step (default a/2000)")
        if needs_state:
            p.add_argument("--state", type=int, default=None, help="state index (default 0)")
        p.add_argument("--pmax", type=float, default=None, help=f"momentum grid end (default {momentum.DEFAULT_P_MAX})")
        p.add_argument("--dp", type=float, default=None, help=f"momentum grid step (default {momentum.DEFAULT_DP})")
        p.add_argument("--cutoffs", type=str, default=None, help="four comma-separated cutoffs")
        p.add_argument("--window", type=str, default=None, help="tail fit window lo:hi")
        p.add_argument("--out", type=str, default=None, help="output file path")
        p.add_argument("--config", type=str, default=None, help="JSON config file (flags override)")

    add_common(sub.add_parser("solve", help="solve the spectrum"), needs_state=False)
    add_common(sub.add_parser("momdist", help="emit the momentum-distribution CSV"))
    add_common(sub.add_parser("moments", help="moment and divergence report"))
    add_common(sub.add_parser("tail", help="tail-exponent fit"))
    add_common(sub.add_parser("verify", help="norm/Parseval/force-balance checks"))
    suite = sub.add_parser("suite", help="run the acceptance checks")
    suite.add_argument("--dx", type=float, default=None, help="integration step override")
    suite.add_argument("--json", dest="json_path", type=str, default=None, help="write results JSON here")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    """Defaults, overridden by the --config file, overridden by flags."""
    cfg = RunConfig()
    if getattr(args, "config", None):
        with open(args.config) as fh:
            file_cfg = json.load(fh)
        for key, value in file_cfg.items():
            attr = {"lambda": "lam", "pmax": "p_max", "json": "json_path"}.get(key, key)
            if not hasattr(cfg, attr):
                raise UsageError(f"unknown config key {key!r}")
            if attr in ("cutoffs", "window"):
                value = tuple(float(v) for v in value)
            setattr(cfg, attr, value)
    for flag, attr in (
        ("model", "model"),
        ("v0", "v0"),
        ("a", "a"),
        ("lam", "lam"),
        ("state", "state"),
        ("pmax", "p_max"),
        ("dp", "dp"),
        ("dx", "dx"),
        ("out", "out"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            setattr(cfg, attr, value)
    if getattr(args, "cutoffs", None):
        cfg.cutoffs = _parse_cutoffs(args.cutoffs)
    if getattr(args, "window", None):
        cfg.window = _parse_window(args.window)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    if cfg.v0 <= 0:
        raise UsageError("v0 must be positive")
    if cfg.a <= 0:
        raise UsageError("a must be positive")
    if cfg.lam <= 0:
        raise UsageError("lambda must be positive")
    if cfg.state < 0:
        raise UsageError("state index must be non-negative")
    if cfg.dx is not None and cfg.dx <= 0:
        raise UsageError("dx must be positive")


def _emit_json(payload: dict, path: str | None) -> None:
    text = json.dumps(payload, indent=2)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _get_state(cfg: RunConfig):
    spec = cfg.spec()
    states = solve_all(spec, dx=cfg.dx)
    if cfg.state >= len(states):
        raise UsageError(f"{cfg.model} has only {len(states)} bound states")
    return spec, states, states[cfg.state]


def cmd_solve(cfg: RunConfig) -> int:
    spec = cfg.spec()
    states = solve_all(spec, dx=cfg.dx)
    payload = {
        "model": cfg.model,
        "params": {"v0": spec.v0, "a": spec.a, "lambda": spec.lam},
        "states": [
            {"n": s.n, "E": s.energy, "k": s.k, "residual": s.residual, "nodes": s.nodes}
            for s in states
        ],
    }
    _emit_json(payload, cfg.out)
    return EXIT_OK


def cmd_momdist(cfg: RunConfig) -> int:
    spec, _, state = _get_state(cfg)
    wf = assemble(spec, state, dx=cfg.dx)
    md = transform(wf, p_max=cfg.p_max, dp=cfg.dp)
    residual = parseval_residual(md)
    if residual > 10.0 * 1e-4:
        sys.stderr.write(f"Parseval residual {residual:.3e} exceeds 10x tolerance; transform corrupt\n")
        return EXIT_CHECK_FAILED
    curves = weighted_curves(md)
    path = cfg.out or f"{cfg.model}-state{cfg.state}-momdist.csv"
    with open(path, "w") as fh:
        fh.write(",".join(_CSV_COLUMNS) + "\n")
        for i in range(md.p.size):
            row = (
                md.p[i],
                md.phi[i].real,
                md.phi[i].imag,
                md.intensity[i],
                curves["p2I"][i],
                curves["p4I"][i],
                curves["p6I"][i],
            )
            fh.write(",".join(f"{v:.12e}" for v in row) + "\n")
    return EXIT_OK


def _moments_payload(cfg: RunConfig) -> dict:
    spec, _, state = _get_state(cfg)
    wf = assemble(spec, state, dx=cfg.dx)
    md = transform(wf, p_max=cfg.p_max, dp=cfg.dp)
    rep6 = divergence_verdict(md, 6, cutoffs=cfg.cutoffs)
    fit = tail_exponent(md, window=cfg.window)
    cross = cross_representation(wf, md)
    force = ehrenfest(wf)
    return {
        "model": cfg.model,
        "params": {"v0": spec.v0, "a": spec.a, "lambda": spec.lam},
        "state_index": cfg.state,
        "E": state.energy,
        "p2_position": cross.p2_position,
        "p2_momentum": cross.p2_momentum,
        "p4_position": cross.p4_position,
        "p4_momentum_corrected": cross.p4_momentum,
        "m6_partials": [
            {"P": P, "value": v} for P, v in zip(rep6.cutoffs, rep6.partials)
        ],
        "growth_ratio": rep6.growth_ratio,
        "verdict": rep6.verdict.value,
        "tail": {
            "window": list(fit.window),
            "slope": fit.slope,
            "r2": fit.r2,
            "c6": fit.plateau_c6,
        },
        "ehrenfest": {
            "interior": force.interior,
            "boundary": force.boundary,
            "relative": force.relative,
        },
    }


def cmd_moments(cfg: RunConfig) -> int:
    _emit_json(_moments_payload(cfg), cfg.out)
    return EXIT_OK


def cmd_tail(cfg: RunConfig) -> int:
    spec, _, state = _get_state(cfg)
    wf = assemble(spec, state, dx=cfg.dx)
    md = transform(wf, p_max=cfg.p_max, dp=cfg.dp)
    fit = tail_exponent(md, window=cfg.window)
    _emit_json(
        {
            "model": cfg.model,
            "state_index": cfg.state,
            "window": list(fit.window),
            "slope": fit.slope,
            "intercept": fit.intercept,
            "r2": fit.r2,
            "c6": fit.plateau_c6,
        },
        cfg.out,
    )
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    spec, states, state = _get_state(cfg)
    wf = assemble(spec, state, dx=cfg.dx)
    md = transform(wf, p_max=cfg.p_max, dp=cfg.dp)
    cross = cross_representation(wf, md)
    force = ehrenfest(wf)
    checks = {
        "norm_residual": (norm_residual(wf), 1e-9),
        "parseval_residual": (parseval_residual(md), 1e-4),
        "ehrenfest_relative": (force.relative, 1e-3),
        "p2_cross_rel": (cross.p2_rel, 1e-3),
        "node_law": (0.0 if [s.n for s in states] == list(range(len(states))) else 1.0, 0.5),
    }
    payload = {
        "model": cfg.model,
        "state_index": cfg.state,
        "checks": {k: {"value": v, "tol": tol, "ok": v < tol} for k, (v, tol) in checks.items()},
    }
    payload["all_ok"] = all(c["ok"] for c in payload["checks"].values())
    _emit_json(payload, cfg.out)
    if not payload["all_ok"]:
        failing = [k for k, c in payload["checks"].items() if not c["ok"]]
        sys.stderr.write("failed checks: " + ", ".join(failing) + "\n")
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_suite(dx: float | None, json_path: str | None) -> int:
    ws = acceptance.Workspace(dx=dx)
    results = acceptance.run_all(ws)
    width = max(len(r.description) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        sys.stdout.write(f"{r.cid:>4}  {r.description:<{width}}  {status}  {r.detail}\n")
    n_fail = sum(not r.passed for r in results)
    sys.stdout.write(f"{len(results) - n_fail}/{len(results)} criteria passed\n")
    if json_path:
        payload = {
            "criteria": [
                {"id": r.cid, "description": r.description, "passed": r.passed, "detail": r.detail}
                for r in results
            ],
            "all_passed": n_fail == 0,
        }
        with open(json_path, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    return EXIT_OK if n_fail == 0 else EXIT_CHECK_FAILED


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        if args.command == "suite":
            return cmd_suite(args.dx, args.json_path)
        cfg = _config_from_args(args)
        handler = {
            "solve": cmd_solve,
            "momdist": cmd_momdist,
            "moments": cmd_moments,
            "tail": cmd_tail,
            "verify": cmd_verify,
        }[args.command]
        return handler(cfg)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except RuntimeError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CHECK_FAILED


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
