"""Command-line front end: ``fracalc <subcommand> [options]``.

Outputs are byte-reproducible: CSV uses a header row, comma separator,
'.' decimal, LF endings and 17 significant digits; JSON is emitted with
sorted keys.  Exit codes: 0 success, 1 numeric failure, 2 validation error
(one machine-readable JSON line on stderr either way).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .errors import FracalcError, ValidationError
from . import diffusion as _diffusion
from . import extension as _extension
from .ctrw import WalkConfig, run_ensemble
from .fitting import TimeSeries, fit_exponential, fit_fractional
from .frac_ops import (
    Constant,
    Exponential,
    FracOrder,
    MittagLefflerPower,
    ModifiedPower,
    PowerPlus,
    composite_derivative,
    marchaud_derivative_with_error,
    weyl_integral_with_error,
)
from .relaxation import RelaxationProblem, solve_constant_history, solve_marching
from .special_fn import EvalPolicy, MLParams, mittag_leffler
from .visco import (
    Material,
    PastRule,
    StrainProgram,
    fractional_form,
    superposition_integral,
    superposition_sum,
)

__all__ = ["RunConfig", "main"]


def _f(v: float) -> str:
    return f"{v:.17g}"


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _emit_csv(path, header, rows) -> None:
    lines = [",".join(header)]
    lines += [",".join(_f(v) for v in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


@dataclass
class RunConfig:
    """Validated per-invocation settings shared by all subcommands."""

    subcommand: str
    outdir: str | None = None
    threads: int | None = None
    params: dict = field(default_factory=dict)

    def out_path(self, name: str) -> str | None:
        if self.outdir is None:
            return None
        os.makedirs(self.outdir, exist_ok=True)
        return os.path.join(self.outdir, name)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # single-line machine-readable, exit 2
        sys.stderr.write(json.dumps({"error": message, "code": "usage"}) + "\n")
        raise SystemExit(2)


def _history_kind(args) -> object:
    kind = args.kind
    if kind == "constant":
        return Constant(args.c)
    if kind == "power":
        return PowerPlus(args.beta)
    if kind == "modified":
        return ModifiedPower(args.beta)
    if kind == "exponential":
        return Exponential(args.lam)
    if kind == "mittag":
        return MittagLefflerPower(args.ml_alpha, args.lam)
    raise ValidationError(f"unknown kind {kind!r}")


def _cmd_ml(cfg: RunConfig, args) -> int:
    policy = EvalPolicy(args.series_tol, args.max_terms, args.threshold)
    value = mittag_leffler(MLParams(args.alpha, args.beta), args.t, policy)
    _emit_json({"alpha": args.alpha, "beta": args.beta, "t": args.t,
                "value": value})
    return 0


def _cmd_fracop(cfg: RunConfig, args) -> int:
    u = _history_kind(args)
    if args.op == "derivative":
        if args.n > 0:
            value = composite_derivative(u, FracOrder(args.n, args.alpha), args.t)
            err = float("nan")
        else:
            value, err = marchaud_derivative_with_error(u, args.alpha, args.t)
    elif args.op == "integral":
        value, err = weyl_integral_with_error(u, args.alpha, args.t)
    else:
        raise ValidationError(f"unknown op {args.op!r}")
    _emit_json({"value": value, "est_error": err})
    return 0


def _cmd_relax(cfg: RunConfig, args) -> int:
    if args.method == "closed":
        tr = solve_constant_history(args.alpha, args.lam, args.c0,
                                    args.t_end, args.dt)
    else:
        p = RelaxationProblem(args.alpha, args.lam, Constant(args.c0),
                              args.t_end, args.dt)
        tr = solve_marching(p)
    _emit_csv(cfg.out_path("relax.csv") if cfg.outdir else None,
              ["time", "value"], zip(tr.times, tr.values))
    return 0


def _cmd_fit(cfg: RunConfig, args) -> int:
    data = np.genfromtxt(args.input, delimiter=",", names=True)
    if data.dtype.names is None or tuple(data.dtype.names) != ("t", "value"):
        raise ValidationError("fit input must be CSV with header 't,value'")
    series = TimeSeries(np.atleast_1d(data["t"]), np.atleast_1d(data["value"]))
    out = {}
    if args.model in ("exp", "both"):
        r = fit_exponential(series)
        out["exponential"] = {"lam": r.lam, "C": r.C, "rmse": r.rmse}
    if args.model in ("frac", "both"):
        r = fit_fractional(series)
        out["fractional"] = {"alpha": r.alpha, "lam": r.lam, "C": r.C,
                             "rmse": r.rmse}
    _emit_json(out)
    return 0


def _cmd_visco(cfg: RunConfig, args) -> int:
    with open(args.program, encoding="utf-8") as fh:
        prog = json.load(fh)
    m = Material(prog["k"], prog["alpha"])
    rule = PastRule.CONSTANT if prog.get("past_rule", "constant") == "constant" \
        else PastRule.ZERO
    s = StrainProgram(tuple((float(a), float(b)) for a, b in prog["breakpoints"]),
                      rule)
    t0 = s.t_start
    ts = np.linspace(t0 + (args.t_max - t0) / args.n_points, args.t_max,
                     args.n_points)
    if args.method == "integral":
        sig = [superposition_integral(m, s, float(t)) for t in ts]
    elif args.method == "fractional":
        sig = [fractional_form(m, s, float(t)) for t in ts]
    else:
        sig = [superposition_sum(m, s, float(t), args.sum_terms) for t in ts]
    _emit_csv(cfg.out_path("visco.csv") if cfg.outdir else None,
              ["t", "sigma"], zip(ts, sig))
    return 0


def _cmd_ctrw(cfg: RunConfig, args) -> int:
    wc = WalkConfig(dx=args.dx, dtau=args.dtau, alpha=args.alpha,
                    n_walkers=args.walkers, t_end=args.t_end, seed=args.seed)
    stats = run_ensemble(wc, threads=cfg.threads)
    outdir = cfg.outdir or "."
    cfg2 = RunConfig(cfg.subcommand, outdir, cfg.threads)
    _emit_csv(cfg2.out_path("msd.csv"), ["time", "msd"],
              zip(stats.times, stats.msd))
    centers = 0.5 * (stats.hist_edges[:-1] + stats.hist_edges[1:])
    widths = np.diff(stats.hist_edges)
    dens = stats.hist_counts / (stats.n_walkers * widths)
    _emit_csv(cfg2.out_path("hist.csv"), ["x", "count", "density"],
              zip(centers, stats.hist_counts.astype(float), dens))
    _emit_json({"k_alpha": wc.k_alpha, "msd_at_t_end": float(stats.msd[-1]),
                "n_walkers": wc.n_walkers})
    return 0


def _cmd_diffusion(cfg: RunConfig, args) -> int:
    p = _diffusion.DiffusionParams(args.alpha, args.k_alpha, args.t)
    half = args.x_max if args.x_max is not None else 8.0 * p.spread
    x = np.linspace(-half, half, args.n_x)
    u = _diffusion.fundamental_solution(p, x)
    _emit_csv(cfg.out_path("diffusion.csv") if cfg.outdir else None,
              ["x", "u"], zip(x, u))
    from scipy.integrate import simpson

    xr = np.linspace(0.0, 16.0 * p.spread, 4097)
    ur = _diffusion.fundamental_solution(p, xr)
    norm = 2.0 * simpson(ur, x=xr)
    msd = _diffusion.msd_check(p)
    _emit_json({"msd": msd, "normalization": norm})
    return 0


def _cmd_extension(cfg: RunConfig, args) -> int:
    u = _history_kind(args)
    g = _extension.solve_extension(u, args.alpha, t_end=args.t_end, dt=args.dt)
    tr = _extension.weighted_trace(g)
    from .frac_ops import marchaud_derivative

    oracle = np.array([marchaud_derivative(u, args.alpha, float(t))
                       for t in tr.t_points])
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(np.abs(oracle) > 0, tr.trace / oracle, np.nan)
    _emit_csv(cfg.out_path("extension.csv") if cfg.outdir else None,
              ["t", "trace", "oracle", "ratio"],
              zip(tr.t_points, tr.trace, oracle, ratio))
    return 0


_UNITS_NOTE = (
    "Units: times, rates and step sizes are in the caller's own consistent "
    "units (e.g. years with per-year rates); nothing is rescaled internally."
)


def _build_parser() -> _Parser:
    p = _Parser(prog="fracalc", description=__doc__, epilog=_UNITS_NOTE)
    p.add_argument("--config", help="JSON file of per-subcommand option defaults")
    p.add_argument("--outdir", help="directory for file outputs "
                   "(default: stdout for single-file subcommands)")
    sub = p.add_subparsers(dest="subcommand", required=True)

    ml = sub.add_parser("ml", help="evaluate the Mittag-Leffler function")
    ml.add_argument("--alpha", type=float, required=True,
                    help="first parameter (> 0); 1 with beta 1 gives exp")
    ml.add_argument("--beta", type=float, default=1.0, help="second parameter (> 0)")
    ml.add_argument("--t", type=float, required=True, help="argument (dimensionless)")
    ml.add_argument("--series-tol", type=float, default=1e-14)
    ml.add_argument("--max-terms", type=int, default=2000)
    ml.add_argument("--threshold", type=float, default=50.0,
                    help="|t| above which the asymptotic branch is preferred")

    def add_kind_flags(sp):
        sp.add_argument("--kind", required=True,
                        choices=["constant", "power", "modified",
                                 "exponential", "mittag"])
        sp.add_argument("--beta", type=float, default=1.0,
                        help="exponent for power/modified kinds")
        sp.add_argument("--c", type=float, default=1.0, help="constant value")
        sp.add_argument("--lam", type=float, default=1.0,
                        help="rate for exponential/mittag kinds")
        sp.add_argument("--ml-alpha", type=float, default=0.5,
                        help="order parameter of the mittag kind")

    fo = sub.add_parser("fracop", help="fractional derivative / integral")
    add_kind_flags(fo)
    fo.add_argument("--alpha", type=float, required=True, help="order in (0,1)")
    fo.add_argument("--t", type=float, required=True, help="evaluation point")
    fo.add_argument("--op", choices=["derivative", "integral"],
                    default="derivative")
    fo.add_argument("--n", type=int, default=0,
                    help="integer part for composite orders n + alpha")

    rx = sub.add_parser("relax", help="rate equation with constant history")
    rx.add_argument("--alpha", type=float, required=True, help="order in (0,1)")
    rx.add_argument("--lam", type=float, required=True,
                    help="growth/decay rate, units 1/time^alpha")
    rx.add_argument("--c0", type=float, default=1.0, help="history value")
    rx.add_argument("--t-end", type=float, default=1.0, help="horizon (time units, default 1)")
    rx.add_argument("--dt", type=float, default=1e-3, help="output step (time units, default 1e-3)")
    rx.add_argument("--method", choices=["marching", "closed"],
                    default="marching")

    ft = sub.add_parser("fit", help="fit growth models to a CSV time series")
    ft.add_argument("--input", required=True, help="CSV with header t,value")
    ft.add_argument("--model", choices=["exp", "frac", "both"], default="both")

    vi = sub.add_parser("visco", help="stress response of a strain program")
    vi.add_argument("--program", required=True,
                    help="JSON with k, alpha, breakpoints, past_rule")
    vi.add_argument("--t-max", type=float, required=True, help="last stress time (time units)")
    vi.add_argument("--n-points", type=int, default=50)
    vi.add_argument("--method", choices=["integral", "fractional", "sum"],
                    default="integral")
    vi.add_argument("--sum-terms", type=int, default=4096)

    ct = sub.add_parser("ctrw", help="random-walk ensemble (files in outdir)")
    ct.add_argument("--alpha", type=float, required=True,
                    help="waiting-tail order; 1 = memoryless")
    ct.add_argument("--walkers", type=int, required=True)
    ct.add_argument("--t-end", type=float, default=100.0, help="simulated span (time units, default 100)")
    ct.add_argument("--seed", type=int, required=True)
    ct.add_argument("--dx", type=float, default=1.0, help="lattice step (length units, default 1)")
    ct.add_argument("--dtau", type=float, default=1.0, help="waiting slot (time units, default 1)")

    df = sub.add_parser("diffusion", help="fundamental solution profile")
    df.add_argument("--alpha", type=float, required=True, help="order in (0,1]; 1 = classical")
    df.add_argument("--k-alpha", type=float, default=1.0,
                    help="diffusivity scale, length^2/time^alpha (default 1)")
    df.add_argument("--t", type=float, default=1.0, help="evaluation time (default 1)")
    df.add_argument("--x-max", type=float, default=None,
                    help="half-width of the output grid (default: 8 spread lengths)")
    df.add_argument("--n-x", type=int, default=201, help="output points (default 201)")

    ex = sub.add_parser("extension", help="strip-problem weighted trace")
    add_kind_flags(ex)
    ex.add_argument("--alpha", type=float, required=True, help="order in (0,1)")
    ex.add_argument("--t-end", type=float, default=1.0, help="trace horizon (default 1)")
    ex.add_argument("--dt", type=float, default=2e-3, help="march step (default 2e-3)")
    return p


_DISPATCH = {
    "ml": _cmd_ml,
    "fracop": _cmd_fracop,
    "relax": _cmd_relax,
    "fit": _cmd_fit,
    "visco": _cmd_visco,
    "ctrw": _cmd_ctrw,
    "diffusion": _cmd_diffusion,
    "extension": _cmd_extension,
}


def _apply_config(parser: _Parser, argv: list[str]) -> None:
    """Seed subparser defaults from --config so explicit flags still win."""
    if "--config" not in argv:
        return
    cfg_path = argv[argv.index("--config") + 1]
    with open(cfg_path, encoding="utf-8") as fh:
        overrides = json.load(fh)
    for action in parser._subparsers._group_actions:
        for name, sp in action.choices.items():
            if name not in overrides:
                continue
            values = {k.replace("-", "_"): v for k, v in overrides[name].items()}
            sp.set_defaults(**values)
            for act in sp._actions:
                if act.dest in values:
                    act.required = False


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()

    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        threads = int(os.environ.get("FRACALC_THREADS", "1"))
        cfg = RunConfig(args.subcommand, args.outdir, threads)
        return _DISPATCH[args.subcommand](cfg, args)
    except SystemExit as exc:  # argparse error already reported
        return int(exc.code or 0)
    except (ValidationError,) as exc:
        sys.stderr.write(json.dumps({"error": str(exc),
                                     "code": "validation"}) + "\n")
        return 2
    except (FracalcError, ArithmeticError, OverflowError) as exc:
        sys.stderr.write(json.dumps({"error": str(exc),
                                     "code": "numeric"}) + "\n")
        return 1
    except OSError as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "code": "io"}) + "\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
