"""``maxfield`` command line: simulate, experiment, validate.

Exit codes: 0 success, 1 failed validation check, 2 configuration error,
3 spectral-function budget exhausted.

Options may also come from ``--config FILE`` holding ``key=value`` lines
(keys are the long option names); flags given on the command line win.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import _backend
from .errors import BudgetExhausted, ConfigError, EmptyInput
from .experiment import ExperimentConfig, run_experiment
from .geometry import RectDomain
from .rng import derive_stream
from .shapes import GaussianShape, IndicatorShape, SpectralModel
from .simulators import (DEFAULT_BUDGET, default_threads, simulate_normalized,
                         simulate_schlather, simulate_transformed)
from .validate import run_suite, suite_report
from .weights import GStar, UniformWindow

SIM_SCHEMA = "maxfield.simulate/1"
EXIT_FAILED, EXIT_CONFIG, EXIT_BUDGET = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def _threads(value):
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("threads must be >= 1")
    return n


def _add_model_args(p):
    p.add_argument("--shape", choices=["gaussian", "indicator"], default="gaussian")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--r", type=float, default=1.0, help="indicator radius")
    p.add_argument("--scaling", choices=["unit", "raw"], default="unit")
    p.add_argument("--dim", type=int, choices=[1, 2], default=1)
    p.add_argument("--R", type=float, default=1.0)
    p.add_argument("--h", type=float, default=0.1, help="grid step")


def build_parser():
    parser = _Parser(prog="maxfield", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="key=value file of defaults")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("simulate", help="simulate one field")
    _add_model_args(s)
    s.add_argument("--method", choices=["normalized", "schlather", "transformed"],
                   default="normalized")
    s.add_argument("--variant", choices=["exact", "strong", "weak"], default="exact")
    s.add_argument("--k", type=float, default=2, help="cut-off multiplier")
    s.add_argument("--window", choices=["cube", "ball"], default=None)
    s.add_argument("--weight", default="gstar", help="gstar or uniform:HALFWIDTH")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--rep", type=int, default=0, help="replication (stream) index")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.add_argument("--out", default="field", help="output prefix (.csv and .json)")

    e = sub.add_parser("experiment", help="normalized vs cut-off comparison")
    e.add_argument("preset", choices=["table1", "table2", "custom"])
    e.add_argument("--N", type=int, default=None)
    e.add_argument("--R", type=float, nargs="+", default=None)
    e.add_argument("--k", type=int, nargs="+", default=None)
    e.add_argument("--h", type=float, default=None)
    e.add_argument("--dim", type=int, choices=[1, 2], default=None)
    e.add_argument("--sigma", type=float, default=None)
    e.add_argument("--seed", type=int, default=None)
    e.add_argument("--threads", type=_threads, default=None)
    e.add_argument("--compare-paper", action="store_true")
    e.add_argument("--out", default="report", help="output prefix (.csv and .json)")

    v = sub.add_parser("validate", help="run the statistical validation suite")
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--N", type=int, default=5000)
    v.add_argument("--threads", type=_threads, default=None)
    v.add_argument("--out", default=None, help="write JSON here instead of stdout")
    return parser


def _config_tokens(path):
    tokens = []
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigError("config", str(exc))
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("config", f"line {n}: expected key=value")
        key, val = (x.strip() for x in line.split("=", 1))
        flag = "--" + key.replace("_", "-") if key not in ("R", "N") else "--" + key
        if key == "compare_paper":
            if val.lower() in ("1", "true", "yes"):
                tokens.append(flag)
            continue
        tokens += [flag, *val.split()]
    return tokens


def _explicit_only(parser):
    """Same parser, but options absent from argv are left out of the namespace."""
    for sub in parser._subparsers._group_actions[0].choices.values():
        for act in sub._actions:
            if act.option_strings:
                act.default = argparse.SUPPRESS
    return parser


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        head = [args.command] + ([args.preset] if args.command == "experiment" else [])
        from_file = vars(parser.parse_args(head + _config_tokens(args.config)))
        explicit = vars(_explicit_only(build_parser()).parse_args(argv))
        args = argparse.Namespace(**{**from_file, **explicit})
    if args.command in ("experiment", "validate") and args.seed is None:
        parser.error("--seed is required (all randomness derives from it)")
    return args


def _model_from_args(a):
    dom = RectDomain(a.dim, a.R, a.h)
    if a.shape == "gaussian":
        shape = GaussianShape(a.sigma, a.dim)
    else:
        shape = IndicatorShape(a.r, a.dim, a.scaling)
    return SpectralModel(shape, dom)


def _weight_from_arg(text):
    if text == "gstar":
        return GStar()
    if text.startswith("uniform:"):
        try:
            return UniformWindow(float(text.split(":", 1)[1]))
        except ValueError:
            raise ConfigError("weight", f"bad halfwidth in {text!r}")
    raise ConfigError("weight", f"unknown weight {text!r}")


def _echo(args):
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("config",)}


def cmd_simulate(args):
    model = _model_from_args(args)
    stream = derive_stream(args.seed, args.rep)
    if args.method == "normalized":
        real = simulate_normalized(model, stream, args.variant, args.budget)
    elif args.method == "schlather":
        real = simulate_schlather(model, args.k, stream, args.window, args.budget)
    else:
        real = simulate_transformed(model, _weight_from_arg(args.weight), stream, args.budget)
    pts = model.domain.points
    with open(f"{args.out}.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"y{j + 1}" for j in range(model.dim)] + ["z"])
        for p, z in zip(pts, real.field):
            w.writerow([repr(float(c)) for c in p] + [repr(float(z))])
    meta = {
        "schema": SIM_SCHEMA, "config": _echo(args), "backend": _backend.BACKEND,
        "seed": args.seed, "stream_index": args.rep, "method": real.method,
        "variant": real.variant, "m": real.n_spectral, "inf": real.inf_field,
        "sup": real.sup_field, "t1": real.first_arrival, "bound": real.bound,
        "c": model.c, "arrivals_consumed": real.arrivals_consumed,
        "grid_points": model.domain.size,
    }
    Path(f"{args.out}.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    print(f"m={real.n_spectral} inf={real.inf_field:.6g} sup={real.sup_field:.6g} "
          f"-> {args.out}.csv")
    return 0


def cmd_experiment(args):
    threads = args.threads if args.threads is not None else default_threads()
    overrides = dict(N=args.N, R=args.R, k=args.k, h=args.h, dim=args.dim, sigma=args.sigma)
    if args.preset == "custom":
        cfg = ExperimentConfig(**{k: v for k, v in overrides.items() if v is not None})
    else:
        cfg = ExperimentConfig.preset(args.preset, **overrides)
    cfg.seed, cfg.threads = args.seed, threads
    report = run_experiment(cfg)
    if not args.compare_paper:
        for row in report.rows:
            row.paper_Q = None
            for rk in row.by_k:
                rk.paper = None
    Path(f"{args.out}.csv").write_text(report.to_csv())
    Path(f"{args.out}.json").write_text(report.to_json() + "\n")
    for row in report.rows:
        line = f"R={row.R:g} Q={row.Q:.3f}±{row.Q_se:.3f}"
        for rk in row.by_k:
            line += (f" | k={rk.k} M={rk.M:.3f}±{rk.M_se:.3f} ratio={rk.ratio:.3f}"
                     f" A={rk.A:.4f} P={rk.P:.3f}")
        print(line)
    return 0


def cmd_validate(args):
    threads = args.threads if args.threads is not None else default_threads()
    results = run_suite(args.seed, n=args.N, threads=threads)
    report = suite_report(results, {"seed": args.seed, "N": args.N, "threads": threads})
    text = json.dumps(report, indent=2, sort_keys=True, default=float)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    for r in results:
        print(r.line(), file=sys.stderr)
    return 0 if report["passed"] else EXIT_FAILED


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        return {"simulate": cmd_simulate, "experiment": cmd_experiment,
                "validate": cmd_validate}[args.command](args)
    except (ConfigError, EmptyInput) as exc:
        print(f"maxfield: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetExhausted as exc:
        print(f"maxfield: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
