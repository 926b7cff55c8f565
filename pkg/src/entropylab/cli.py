"""Command-line front end.

Exit codes: 0 success, 1 configuration error, 2 numerical failure (also used
when a self-test or the demo finds a failing check).
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, output_root, parse_scenario
from .convexfn import from_spec
from .errors import EntropyLabError, NumericalFailure

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2

log = logging.getLogger("entropylab")


def function_arg(text: str) -> dict:
    """``burgers``, ``power:2``, ``sublinear:0.5`` or a JSON object."""
    text = text.strip()
    if text.startswith("{"):
        return json.loads(text)
    name, _, param = text.partition(":")
    spec = {"kind": "named", "name": name}
    if param:
        key = {"power": "alpha", "sublinear": "correction", "quadratic": "curvature"}.get(name)
        if key is None:
            raise ValueError(f"{name!r} takes no parameter")
        spec[key] = float(param)
    return spec


def _emit(args, obj):
    if not args.quiet:
        print(json.dumps(obj, indent=2, sort_keys=True, default=str))


def _out_dir(args, sub: str) -> Path:
    base = Path(args.out) if getattr(args, "out", None) else output_root(Path("out"))
    path = base / sub if not getattr(args, "out", None) else base
    path.mkdir(parents=True, exist_ok=True)
    return path


# ---------------------------------------------------------------------------
# subcommands


def cmd_riemann(args) -> int:
    from .entropypair import make_pair
    from .waves import classify, jump_fan, sample_fan, solve_riemann

    f = from_spec(function_arg(args.flux))
    fan = (jump_fan if args.jump else solve_riemann)(f, args.left, args.right)
    out = {"fan": fan.to_dict()}
    if args.entropy:
        pair = make_pair(f, from_spec(function_arg(args.entropy)))
        out["jumps"] = [classify(pair, w.left, w.right).to_dict() for w in fan.jumps()]
    if args.out:
        x = np.linspace(args.window[0], args.window[1], args.points)
        u = sample_fan(fan, args.t, x)
        path = _out_dir(args, "riemann") / "profile.csv"
        with open(path, "w", newline="\n") as fh:
            fh.write("t,x,u\n")
            for xi, ui in zip(x, u):
                fh.write("%.17g,%.17g,%.17g\n" % (args.t, xi, ui))
        out["profile"] = str(path)
    _emit(args, out)
    return EXIT_OK


def _run_one(path, seed, dx_override, diagnostics, out=None):
    from .scenario import run_scenario

    cfg = parse_scenario(path, dx_override)
    if out:
        cfg.output_dir = Path(out) / cfg.name
    return run_scenario(cfg, seed, diagnostics).verdict


def _scenario_worker(job):
    path, seed, dx, diag, out = job
    try:
        return EXIT_OK, _run_one(path, seed, dx, diag, out)
    except ConfigError as exc:
        return EXIT_CONFIG, {"scenario": str(path), "errors": exc.errors}
    except NumericalFailure as exc:
        return EXIT_NUMERIC, {"scenario": str(path), "error": str(exc)}


def cmd_scenarios(args, diagnostics=True) -> int:
    jobs = [(p, args.seed, args.dx_override, diagnostics, args.out) for p in args.config]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            results = list(ex.map(_scenario_worker, jobs))
    else:
        results = [_scenario_worker(j) for j in jobs]
    code = EXIT_OK
    for status, payload in results:
        if status == EXIT_CONFIG:
            for e in payload["errors"]:
                print(f"error: {e}", file=sys.stderr)
        elif status == EXIT_NUMERIC:
            print(f"numerical failure: {payload['error']}", file=sys.stderr)
        else:
            _emit(args, payload)
        code = max(code, status)
    return code


def cmd_bilinear(args) -> int:
    from .bilinear import selftest

    res = selftest(args.selftest, args.quadratic, args.seed)
    summary = {"trials": res.trials, "quadratic_trials": res.quadratic_trials,
               "counterexamples": len(res.failures)}
    if res.failures:
        path = _out_dir(args, "bilinear") / "counterexamples.json"
        res.dump(path)
        summary["repro"] = str(path)
    _emit(args, summary)
    return EXIT_OK if res.passed else EXIT_NUMERIC


def cmd_growth(args) -> int:
    from .entropypair import (EntropyPair, GrowthDescriptor, Unavailable,
                              check_growth_conditions, gamma_closed_form)

    pair = EntropyPair(from_spec(function_arg(args.flux)), from_spec(function_arg(args.entropy)))
    g = gamma_closed_form(GrowthDescriptor.from_pair(pair))
    gam = args.gamma if args.gamma is not None else (1.0 if isinstance(g, Unavailable) else g)
    rep = check_growth_conditions(pair, gam)
    _emit(args, {"gamma_closed_form": g.reason if isinstance(g, Unavailable) else g,
                 "report": rep.to_dict()})
    return EXIT_OK


def cmd_holder(args) -> int:
    from .meter import holder_exponents

    g1, g2 = holder_exponents(args.alpha, args.beta, args.gamma)
    _emit(args, {"gamma1": g1, "gamma2": g2})
    return EXIT_OK


def cmd_demo(args) -> int:
    from .acceptance import CRITERIA, run_all

    numbers = [int(n) for n in args.only.split(",")] if args.only else sorted(CRITERIA)
    results = run_all(numbers, echo=None if args.quiet else print)
    path = _out_dir(args, "demo") / "summary.json"
    with open(path, "w", newline="\n") as fh:
        json.dump([{"criterion": r.number, "title": r.title, "passed": r.passed,
                    "seconds": r.seconds, "detail": r.detail} for r in results],
                  fh, indent=2, default=str)
        fh.write("\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERIC


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """Usage errors are configuration errors (exit 1), not argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _common(suppress: bool) -> argparse.ArgumentParser:
    # flags are accepted before or after the subcommand; the subcommand copy
    # uses SUPPRESS so it does not overwrite a value given up front
    def d(v):
        return argparse.SUPPRESS if suppress else v

    c = _Parser(add_help=False)
    c.add_argument("--seed", type=int, default=d(0), help="RNG seed (default 0)")
    c.add_argument("--jobs", type=int, default=d(1), help="parallel scenarios")
    c.add_argument("--dx-override", type=float, default=d(None),
                   help="replace solver.dx of every scenario")
    c.add_argument("--quiet", action="store_true", default=d(False),
                   help="suppress stdout reports")
    c.add_argument("--out", default=d(None), help="output directory")
    return c


def build_parser() -> argparse.ArgumentParser:
    common = _common(suppress=True)
    p = _Parser(prog="entropylab", description=__doc__.splitlines()[0],
                parents=[_common(suppress=False)])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("riemann", parents=[common], help="exact Riemann fan")
    r.add_argument("--flux", required=True)
    r.add_argument("--entropy", default=None)
    r.add_argument("--left", type=float, required=True)
    r.add_argument("--right", type=float, required=True)
    r.add_argument("--jump", action="store_true", help="single jump instead of the entropy fan")
    r.add_argument("--t", type=float, default=1.0)
    r.add_argument("--window", type=float, nargs=2, default=(-2.0, 2.0))
    r.add_argument("--points", type=int, default=401)
    r.set_defaults(func=cmd_riemann)

    for name, diag, help_ in (("solve", False, "solve a scenario, write solution.csv"),
                              ("meter", True, "solve and run the scenario diagnostics"),
                              ("run", True, "alias of meter")):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("config", nargs="+", help="scenario TOML file(s)")
        s.set_defaults(func=lambda a, d=diag: cmd_scenarios(a, d))

    b = sub.add_parser("bilinear", parents=[common], help="randomized bilinear-form checks")
    b.add_argument("--selftest", type=int, default=10_000, metavar="N")
    b.add_argument("--quadratic", type=int, default=None, metavar="M")
    b.set_defaults(func=cmd_bilinear)

    g = sub.add_parser("growth", parents=[common], help="growth exponent and sampled checks")
    g.add_argument("--flux", required=True)
    g.add_argument("--entropy", required=True)
    g.add_argument("--gamma", type=float, default=None)
    g.set_defaults(func=cmd_growth)

    h = sub.add_parser("holder", parents=[common], help="Hoelder exponents")
    h.add_argument("--alpha", type=float, default=1.0)
    h.add_argument("--beta", type=float, required=True)
    h.add_argument("--gamma", type=float, default=1.0)
    h.set_defaults(func=cmd_holder)

    d = sub.add_parser("demo", parents=[common], help="run every acceptance fixture")
    d.add_argument("--only", default=None, help="comma-separated criterion numbers")
    d.set_defaults(func=cmd_demo)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        for e in exc.errors:
            print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (EntropyLabError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
