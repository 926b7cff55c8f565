"""Scenario files (TOML) and their validation.

A scenario names a flux, an entropy, initial data, solver parameters, the
diagnostics to run and an output directory. Validation collects every
problem it finds so a user can fix a file in one pass.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .convexfn import ConvexFun, from_spec
from .errors import EntropyLabError
from .solvers import InitialData

SCHEMES = ("godunov", "hopf_lax", "fan", "jump_fan")
OUT_ENV = "ENTROPY_LAB_OUT"


class ConfigError(EntropyLabError, ValueError):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("\n".join(self.errors))


@dataclass
class SolverParams:
    scheme: str = "godunov"
    dx: float = 0.01
    cfl: float = 0.45
    t_end: float = 1.0
    window: tuple = (-2.0, 2.0)
    times: tuple = ()


@dataclass
class Diagnostics:
    balls: object = None  # "auto" or a list of (t, x)
    radii: tuple = (0.2, 0.1, 0.05)
    kruzkov: Optional[dict] = None
    oleinik: Optional[dict] = None
    holder: Optional[dict] = None
    growth: Optional[dict] = None


@dataclass
class ScenarioConfig:
    name: str
    flux_spec: dict
    entropy_spec: dict
    initial_spec: dict
    solver: SolverParams
    diagnostics: Diagnostics
    output_dir: Path
    source: Optional[Path] = None
    flux: ConvexFun = field(default=None, repr=False)
    entropy: ConvexFun = field(default=None, repr=False)
    initial: InitialData = field(default=None, repr=False)


def _num(table, key, errors, prefix, default=None, positive=False):
    v = table.get(key, default)
    if v is None:
        errors.append(f"{prefix}.{key} is required")
        return None
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        errors.append(f"{prefix}.{key} must be a finite number")
        return None
    if positive and not v > 0:
        errors.append(f"{prefix}.{key} must be positive")
        return None
    return float(v)


def _function(spec, label, errors, strict=False) -> Optional[ConvexFun]:
    if not isinstance(spec, dict):
        errors.append(f"{label} table is missing")
        return None
    try:
        fun = from_spec(spec)
    except (ValueError, TypeError) as exc:
        errors.append(f"{label}: {exc}")
        return None
    rep = fun.validate()
    errors.extend(f"{label}: {p}" for p in rep.problems)
    if rep.valid and strict and not rep.strict:
        errors.append(f"{label}: entropy must be strictly convex")
    return fun


def singular_rule(power: float, cut: float):
    import numpy as np

    return lambda x: np.maximum(np.abs(x), cut) ** (-power)


def _initial(spec, window, errors) -> Optional[InitialData]:
    if not isinstance(spec, dict):
        errors.append("initial table is missing")
        return None
    kind = spec.get("kind", "piecewise_constant")
    try:
        if kind == "riemann":
            left = _num(spec, "left", errors, "initial")
            right = _num(spec, "right", errors, "initial")
            at = _num(spec, "at", errors, "initial", default=0.0)
            if None in (left, right, at):
                return None
            return InitialData.riemann(left, right, window, at)
        if kind == "constant":
            v = _num(spec, "value", errors, "initial")
            return None if v is None else InitialData.constant(v, window)
        if kind == "piecewise_constant":
            return InitialData("piecewise_constant", window,
                               tuple(map(float, spec.get("breaks", ()))),
                               tuple(map(float, spec.get("values", ()))))
        if kind == "singular":
            p = _num(spec, "power", errors, "initial", default=0.3, positive=True)
            cut = _num(spec, "cut", errors, "initial", default=1e-3, positive=True)
            if None in (p, cut):
                return None
            return InitialData.sampled(singular_rule(p, cut), window)
    except (ValueError, TypeError) as exc:
        errors.append(f"initial: {exc}")
        return None
    errors.append(f"initial.kind {kind!r} is not one of riemann, constant, "
                  "piecewise_constant, singular")
    return None


def _solver(tab, errors) -> SolverParams:
    p = SolverParams()
    if not isinstance(tab, dict):
        errors.append("solver table is missing")
        return p
    p.scheme = tab.get("scheme", p.scheme)
    if p.scheme not in SCHEMES:
        errors.append(f"solver.scheme must be one of {', '.join(SCHEMES)}")
    p.dx = _num(tab, "dx", errors, "solver", default=p.dx, positive=True)
    p.t_end = _num(tab, "t_end", errors, "solver", default=p.t_end, positive=True)
    p.cfl = _num(tab, "cfl", errors, "solver", default=p.cfl, positive=True)
    if p.cfl is not None and p.cfl > 0.95:
        errors.append("solver.cfl must not exceed 0.95")
    win = tab.get("window", p.window)
    if (not isinstance(win, (list, tuple)) or len(win) != 2
            or not all(isinstance(v, (int, float)) and math.isfinite(v) for v in win)
            or not win[0] < win[1]):
        errors.append("solver.window must be [lo, hi] with finite lo < hi")
        win = p.window
    p.window = (float(win[0]), float(win[1]))
    times = tab.get("times", ())
    if any(not isinstance(t, (int, float)) or t < 0 for t in times):
        errors.append("solver.times must be nonnegative numbers")
    p.times = tuple(float(t) for t in times)
    if p.dx and p.window and p.dx > 0:
        n = (p.window[1] - p.window[0]) / p.dx
        if abs(n - round(n)) > 1e-6 * n:
            errors.append("solver.window length must be a multiple of solver.dx")
    return p


def _diagnostics(tab, errors) -> Diagnostics:
    d = Diagnostics()
    if tab is None:
        return d
    if not isinstance(tab, dict):
        errors.append("diagnostics must be a table")
        return d
    balls = tab.get("balls")
    if balls is not None and balls != "auto":
        if not all(isinstance(b, (list, tuple)) and len(b) == 2 for b in balls):
            errors.append("diagnostics.balls must be \"auto\" or a list of [t, x]")
        elif any(b[0] <= 0 for b in balls):
            errors.append("diagnostics.balls centers need t > 0")
        else:
            balls = [tuple(map(float, b)) for b in balls]
    d.balls = balls
    radii = tab.get("radii", d.radii)
    if not radii or any(not isinstance(r, (int, float)) or r <= 0 for r in radii):
        errors.append("diagnostics.radii must be positive numbers")
    d.radii = tuple(sorted((float(r) for r in radii), reverse=True))
    for key in ("kruzkov", "oleinik", "holder", "growth"):
        v = tab.get(key)
        if v is not None and not isinstance(v, dict):
            errors.append(f"diagnostics.{key} must be a table")
            v = None
        setattr(d, key, v)
    if d.oleinik is not None and not d.oleinik.get("c", 0) > 0:
        errors.append("diagnostics.oleinik.c must be positive")
    if d.holder is not None and not d.holder.get("beta", 0) > 0:
        errors.append("diagnostics.holder.beta must be positive")
    return d


def output_root(default: Path) -> Path:
    env = os.environ.get(OUT_ENV)
    return Path(env) if env else default


def build_scenario(data: dict, source: Optional[Path] = None,
                   dx_override: Optional[float] = None) -> ScenarioConfig:
    errors: list = []
    name = str(data.get("name") or (source.stem if source else "scenario"))
    solver_tab = dict(data.get("solver") or {})
    if dx_override is not None:
        solver_tab["dx"] = dx_override
    solver = _solver(solver_tab, errors)
    flux = _function(data.get("flux"), "flux", errors)
    entropy = _function(data.get("entropy", {"kind": "named", "name": "burgers"}),
                        "entropy", errors, strict=True)
    initial = _initial(data.get("initial"), solver.window, errors)
    diags = _diagnostics(data.get("diagnostics"), errors)
    if solver.scheme in ("fan", "jump_fan") and initial is not None and (
            initial.kind != "piecewise_constant" or len(initial.breaks) != 1):
        errors.append(f"solver.scheme {solver.scheme!r} needs Riemann initial data")
    if solver.scheme == "hopf_lax" and (diags.balls is not None or diags.kruzkov is not None):
        errors.append("diagnostics.balls and diagnostics.kruzkov need a scheme whose steps "
                      "follow the Godunov update (godunov, fan, jump_fan), not hopf_lax")
    out = data.get("output", {}).get("dir") if isinstance(data.get("output"), dict) else None
    if errors:
        raise ConfigError(errors)
    base = output_root(Path("out"))
    out_dir = Path(out) if out and not os.environ.get(OUT_ENV) else base / name
    return ScenarioConfig(name, data.get("flux"), data.get("entropy", {}),
                          data.get("initial"), solver, diags, out_dir, source,
                          flux, entropy, initial)


def parse_scenario(path, dx_override: Optional[float] = None) -> ScenarioConfig:
    p = Path(path)
    if not p.is_file():
        raise ConfigError([f"{p}: no such file"])
    try:
        with open(p, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError([f"{p}: {exc}"]) from None
    return build_scenario(data, p, dx_override)
