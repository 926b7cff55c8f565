"""Run a validated scenario: solve, measure, write CSV/JSON artifacts."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import ScenarioConfig
from .entropypair import (EntropyPair, GrowthDescriptor, Unavailable, check_growth_conditions,
                          gamma_closed_form)
from .meter import (VANISHING, fan_measure, grid_measure, holder_exponents, holder_seminorm,
                    kruzkov_residual, kruzkov_tolerance, oleinik_check, random_pairs)
from .solvers import (GridSolution, fan_solution, godunov_solve, hopf_lax_solve,
                      reconstruct_potential, uniform_edges, write_csv)
from .waves import Rarefaction, jump_fan, solve_riemann

log = logging.getLogger(__name__)


@dataclass
class ScenarioResult:
    name: str
    verdict: dict
    files: list = field(default_factory=list)


def _fan(cfg: ScenarioConfig):
    u0 = cfg.initial
    if u0.kind != "piecewise_constant" or len(u0.breaks) != 1 or u0.breaks[0] != 0.0:
        return None
    build = jump_fan if cfg.solver.scheme == "jump_fan" else solve_riemann
    return build(cfg.flux, u0.values[0], u0.values[1])


def _fan_times(fan, p) -> np.ndarray:
    """Steps over [t_end/2, t_end]; the fan then spans many cells. With a jump
    present the step moves it exactly one cell, keeping it on cell edges."""
    if p.times:
        return np.array(sorted(t for t in p.times if t > 0))
    speeds = [abs(w.speed) for w in fan.jumps() if w.speed != 0]
    dt = p.dx / max(speeds) if speeds else p.dx
    k0 = max(int(np.ceil(0.5 * p.t_end / dt - 1e-9)), 1)
    k1 = max(int(np.floor(p.t_end / dt + 1e-9)), k0 + 1)
    return dt * np.arange(k0, k1 + 1)


def solve(cfg: ScenarioConfig) -> GridSolution:
    p = cfg.solver
    edges = uniform_edges(p.window, p.dx)
    if p.scheme == "godunov":
        sol = godunov_solve(cfg.flux, cfg.initial, p.t_end, p.dx, p.cfl, p.window, p.times)
        return reconstruct_potential(sol, cfg.flux)
    if p.scheme == "hopf_lax":
        times = sorted({0.0, *p.times, p.t_end})
        w0 = cfg.initial.potential(edges if cfg.initial.kind == "sampled" else None)
        return hopf_lax_solve(cfg.flux, w0, times, edges)
    fan = _fan(cfg)
    return fan_solution(fan, _fan_times(fan, p), edges)


def _auto_centers(cfg: ScenarioConfig):
    fan = _fan(cfg)
    tc = 0.5 * cfg.solver.t_end
    if fan is None:
        return [(tc, 0.5 * sum(cfg.solver.window))]
    centers = [(tc, w.speed * tc) for w in fan.jumps()]
    for w in fan.waves:
        if isinstance(w, Rarefaction):
            centers.append((tc, 0.5 * (w.xi_lo + w.xi_hi) * tc))
    return centers or [(tc, 0.0)]


def measure(cfg: ScenarioConfig, sol: GridSolution, seed: int = 0) -> tuple[dict, list]:
    d = cfg.diagnostics
    pair = EntropyPair(cfg.flux, cfg.entropy)
    report, rows = {}, []
    if d.balls is not None:
        centers = _auto_centers(cfg) if d.balls == "auto" else d.balls
        fan = _fan(cfg) if cfg.solver.scheme in ("fan", "jump_fan") else None
        diags = []
        for c in centers:
            diag = (fan_measure(pair, fan, c, d.radii) if fan is not None
                    else grid_measure(pair, sol, c, d.radii))
            diags.append(diag.to_dict())
            rows += diag.rows()
        report["balls"] = diags
    if d.kruzkov is not None:
        k = d.kruzkov.get("k")
        if k is None:
            k = np.linspace(d.kruzkov.get("k_min", -1.0), d.kruzkov.get("k_max", 1.0),
                            int(d.kruzkov.get("n", 21)))
        tol = float(d.kruzkov.get("tol", kruzkov_tolerance(sol)))
        res = kruzkov_residual(cfg.flux, sol, k)
        report["kruzkov"] = {"residual_max": res, "tol": tol, "pass": res <= tol}
    if d.oleinik is not None:
        times = d.oleinik.get("times") or [cfg.solver.t_end]
        o = oleinik_check(sol, float(d.oleinik["c"]), times)
        report["oleinik"] = {"max_violation": o.max_violation,
                             "per_time": {str(k): v for k, v in o.per_time.items()},
                             "pass": not o.violated}
    if d.holder is not None:
        h = d.holder
        g1, g2 = holder_exponents(h.get("alpha", 1.0), h["beta"], h.get("gamma", 1.0))
        times = [t for t in sol.t if t > 0] or list(sol.t)
        rng = np.random.default_rng(seed)
        lo, hi = sol.window
        pairs = random_pairs(rng, int(h.get("pairs", 2000)), times,
                             (lo + 0.25 * (hi - lo), hi - 0.25 * (hi - lo)))
        report["holder"] = {"gamma1": g1, "gamma2": g2,
                            "seminorm": holder_seminorm(sol, g1, g2, pairs)}
    if d.growth is not None:
        g = gamma_closed_form(GrowthDescriptor.from_pair(pair))
        gam = d.growth.get("gamma", g if not isinstance(g, Unavailable) else 1.0)
        rep = check_growth_conditions(pair, float(gam))
        report["growth"] = {"gamma_closed_form": g.reason if isinstance(g, Unavailable) else g,
                            **rep.to_dict()}
    return report, rows


def verdict_summary(report: dict) -> dict:
    verdicts = [b["verdict"] for b in report.get("balls", [])]
    residual = report.get("kruzkov", {}).get("residual_max")
    admissible = all(v == VANISHING for v in verdicts)
    if "kruzkov" in report:
        admissible = admissible and report["kruzkov"]["pass"]
    if "oleinik" in report:
        admissible = admissible and report["oleinik"]["pass"]
    return {"admissible": bool(admissible), "measure_verdicts": verdicts,
            "residual_max": residual}


def _write_json(path: Path, obj):
    with open(path, "w", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, default=_jsonable)
        fh.write("\n")


def _jsonable(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, np.bool_):
        return bool(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")


def run_scenario(cfg: ScenarioConfig, seed: int = 0, diagnostics: bool = True
                 ) -> ScenarioResult:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    sol = solve(cfg)
    files = [out / "solution.csv"]
    times = sorted({*(t for t in cfg.solver.times if t >= sol.t[0]), float(sol.t[-1])})
    write_csv(sol, files[0], times)
    verdict = {"scenario": cfg.name, "scheme": cfg.solver.scheme, "dx": cfg.solver.dx}
    if diagnostics:
        report, rows = measure(cfg, sol, seed)
        with open(out / "diagnostics.csv", "w", newline="\n") as fh:
            fh.write("t,x,r,mu_over_r\n")
            for row in rows:
                fh.write(",".join("%.17g" % v for v in row) + "\n")
        _write_json(out / "diagnostics.json", report)
        verdict.update(verdict_summary(report))
        files += [out / "diagnostics.csv", out / "diagnostics.json"]
    _write_json(out / "verdict.json", verdict)
    files.append(out / "verdict.json")
    log.info("scenario %s: %s", cfg.name, verdict)
    return ScenarioResult(cfg.name, verdict, files)
