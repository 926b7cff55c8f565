"""Grid solvers: Hopf-Lax for the potential w and Godunov for u.

The two are linked by w_x = u and w_t = -f(u). Grids are uniform cells on a
finite window; ``x_edges`` holds the N + 1 cell edges, ``u`` holds cell
averages and ``w`` holds potential values at the edges.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .convexfn import ConvexFun
from .errors import CFLDegenerate, EmptyFeasibleCone
from .waves import WaveFan, fan_potential

log = logging.getLogger(__name__)

HOPF_LAX = "HopfLax"
GODUNOV = "Godunov"
FAN = "AnalyticFanSampling"


@dataclass
class GridSolution:
    t: np.ndarray
    x_edges: np.ndarray
    u: np.ndarray
    w: Optional[np.ndarray] = None
    source: str = GODUNOV
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.x_edges = np.asarray(self.x_edges, dtype=float)
        self.u = np.atleast_2d(np.asarray(self.u, dtype=float))
        if self.u.shape != (len(self.t), len(self.x_edges) - 1):
            raise ValueError(f"u has shape {self.u.shape}, expected "
                             f"{(len(self.t), len(self.x_edges) - 1)}")
        if self.w is not None:
            self.w = np.atleast_2d(np.asarray(self.w, dtype=float))
            if self.w.shape != (len(self.t), len(self.x_edges)):
                raise ValueError("w must have one value per time and edge")

    @property
    def dx(self) -> float:
        return float(self.x_edges[1] - self.x_edges[0])

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.x_edges[1:] + self.x_edges[:-1])

    @property
    def window(self) -> tuple[float, float]:
        return float(self.x_edges[0]), float(self.x_edges[-1])

    def time_index(self, t: float) -> int:
        lo, hi = self.t[0], self.t[-1]
        slack = 1e-9 * (1 + abs(hi))
        if t < lo - slack or t > hi + slack:
            raise ValueError(f"t={t} is outside the stored range [{lo}, {hi}]")
        return int(np.argmin(np.abs(self.t - t)))

    def at(self, t: float) -> np.ndarray:
        return self.u[self.time_index(t)]

    def traces(self, t: float):
        """One-sided difference quotients (u-, u+) at the interior edges."""
        u = self.at(t)
        return u[:-1], u[1:]


def uniform_edges(window, dx: float) -> np.ndarray:
    lo, hi = map(float, window)
    if not dx > 0:
        raise ValueError("dx must be positive")
    if not (math.isfinite(lo) and math.isfinite(hi) and hi > lo):
        raise ValueError(f"bad window {window!r}")
    n = int(round((hi - lo) / dx))
    if n < 1 or abs(n * dx - (hi - lo)) > 1e-9 * (hi - lo):
        raise ValueError(f"window length {hi - lo} is not a multiple of dx={dx}")
    return lo + dx * np.arange(n + 1)


# ---------------------------------------------------------------------------
# initial data and potentials


@dataclass(frozen=True)
class PiecewiseLinear:
    """Continuous piecewise-linear function with linear extension outside the nodes."""

    nodes: np.ndarray
    values: np.ndarray
    left_slope: float
    right_slope: float

    def __post_init__(self):
        n = np.asarray(self.nodes, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if n.ndim != 1 or n.shape != v.shape or n.size < 1:
            raise ValueError("nodes and values must be matching 1-d arrays")
        if np.any(np.diff(n) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if not (np.all(np.isfinite(v)) and np.isfinite(self.left_slope)
                and np.isfinite(self.right_slope)):
            raise ValueError("potential must be finite")
        object.__setattr__(self, "nodes", n)
        object.__setattr__(self, "values", v)

    @property
    def slopes(self) -> np.ndarray:
        """Slopes of the pieces (-inf, n0), (n0, n1), ..., (n_last, inf)."""
        inner = np.diff(self.values) / np.diff(self.nodes)
        return np.concatenate([[self.left_slope], inner, [self.right_slope]])

    def __call__(self, y):
        y_ = np.asarray(y, dtype=float)
        out = np.interp(y_, self.nodes, self.values)
        out = np.where(y_ < self.nodes[0],
                       self.values[0] + self.left_slope * (y_ - self.nodes[0]), out)
        out = np.where(y_ > self.nodes[-1],
                       self.values[-1] + self.right_slope * (y_ - self.nodes[-1]), out)
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class InitialData:
    """u0 as piecewise-constant data or a sampled rule on a finite window.

    Outside the window the data equals the far-field values. A sampled rule
    is integrated per cell by Gauss-Legendre quadrature.
    """

    kind: str
    window: tuple
    breaks: tuple = ()
    values: tuple = ()
    rule: Optional[Callable] = field(default=None, compare=False)
    far_left: Optional[float] = None
    far_right: Optional[float] = None
    quad_points: int = 8

    def __post_init__(self):
        lo, hi = map(float, self.window)
        if not (math.isfinite(lo) and math.isfinite(hi) and hi > lo):
            raise ValueError(f"window must be finite with lo < hi, got {self.window!r}")
        if self.kind == "piecewise_constant":
            if len(self.values) != len(self.breaks) + 1:
                raise ValueError("piecewise-constant data needs len(values) = len(breaks) + 1")
            if any(b2 <= b1 for b1, b2 in zip(self.breaks, self.breaks[1:])):
                raise ValueError("breaks must be increasing")
            if not all(math.isfinite(v) for v in self.values):
                raise ValueError("values must be finite")
            object.__setattr__(self, "far_left", float(self.values[0]))
            object.__setattr__(self, "far_right", float(self.values[-1]))
        elif self.kind == "sampled":
            if self.rule is None:
                raise ValueError("sampled data needs a rule")
            fl = self.far_left if self.far_left is not None else float(self.rule(np.array(lo)))
            fr = self.far_right if self.far_right is not None else float(self.rule(np.array(hi)))
            if not (math.isfinite(fl) and math.isfinite(fr)):
                raise ValueError("far-field values must be finite")
            object.__setattr__(self, "far_left", fl)
            object.__setattr__(self, "far_right", fr)
        else:
            raise ValueError(f"unknown initial data kind {self.kind!r}")

    @classmethod
    def riemann(cls, u_left: float, u_right: float, window=(-2.0, 2.0), at: float = 0.0):
        return cls("piecewise_constant", tuple(window), (float(at),),
                   (float(u_left), float(u_right)))

    @classmethod
    def constant(cls, c: float, window=(-2.0, 2.0)):
        return cls("piecewise_constant", tuple(window), (), (float(c),))

    @classmethod
    def sampled(cls, rule: Callable, window, far_left=None, far_right=None):
        return cls("sampled", tuple(window), rule=rule, far_left=far_left, far_right=far_right)

    def __call__(self, x):
        x_ = np.asarray(x, dtype=float)
        if self.kind == "piecewise_constant":
            idx = np.searchsorted(np.asarray(self.breaks, dtype=float), x_, side="right")
            out = np.asarray(self.values, dtype=float)[idx]
        else:
            lo, hi = self.window
            out = np.asarray(self.rule(x_), dtype=float)
            out = np.where(x_ < lo, self.far_left, np.where(x_ > hi, self.far_right, out))
        return float(out) if out.ndim == 0 else out

    def antiderivative(self, x):
        """int_0^x u0 for piecewise-constant data (exact)."""
        if self.kind != "piecewise_constant":
            raise ValueError("exact antiderivative is only available for piecewise-constant data")
        x_ = np.asarray(x, dtype=float)
        nodes = np.asarray(self.breaks, dtype=float)
        vals = np.asarray(self.values, dtype=float)

        def prim(z):
            # integral from the first break (or 0) of the step function
            if nodes.size == 0:
                return vals[0] * z
            out = np.where(z <= nodes[0], vals[0] * (z - nodes[0]), 0.0)
            acc = 0.0
            for k in range(nodes.size):
                right = nodes[k + 1] if k + 1 < nodes.size else math.inf
                seg = (z > nodes[k]) & (z <= right)
                out = np.where(seg, acc + vals[k + 1] * (z - nodes[k]), out)
                if math.isfinite(right):
                    acc += vals[k + 1] * (right - nodes[k])
            return out

        res = prim(x_) - prim(np.array(0.0))
        return float(res) if res.ndim == 0 else res

    def cell_averages(self, edges) -> np.ndarray:
        e = np.asarray(edges, dtype=float)
        if self.kind == "piecewise_constant":
            avg = np.diff(self.antiderivative(e)) / np.diff(e)
            # cells free of breaks take the value itself, without cancellation
            br = np.asarray(self.breaks, dtype=float)
            lo = np.searchsorted(br, e[:-1], side="right")
            hi = np.searchsorted(br, e[1:], side="left")
            return np.where(lo == hi, np.asarray(self.values, float)[lo], avg)
        gx, gw = np.polynomial.legendre.leggauss(self.quad_points)
        mid = 0.5 * (e[1:] + e[:-1])
        half = 0.5 * np.diff(e)
        pts = mid[:, None] + half[:, None] * gx[None, :]
        return (self(pts) * gw[None, :]).sum(axis=1) / 2.0

    def potential(self, edges=None) -> PiecewiseLinear:
        """w0 with w0' = u0, w0(0) = 0 (exact for piecewise-constant data;
        for sampled data exact at the given edges)."""
        if self.kind == "piecewise_constant":
            nodes = np.unique(np.concatenate([[0.0], np.asarray(self.breaks, float)]))
            return PiecewiseLinear(nodes, self.antiderivative(nodes), self.far_left,
                                   self.far_right)
        if edges is None:
            raise ValueError("sampled data needs edges to build its potential")
        e = np.asarray(edges, dtype=float)
        w = np.concatenate([[0.0], np.cumsum(self.cell_averages(e) * np.diff(e))])
        w -= np.interp(0.0, e, w) if e[0] <= 0 <= e[-1] else w[0]
        return PiecewiseLinear(e, w, self.far_left, self.far_right)

    def to_spec(self):
        if self.kind == "piecewise_constant":
            return {"kind": self.kind, "window": list(self.window),
                    "breaks": list(self.breaks), "values": list(self.values)}
        return {"kind": self.kind, "window": list(self.window),
                "far_left": self.far_left, "far_right": self.far_right}


# ---------------------------------------------------------------------------
# Hopf-Lax


def _hopf_lax_slice(f: ConvexFun, w0: PiecewiseLinear, t: float, x: np.ndarray,
                    chunk: int = 256) -> np.ndarray:
    """min_y w0(y) + t f*((x - y)/t) for every x.

    On each linear piece of w0 (slope m) the objective is convex in y and
    stationary where (x - y)/t lies in the subdifferential of f at m, so its
    minimum over the piece, intersected with the feasible cone, is found by
    clipping the two stationary candidates. The global minimum is the
    smallest of these per-piece values.
    """
    nodes = w0.nodes
    m = w0.slopes
    p_lo, p_hi = f.derivative_range()
    dm = np.asarray(f.d_minus(m), dtype=float)
    dp = np.asarray(f.d_plus(m), dtype=float)
    seg_lo = np.concatenate([[-math.inf], nodes])
    seg_hi = np.concatenate([nodes, [math.inf]])
    out = np.empty(x.shape)
    for s in range(0, x.size, chunk):
        xc = x[s:s + chunk, None]
        cone_lo = xc - t * p_hi
        cone_hi = xc - t * p_lo
        lo = np.maximum(seg_lo[None, :], cone_lo)
        hi = np.minimum(seg_hi[None, :], cone_hi)
        feasible = lo <= hi
        best = np.full(xc.shape[0], math.inf)
        for cand in (xc - t * dp[None, :], xc - t * dm[None, :]):
            with np.errstate(invalid="ignore"):
                y = np.clip(cand, lo, hi)
            y = np.where(feasible & np.isfinite(y), y, np.nan)
            ok = ~np.isnan(y)
            val = np.full(y.shape, math.inf)
            if np.any(ok):
                yy = y[ok]
                pp = (np.broadcast_to(xc, y.shape)[ok] - yy) / t
                val[ok] = w0(yy) + t * np.asarray(f.conjugate(pp), dtype=float)
            best = np.minimum(best, val.min(axis=1))
        if not np.all(np.isfinite(best)):
            bad = float(xc[~np.isfinite(best), 0][0])
            raise EmptyFeasibleCone(
                f"no feasible foot point for x={bad} at t={t}; enlarge the window "
                "or use a flux with superlinear growth")
        out[s:s + chunk] = best
    return out


def hopf_lax_solve(f: ConvexFun, w0: PiecewiseLinear, t_grid: Sequence[float],
                   x_edges) -> GridSolution:
    """Potential by the Hopf-Lax formula; u as difference quotients of w."""
    x = np.asarray(x_edges, dtype=float)
    ts = np.asarray(t_grid, dtype=float)
    if np.any(ts < 0):
        raise ValueError("times must be nonnegative")
    rows = []
    for t in ts:
        rows.append(w0(x) if t == 0 else _hopf_lax_slice(f, w0, float(t), x))
    w = np.vstack(rows)
    u = np.diff(w, axis=1) / np.diff(x)[None, :]
    return GridSolution(ts, x, u, w, HOPF_LAX, {"flux": repr(f)})


# ---------------------------------------------------------------------------
# Godunov


def interface_state(f: ConvexFun, a, b):
    """State on the line x/t = 0 of the Riemann fan a | b (right trace)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    g0 = f.argmin()
    up = np.clip(g0, a, np.maximum(a, b))
    with np.errstate(invalid="ignore", divide="ignore"):
        s = (np.asarray(f(b), float) - np.asarray(f(a), float)) / (b - a)
    down = np.where(s > 0, a, b)
    return np.where(a <= b, up, down)


def godunov_flux(f: ConvexFun, a, b):
    """min of f on [a, b] if a <= b, else max of f on [b, a]."""
    a_ = np.asarray(a, dtype=float)
    b_ = np.asarray(b, dtype=float)
    g0 = f.argmin()
    lo = np.minimum(a_, b_)
    hi = np.maximum(a_, b_)
    fmin = np.asarray(f(np.clip(g0, lo, hi)), dtype=float)
    fmax = np.maximum(np.asarray(f(a_), float), np.asarray(f(b_), float))
    out = np.where(a_ <= b_, fmin, fmax)
    return float(out) if out.ndim == 0 else out


def max_speed(f: ConvexFun, u) -> float:
    return float(max(abs(float(f.d_minus(np.min(u)))), abs(float(f.d_plus(np.max(u))))))


def godunov_solve(f: ConvexFun, u0: InitialData, t_end: float, dx: float,
                  cfl: float = 0.45, window=None, times: Optional[Sequence[float]] = None
                  ) -> GridSolution:
    """First-order Godunov scheme with outflow boundaries.

    Every time step is stored. ``times`` forces the stepping to land on those
    instants as well. The interface fluxes are kept in ``meta`` so that the
    potential and the entropy residuals can reuse them.
    """
    if not 0 < cfl <= 0.95:
        raise ValueError("cfl must lie in (0, 0.95]")
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    edges = uniform_edges(window if window is not None else u0.window, dx)
    u = u0.cell_averages(edges)
    extra = () if times is None else times
    stops = sorted({float(t_end), *(float(s) for s in extra if 0 < s < t_end)})
    speed0 = max_speed(f, u)
    meta = {"flux": repr(f), "cfl": cfl, "dx": dx, "boundary_flux_integral": 0.0}
    reach = speed0 * t_end
    if u0.kind == "piecewise_constant" and u0.breaks:
        lo, hi = edges[0], edges[-1]
        meta["domain_of_dependence_ok"] = bool(min(u0.breaks) - lo > reach
                                                and hi - max(u0.breaks) > reach)
        if not meta["domain_of_dependence_ok"]:
            log.warning("waves may reach the window boundary before t_end=%g", t_end)
    if speed0 == 0.0:
        # f' vanishes on the whole data range, so f is constant there and u is stationary
        meta["cfl_degenerate"] = True
        ts = np.array([0.0, *stops])
        F = np.full((len(ts) - 1, len(edges)), float(f(u[0])))
        meta["interface_flux"] = F
        return GridSolution(ts, edges, np.tile(u, (len(ts), 1)), None, GODUNOV, meta)

    ts, us, fluxes = [0.0], [u.copy()], []
    t = 0.0
    k = 0
    while t < t_end:
        speed = max_speed(f, u)
        if speed == 0.0:
            raise CFLDegenerate("characteristic speed vanished mid-run")
        dt = cfl * dx / speed
        nxt = stops[k]
        if t + dt >= nxt - 1e-12 * max(1.0, nxt):
            dt = nxt - t
            t_new = nxt
            k += 1
        else:
            t_new = t + dt
        ext = np.concatenate([[u[0]], u, [u[-1]]])
        F = godunov_flux(f, ext[:-1], ext[1:])
        u = u - dt / dx * np.diff(F)
        meta["boundary_flux_integral"] += dt * (F[-1] - F[0])
        t = t_new
        ts.append(t)
        us.append(u.copy())
        fluxes.append(F)
    meta["interface_flux"] = np.vstack(fluxes)
    return GridSolution(np.array(ts), edges, np.vstack(us), None, GODUNOV, meta)


def reconstruct_potential(sol: GridSolution, f: ConvexFun) -> GridSolution:
    """Fill w: w(t0, .) integrates u from the left edge (anchored at 0), later
    times follow w_t = -f(u) with the interface fluxes."""
    dx = np.diff(sol.x_edges)
    w = np.empty((len(sol.t), len(sol.x_edges)))
    w[0] = np.concatenate([[0.0], np.cumsum(sol.u[0] * dx)])
    F = sol.meta.get("interface_flux")
    for n in range(1, len(sol.t)):
        dt = sol.t[n] - sol.t[n - 1]
        if F is not None and len(F) == len(sol.t) - 1:
            flux = F[n - 1]
        else:
            flux = 0.5 * (_edge_flux(f, sol.u[n - 1]) + _edge_flux(f, sol.u[n]))
        w[n] = w[n - 1] - dt * flux
    return GridSolution(sol.t, sol.x_edges, sol.u, w, sol.source, dict(sol.meta))


def _edge_flux(f: ConvexFun, u):
    ext = np.concatenate([[u[0]], u, [u[-1]]])
    return godunov_flux(f, ext[:-1], ext[1:])


def fan_solution(fan: WaveFan, t_grid: Sequence[float], x_edges) -> GridSolution:
    """Exact cell averages and potential of a wave fan on a grid (t > 0)."""
    ts = np.asarray(t_grid, dtype=float)
    x = np.asarray(x_edges, dtype=float)
    if np.any(ts <= 0):
        raise ValueError("fan sampling needs t > 0")
    w = np.vstack([fan_potential(fan, float(t), x) for t in ts])
    u = np.diff(w, axis=1) / np.diff(x)[None, :]
    return GridSolution(ts, x, u, w, FAN, {"fan": fan.to_dict()})


# ---------------------------------------------------------------------------
# comparison


def restrict(u: np.ndarray, factor: int) -> np.ndarray:
    """Average groups of ``factor`` fine cells onto one coarse cell."""
    if u.size % factor:
        raise ValueError("fine grid does not nest in the coarse one")
    return u.reshape(-1, factor).mean(axis=1)


def l1_distance(a: GridSolution, b: GridSolution, t: float, window=None) -> float:
    ua, ub = a.at(t), b.at(t)
    ea, eb = a.x_edges, b.x_edges
    if a.dx < b.dx:
        ua, ea, ub, eb = ub, eb, ua, ea
    # now ``a`` is the coarse side
    ratio = (eb[1] - eb[0]) and (ea[1] - ea[0]) / (eb[1] - eb[0])
    factor = int(round(ratio))
    if abs(ratio - factor) > 1e-9 * ratio:
        raise ValueError("grids must nest by an integer refinement factor")
    lo = max(ea[0], eb[0])
    hi = min(ea[-1], eb[-1])
    if window is not None:
        lo, hi = max(lo, window[0]), min(hi, window[1])
    tol = 1e-9 * max(1.0, abs(lo), abs(hi))
    ia = (ea[:-1] >= lo - tol) & (ea[1:] <= hi + tol)
    ib = (eb[:-1] >= lo - tol) & (eb[1:] <= hi + tol)
    ub_r = restrict(ub[ib], factor) if factor > 1 else ub[ib]
    ua_w = ua[ia]
    if ua_w.shape != ub_r.shape:
        raise ValueError("grids are not aligned on the comparison window")
    return float(np.sum(np.abs(ua_w - ub_r)) * (ea[1] - ea[0]))


def write_csv(sol: GridSolution, path, times=None):
    """Rows (t, x, u, w) at cell centers; w is interpolated to centers."""
    idx = range(len(sol.t)) if times is None else [sol.time_index(t) for t in times]
    xc = sol.centers
    with open(path, "w", newline="\n") as fh:
        fh.write("t,x,u,w\n" if sol.w is not None else "t,x,u\n")
        for n in idx:
            wc = 0.5 * (sol.w[n, 1:] + sol.w[n, :-1]) if sol.w is not None else None
            for i in range(len(xc)):
                row = [sol.t[n], xc[i], sol.u[n, i]] + ([wc[i]] if wc is not None else [])
                fh.write(",".join("%.17g" % v for v in row) + "\n")
