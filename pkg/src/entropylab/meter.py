"""Entropy-production diagnostics.

``fan_measure`` and ``grid_measure`` estimate mu(B_r)/r for the minimal
non-negative measure dominating eta(u)_t + q(u)_x, i.e. its positive part.
Balls live in the (t, x) plane with the Euclidean metric.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .convexfn import ConvexFun
from .entropypair import EntropyPair, KruzkovPair
from .errors import ResolutionError
from .solvers import GODUNOV, GridSolution, interface_state
from .waves import Rarefaction, WaveFan, production_rate

VANISHING = "Vanishing"
POSITIVE = "PositiveLowerBound"
FAN_RTOL = 1e-9


@dataclass(frozen=True)
class BallDiagnostic:
    center: tuple
    radii: tuple
    values: tuple
    rtol: float
    verdict: str
    c: float = 0.0
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def liminf_estimate(self) -> float:
        """Minimum over the supplied radii."""
        return min(self.values)

    @property
    def smallest_radius_value(self) -> float:
        return self.values[int(np.argmin(self.radii))]

    def rows(self):
        t, x = self.center
        return [(t, x, r, v) for r, v in zip(self.radii, self.values)]

    def to_dict(self):
        return {"center": list(self.center), "radii": list(self.radii),
                "mu_over_r": list(self.values), "liminf_estimate": self.liminf_estimate,
                "smallest_radius_value": self.smallest_radius_value,
                "rtol": self.rtol, "verdict": self.verdict, "c": self.c, **self.meta}


def _verdict(center, radii, values, rtol, meta=None) -> BallDiagnostic:
    low = min(values)
    if low <= rtol:
        return BallDiagnostic(tuple(center), tuple(radii), tuple(values), rtol, VANISHING,
                              0.0, meta or {})
    return BallDiagnostic(tuple(center), tuple(radii), tuple(values), rtol, POSITIVE,
                          low, meta or {})


def _check_center(center):
    t, x = map(float, center)
    if not t > 0:
        raise ValueError(f"ball center needs t > 0, got t={t}")
    return t, x


def chord_time_measure(speed: float, center, r: float) -> float:
    """dt-length of {t >= 0} part of the line x = speed*t inside B_r(center)."""
    t0, x0 = center
    norm = math.sqrt(1.0 + speed * speed)
    dist = abs(x0 - speed * t0) / norm
    if dist >= r:
        return 0.0
    half = math.sqrt(r * r - dist * dist) / norm
    tp = (t0 + speed * x0) / (norm * norm)
    lo, hi = max(tp - half, 0.0), tp + half
    return max(hi - lo, 0.0)


def fan_measure(pair: EntropyPair, fan: WaveFan, center, radii: Sequence[float],
                rtol: float = FAN_RTOL) -> BallDiagnostic:
    """Exact mu(B_r)/r for a self-similar fan centered at the origin."""
    c = _check_center(center)
    rates = []
    for w in fan.waves:
        if isinstance(w, Rarefaction):
            continue
        _, D = production_rate(pair, w.left, w.right)
        rates.append((w.speed, max(D, 0.0)))
    values = []
    for r in radii:
        mu = sum(d * chord_time_measure(s, c, r) for s, d in rates if d > 0)
        values.append(mu / r)
    return _verdict(c, radii, values, rtol, {"source": "fan"})


# ---------------------------------------------------------------------------
# grids


def interface_entropy_flux(f: ConvexFun, q: Callable, a, b):
    """q at the interface Riemann state; a stationary jump splits the
    difference, since neither trace belongs to the interface alone."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    star = interface_state(f, a, b)
    out = np.asarray(q(star), dtype=float)
    fa = np.asarray(f(a), float)
    fb = np.asarray(f(b), float)
    stationary = (a > b) & (np.abs(fb - fa) <= 1e-14 * (1 + np.abs(fa) + np.abs(fb)))
    if np.any(stationary):
        avg = 0.5 * (np.asarray(q(a), float) + np.asarray(q(b), float))
        out = np.where(stationary, avg, out)
    return out


def entropy_residual(f: ConvexFun, eta: Callable, q: Callable, sol: GridSolution) -> np.ndarray:
    """Cell residuals R[n, i] between stored steps n and n + 1 (outflow edges)."""
    u = sol.u
    dt = np.diff(sol.t)
    ext = np.concatenate([u[:-1, :1], u[:-1], u[:-1, -1:]], axis=1)
    Q = interface_entropy_flux(f, q, ext[:, :-1], ext[:, 1:])
    e = np.asarray(eta(u), dtype=float)
    return (e[1:] - e[:-1]) / dt[:, None] + np.diff(Q, axis=1) / sol.dx


def _cells_meeting_ball(sol: GridSolution, center, r):
    t0, x0 = center
    tl, th = sol.t[:-1], sol.t[1:]
    xl, xh = sol.x_edges[:-1], sol.x_edges[1:]
    dt_ = np.maximum(np.maximum(tl - t0, t0 - th), 0.0)
    dx_ = np.maximum(np.maximum(xl - x0, x0 - xh), 0.0)
    return dt_[:, None] ** 2 + dx_[None, :] ** 2 <= r * r


def grid_rtol(dx: float, r: float) -> float:
    return 1e-2 * math.sqrt(dx / r)


def grid_measure(pair: EntropyPair, sol: GridSolution, center, radii: Sequence[float],
                 f: Optional[ConvexFun] = None, residual: Optional[np.ndarray] = None
                 ) -> BallDiagnostic:
    """Positive part of the discrete production summed over cells meeting B_r."""
    c = _check_center(center)
    if min(radii) < 4 * sol.dx:
        raise ResolutionError(
            f"smallest radius {min(radii)} is below 4*dx = {4 * sol.dx}; refine the grid")
    f = pair.flux if f is None else f
    R = entropy_residual(f, pair.eta, pair.q, sol) if residual is None else residual
    area = np.diff(sol.t)[:, None] * sol.dx
    pos = np.maximum(R, 0.0) * area
    values = [float(pos[_cells_meeting_ball(sol, c, r)].sum()) / r for r in radii]
    return _verdict(c, radii, values, grid_rtol(sol.dx, min(radii)), {"source": sol.source})


def kruzkov_tolerance(sol: GridSolution) -> float:
    """Pass threshold for :func:`kruzkov_residual`.

    Godunov steps satisfy the discrete inequality up to roundoff, so a fixed
    5e-3 applies. Exact samples of admissible fans carry an O(dx/t) error at
    the kinks of rarefactions, hence the same 10 dx/t allowance as the
    one-sided slope check.
    """
    if sol.source == GODUNOV:
        return 5e-3
    return 10 * sol.dx / float(sol.t[0])


def kruzkov_residual(f: ConvexFun, sol: GridSolution, k_grid: Sequence[float]) -> float:
    """Largest positive cell residual of the Kruzkov pairs over ``k_grid``."""
    worst = 0.0
    for k in k_grid:
        kp = KruzkovPair(f, float(k))
        R = entropy_residual(f, kp.eta, kp.q, sol)
        worst = max(worst, float(np.max(R, initial=0.0)))
    return worst


# ---------------------------------------------------------------------------
# Oleinik and Hoelder


@dataclass(frozen=True)
class OleinikReport:
    max_violation: float
    per_time: dict
    allowance: bool

    @property
    def violated(self) -> bool:
        return self.max_violation > 0


def oleinik_check(sol: GridSolution, c: float, t_list: Sequence[float],
                  allowance: bool = True) -> OleinikReport:
    """max over times and x2 > x1 of (u2 - u1)/(x2 - x1) - 1/(ct).

    A quotient over any pair is a weighted mean of neighbor quotients, so the
    maximum is attained at adjacent cells.
    """
    if not c > 0:
        raise ValueError("the one-sided bound needs c > 0 (uniformly convex flux)")
    per = {}
    for t in t_list:
        if not t > 0:
            raise ValueError("times must be positive")
        u = sol.at(t)
        slope = float(np.max(np.diff(u) / np.diff(sol.centers))) if u.size > 1 else -math.inf
        bound = 1.0 / (c * t) + (10 * sol.dx / t if allowance else 0.0)
        per[float(t)] = slope - bound
    return OleinikReport(max(per.values()), per, allowance)


def holder_exponents(alpha: float, beta: float, gamma: float) -> tuple[float, float]:
    if not beta > 0:
        raise ValueError("Hoelder exponents need beta > 0")
    if not gamma >= 1:
        raise ValueError("gamma must be >= 1")
    return beta / (beta + 1), beta / (gamma * (2 * beta + 1))


def random_pairs(rng: np.random.Generator, n: int, times: Sequence[float], x_window,
                 max_sep: Optional[float] = None) -> np.ndarray:
    """n rows (t, x, t', x') with t, t' from ``times``; with ``max_sep`` the
    second point stays within that distance in x of the first."""
    times = np.asarray(times, dtype=float)
    lo, hi = x_window
    t1 = rng.choice(times, n)
    t2 = rng.choice(times, n)
    x1 = rng.uniform(lo, hi, n)
    if max_sep is None:
        x2 = rng.uniform(lo, hi, n)
    else:
        x2 = np.clip(x1 + rng.uniform(-max_sep, max_sep, n), lo, hi)
    return np.column_stack([t1, x1, t2, x2])


def holder_seminorm(sol: GridSolution, g1: float, g2: float, sample_pairs) -> float:
    """max |w(t',x') - w(t,x)| / (|t'-t|^g2 + |x'-x|^g1) over the given pairs;
    w is linear in x between edges."""
    if sol.w is None:
        raise ValueError("solution has no potential")
    pts = np.asarray(sample_pairs, dtype=float)
    best = 0.0
    for t in np.unique(np.concatenate([pts[:, 0], pts[:, 2]])):
        sol.time_index(float(t))
    cache = {}

    def w_at(t, x):
        n = sol.time_index(float(t))
        if n not in cache:
            cache[n] = sol.w[n]
        return np.interp(x, sol.x_edges, cache[n])

    for t1, x1, t2, x2 in pts:
        den = abs(t2 - t1) ** g2 + abs(x2 - x1) ** g1
        if den == 0:
            continue
        best = max(best, abs(float(w_at(t2, x2)) - float(w_at(t1, x1))) / den)
    return best
