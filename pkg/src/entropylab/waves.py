"""Exact Riemann fans for convex fluxes and classification of single jumps.

Jump brackets follow one orientation throughout: ``[g] = g(u+) - g(u-)``
with ``u-`` the state on the left of the discontinuity. The production
density along a jump line is then ``D = [q] - s[eta]``, equal to
``int_{u-}^{u+} eta'(xi) (f'(xi) - s) dxi``; admissible jumps have
``D <= 0`` and under-compressive ones ``D > 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .convexfn import ConvexFun, PiecewiseQuadratic
from .entropypair import EntropyPair
from .errors import InternalEquivalenceViolation, NonConvexFlux, NotUnderCompressive

RH_RTOL = 1e-12
MERGE_ATOL = 1e-12


# ---------------------------------------------------------------------------
# wave types


@dataclass(frozen=True)
class Shock:
    speed: float
    left: float
    right: float
    kind = "shock"

    def to_dict(self):
        return {"type": self.kind, "speed": self.speed, "states": [self.left, self.right]}


@dataclass(frozen=True)
class Contact(Shock):
    """Jump across an affine stretch of the flux."""

    kind = "contact"


@dataclass(frozen=True)
class Rarefaction:
    """Centered fan on ``xi_lo <= x/t <= xi_hi``; the state at ``xi`` is the
    right-continuous inverse of f' clipped to ``[left, right]``."""

    xi_lo: float
    xi_hi: float
    left: float
    right: float
    flux: ConvexFun = field(repr=False, compare=False)
    kind = "rarefaction"

    @property
    def speed(self) -> float:
        return self.xi_lo

    def state(self, xi):
        g = np.asarray(self.flux.derivative_inverse(np.asarray(xi, dtype=float)), dtype=float)
        return np.clip(g, self.left, self.right)

    def to_dict(self):
        return {"type": self.kind, "range": [self.xi_lo, self.xi_hi],
                "states": [self.left, self.right]}


Wave = Union[Shock, Contact, Rarefaction]


@dataclass(frozen=True)
class WaveFan:
    left: float
    right: float
    waves: tuple
    admissible: bool
    flux: Optional[ConvexFun] = field(default=None, repr=False, compare=False)

    def jumps(self):
        return [w for w in self.waves if isinstance(w, Shock)]

    def speeds(self):
        out = []
        for w in self.waves:
            out += [w.xi_lo, w.xi_hi] if isinstance(w, Rarefaction) else [w.speed]
        return out

    def to_dict(self):
        return {"left": self.left, "right": self.right,
                "waves": [w.to_dict() for w in self.waves],
                "admissible": bool(self.admissible)}


# ---------------------------------------------------------------------------
# construction


def _require_convex(f: ConvexFun):
    rep = f.validate()
    if not rep.valid:
        raise NonConvexFlux("; ".join(rep.problems))


def _jump(f: ConvexFun, ul: float, ur: float) -> Shock:
    s = (float(f(ur)) - float(f(ul))) / (ur - ul) + 0.0  # no signed zero
    lo, hi = min(ul, ur), max(ul, ur)
    cls = Contact if f.is_affine_on(lo, hi) else Shock
    return cls(s, ul, ur)


def _pq_waves(f: PiecewiseQuadratic, ul: float, ur: float) -> list:
    bp = f.breakpoints
    edges = [-math.inf, *map(float, bp), math.inf]
    waves: list = []
    for i, (a, c, _) in enumerate(f.pieces):
        lo, hi = max(ul, edges[i]), min(ur, edges[i + 1])
        if hi <= lo:
            continue
        if a > 0:
            xlo, xhi = 2 * a * lo + c, 2 * a * hi + c
            prev = waves[-1] if waves else None
            if isinstance(prev, Rarefaction) and abs(prev.xi_hi - xlo) <= MERGE_ATOL * (1 + abs(xlo)):
                waves[-1] = Rarefaction(prev.xi_lo, xhi, prev.left, hi, f)
            else:
                waves.append(Rarefaction(xlo, xhi, lo, hi, f))
        else:
            waves.append(Contact(float(c), lo, hi))
    return waves


def solve_riemann(f: ConvexFun, u_left: float, u_right: float) -> WaveFan:
    """Entropy solution of the Riemann problem with states u_left | u_right."""
    _require_convex(f)
    ul, ur = float(u_left), float(u_right)
    if ul == ur:
        return WaveFan(ul, ur, (), True, f)
    if ul > ur:
        return WaveFan(ul, ur, (_jump(f, ul, ur),), True, f)
    if isinstance(f, PiecewiseQuadratic):
        waves = _pq_waves(f, ul, ur)
    elif f.is_affine_on(ul, ur):
        waves = [_jump(f, ul, ur)]
    else:
        waves = [Rarefaction(float(f.d_plus(ul)), float(f.d_minus(ur)), ul, ur, f)]
    return WaveFan(ul, ur, tuple(waves), True, f)


def jump_fan(f: ConvexFun, u_left: float, u_right: float) -> WaveFan:
    """The single Rankine-Hugoniot jump joining the states, admissible or not.

    For u_left < u_right on a non-affine stretch this is the under-compressive
    alternative to the rarefaction.
    """
    _require_convex(f)
    ul, ur = float(u_left), float(u_right)
    if ul == ur:
        return WaveFan(ul, ur, (), True, f)
    w = _jump(f, ul, ur)
    return WaveFan(ul, ur, (w,), ul > ur or isinstance(w, Contact), f)


def sample_fan(fan: WaveFan, t: float, x):
    """Evaluate the fan at (t, x); jumps take their right trace."""
    if t <= 0:
        raise ValueError("t must be positive")
    xi = np.asarray(x, dtype=float) / t
    out = np.full(xi.shape, fan.left)
    for w in fan.waves:
        if isinstance(w, Rarefaction):
            inside = xi >= w.xi_lo
            if np.any(inside):
                out[inside] = w.state(np.minimum(xi[inside], w.xi_hi))
        else:
            out = np.where(xi >= w.speed, w.right, out)
    return float(out) if out.ndim == 0 else out


def _antiderivative_segments(fan: WaveFan):
    """Pieces of F(xi) = int u(1, .) as (start, kind, value-at-start, data)."""
    segs = []
    pos, val, state = -math.inf, 0.0, fan.left
    f = fan.flux

    def add_const(until):
        nonlocal pos, val
        segs.append((pos, "const", val, state))
        if math.isinf(pos):
            # anchor the leftmost constant so that F(until) = 0
            segs[-1] = (pos, "const_anchor", until, state)
            val = 0.0
        else:
            val += state * (until - pos)
        pos = until

    for w in fan.waves:
        if isinstance(w, Rarefaction):
            add_const(w.xi_lo)
            segs.append((pos, "raref", val, w))
            val += float(f.conjugate(w.xi_hi)) - float(f.conjugate(w.xi_lo))
            pos, state = w.xi_hi, w.right
        else:
            add_const(w.speed)
            state = w.right
    if math.isinf(pos):
        segs.append((pos, "const_anchor", 0.0, state))
    else:
        segs.append((pos, "const", val, state))
    return segs


def _eval_antiderivative(fan: WaveFan, xi):
    xi = np.asarray(xi, dtype=float)
    out = np.zeros(xi.shape)
    segs = _antiderivative_segments(fan)
    f = fan.flux
    for start, kind, val, data in segs:
        mask = xi >= start
        if not np.any(mask):
            continue
        z = xi[mask]
        if kind == "const_anchor":
            out[mask] = data * (z - val)
        elif kind == "const":
            out[mask] = val + data * (z - start)
        else:
            w = data
            zz = np.minimum(z, w.xi_hi)
            out[mask] = val + np.asarray(f.conjugate(zz), float) - float(f.conjugate(w.xi_lo))
            # beyond xi_hi the next segment overwrites
    return out


def fan_potential(fan: WaveFan, t: float, x):
    """w(t, x) with w_x = u, w_t = -f(u), normalized by w(0, 0) = 0."""
    if t <= 0:
        raise ValueError("t must be positive")
    f = fan.flux
    x_ = np.asarray(x, dtype=float)
    F = _eval_antiderivative(fan, np.concatenate([[0.0], x_.ravel() / t]))
    u0 = float(sample_fan(fan, 1.0, 0.0))
    w = t * (F[1:] - F[0]) - t * float(f(u0))
    w = w.reshape(x_.shape)
    return float(w) if w.ndim == 0 else w


def fan_cell_averages(fan: WaveFan, t: float, edges):
    """Exact averages of u(t, .) over the cells delimited by ``edges``."""
    w = fan_potential(fan, t, edges)
    return np.diff(w) / np.diff(np.asarray(edges, dtype=float))


# ---------------------------------------------------------------------------
# single-jump analysis


def production_rate(pair: EntropyPair, u_minus: float, u_plus: float) -> tuple[float, float]:
    """(s, D) with s = [f]/[u] and D = [q] - s[eta]."""
    um, up = float(u_minus), float(u_plus)
    if um == up:
        raise ValueError("production rate needs distinct states")
    s = (float(pair.f(up)) - float(pair.f(um))) / (up - um) + 0.0
    D = (float(pair.q(up)) - float(pair.q(um))) - s * (float(pair.eta(up)) - float(pair.eta(um)))
    return s, D


def classification_tol(u_minus: float, u_plus: float) -> float:
    return 1e-10 * (1.0 + abs(u_plus) + abs(u_minus))


@dataclass(frozen=True)
class DiscontinuityReport:
    speed: float
    u_minus: float
    u_plus: float
    production: float
    classification: str
    lax: bool
    degenerate: bool
    # True when |D| fell inside the tolerance band and the derivative test decided
    sign_unresolved: bool = False

    def to_dict(self):
        return {"speed": self.speed, "states": [self.u_minus, self.u_plus],
                "production": self.production, "classification": self.classification}


LAX_SHOCK = "LaxShock"
CONTACT = "Contact"
UNDER_COMPRESSIVE = "UnderCompressive"
NON_CONVEX = "NonConvexReject"


def lax_inequality(f: ConvexFun, u_minus: float, u_plus: float) -> bool:
    return float(f.d_minus(u_minus)) > float(f.d_plus(u_plus))


def classify(pair: EntropyPair, u_minus: float, u_plus: float) -> DiscontinuityReport:
    um, up = float(u_minus), float(u_plus)
    f = pair.flux
    if not f.validate().valid:
        return DiscontinuityReport(math.nan, um, up, math.nan, NON_CONVEX, False, False)
    s, D = production_rate(pair, um, up)
    tol = classification_tol(um, up)
    degenerate = f.is_affine_on(um, up)
    lax = lax_inequality(f, um, up)

    def report(label, unresolved=False):
        return DiscontinuityReport(s, um, up, D, label, lax, degenerate, unresolved)

    if degenerate:
        if abs(D) <= tol:
            return report(CONTACT)
        raise InternalEquivalenceViolation(
            f"affine stretch [{um}, {up}] but production {D!r} exceeds {tol!r}")
    if abs(D) <= tol:
        # too weak a jump for the sign to be read; the derivative test decides
        return report(LAX_SHOCK if lax else UNDER_COMPRESSIVE, unresolved=True)
    if (D < 0) != lax:
        raise InternalEquivalenceViolation(
            f"production {D!r} disagrees with Lax inequality {lax} for ({um}, {up})")
    return report(LAX_SHOCK if lax else UNDER_COMPRESSIVE)


@dataclass(frozen=True)
class Budget:
    s0: float
    D: float
    c0: float
    satisfies_budget: bool


def undercompressive_budget(pair: EntropyPair, u_minus: float, u_plus: float,
                            c0: float) -> Budget:
    """Production of the upward jump u_minus -> u_plus against the allowance c0/2."""
    um, up = float(u_minus), float(u_plus)
    f = pair.flux
    if not (up > um and float(f.d_minus(up)) > float(f.d_plus(um))):
        raise NotUnderCompressive(
            f"({um}, {up}) needs u+ > u- and f'(u+ - 0) > f'(u- + 0)")
    s, D = production_rate(pair, um, up)
    return Budget(s, D, float(c0), bool(0 < D <= c0 / 2))


def check_rankine_hugoniot(f: ConvexFun, fan: WaveFan) -> float:
    """Largest normalized RH defect over the jumps of ``fan``."""
    worst = 0.0
    for w in fan.jumps():
        jf = float(f(w.right)) - float(f(w.left))
        worst = max(worst, abs(w.speed * (w.right - w.left) - jf) / (1 + abs(jf)))
    return worst
