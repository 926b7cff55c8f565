"""Entropy/entropy-flux pairs, the Kruzkov family, Q(u), and growth checks."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
from scipy import integrate

from .convexfn import ConvexFun, PiecewiseQuadratic, from_spec
from .errors import NonConvexFlux, NonStrictEntropy, ZeroEntropyFlux

QUAD_EPSABS = 1e-10
QUAD_EPSREL = 1e-12


class PiecewiseCubicFlux:
    """Exact ``q(u) = int_base^u eta'(s) f'(s) ds`` for two exact backends.

    On each interval of the merged breakpoint set the integrand is a quadratic
    polynomial; it is integrated in local coordinates ``z = u - ref`` around a
    reference point whose q-value is known.
    """

    def __init__(self, f: PiecewiseQuadratic, eta: PiecewiseQuadratic, base: float = 0.0):
        merged = np.unique(np.concatenate([np.asarray(f.breakpoints, float),
                                           np.asarray(eta.breakpoints, float)]))
        self.breaks = merged
        n = len(merged) + 1
        # interval k = (m_{k-1}, m_k); a representative point picks the pieces
        reps = np.empty(n)
        if len(merged) == 0:
            reps[0] = 0.0
        else:
            reps[0] = merged[0] - 1.0
            reps[-1] = merged[-1] + 1.0
            reps[1:-1] = 0.5 * (merged[:-1] + merged[1:])
        fa, fc, ea, ec = [], [], [], []
        for r in reps:
            i = int(np.searchsorted(f.breakpoints, r))
            j = int(np.searchsorted(eta.breakpoints, r))
            fa.append(2 * f.pieces[i][0])
            fc.append(f.pieces[i][1])
            ea.append(2 * eta.pieces[j][0])
            ec.append(eta.pieces[j][1])
        self._fa, self._fc = np.array(fa), np.array(fc)
        self._ea, self._ec = np.array(ea), np.array(ec)

        ref = np.empty(n)
        qref = np.empty(n)
        k0 = int(np.searchsorted(merged, base, side="left"))
        ref[k0], qref[k0] = base, 0.0
        for k in range(k0 + 1, n):
            b = merged[k - 1]
            ref[k] = b
            qref[k] = self._value(k - 1, b, ref[k - 1], qref[k - 1])
        for k in range(k0 - 1, -1, -1):
            b = merged[k]
            ref[k] = b
            qref[k] = self._value(k + 1, b, ref[k + 1], qref[k + 1])
        self._ref, self._qref = ref, qref
        self.base = base

    def _value(self, k, u, ref, qref):
        # f' = A1 z + B1, eta' = A2 z + B2 with z = u - ref
        A1, A2 = self._fa[k], self._ea[k]
        B1 = A1 * ref + self._fc[k]
        B2 = A2 * ref + self._ec[k]
        z = u - ref
        return qref + z * (B1 * B2 + z * ((A1 * B2 + A2 * B1) / 2 + z * (A1 * A2 / 3)))

    def __call__(self, u):
        arr = np.asarray(u, dtype=float)
        k = np.searchsorted(self.breaks, arr, side="left")
        out = self._value(k, arr, self._ref[k], self._qref[k])
        return float(out) if np.ndim(u) == 0 else out

    def derivative(self, u):
        arr = np.asarray(u, dtype=float)
        k = np.searchsorted(self.breaks, arr, side="right")
        out = (self._fa[k] * arr + self._fc[k]) * (self._ea[k] * arr + self._ec[k])
        return float(out) if np.ndim(u) == 0 else out


class QuadratureFlux:
    """``q(u) = int_base^u eta'(s) f'(s) ds`` by adaptive Gauss-Kronrod.

    Array arguments are sorted and integrated panel to panel so that each
    panel is short relative to its distance from the base point.
    """

    def __init__(self, f: ConvexFun, eta: ConvexFun, base: float = 0.0):
        self.f, self.eta, self.base = f, eta, float(base)

    def derivative(self, u):
        return self.eta.d_plus(u) * self.f.d_plus(u)

    def _integrand(self, s):
        with np.errstate(over="ignore", invalid="ignore"):
            return float(self.eta.d_plus(s) * self.f.d_plus(s))

    def _panel(self, lo, hi):
        val, _ = integrate.quad(self._integrand, lo, hi, epsabs=QUAD_EPSABS,
                                epsrel=QUAD_EPSREL, limit=200)
        return val

    def _cumulative(self, targets, direction):
        """q at increasing distances ``targets`` from base along ``direction``."""
        out = np.empty(len(targets))
        pos, acc = 0.0, 0.0
        for n, d in enumerate(targets):
            while pos < d:
                # geometric sub-panels: [0,1], [1,2], [2,4], ...
                nxt = min(d, max(1.0, 2 * pos))
                acc += self._panel(direction * pos + self.base, direction * nxt + self.base)
                pos = nxt
            out[n] = acc
        return out

    def __call__(self, u):
        arr = np.asarray(u, dtype=float)
        flat = arr.ravel()
        out = np.zeros_like(flat)
        for sgn in (1.0, -1.0):
            mask = sgn * (flat - self.base) > 0
            if not np.any(mask):
                continue
            dist = sgn * (flat[mask] - self.base)
            order = np.argsort(dist)
            vals = self._cumulative(dist[order], sgn)
            res = np.empty_like(vals)
            res[order] = vals
            out[mask] = res
        out = out.reshape(arr.shape)
        return float(out) if np.ndim(u) == 0 else out


@dataclass(frozen=True, eq=False)
class EntropyPair:
    """Flux ``f``, strictly convex entropy ``eta`` and ``q`` with ``q' = eta' f'``
    and ``q(base_point) = 0``. Build with :func:`make_pair`."""

    flux: ConvexFun
    entropy: ConvexFun
    base_point: float = 0.0
    entropy_flux: object = field(init=False, repr=False)

    def __post_init__(self):
        if isinstance(self.flux, PiecewiseQuadratic) and isinstance(self.entropy, PiecewiseQuadratic):
            q = PiecewiseCubicFlux(self.flux, self.entropy, self.base_point)
        else:
            q = QuadratureFlux(self.flux, self.entropy, self.base_point)
        object.__setattr__(self, "entropy_flux", q)

    @property
    def exact(self) -> bool:
        return isinstance(self.entropy_flux, PiecewiseCubicFlux)

    def f(self, u):
        return self.flux.eval(u)

    def eta(self, u):
        return self.entropy.eval(u)

    def q(self, u):
        return self.entropy_flux(u)

    def to_spec(self):
        return {"flux": self.flux.to_spec(), "entropy": self.entropy.to_spec()}


def make_pair(f: ConvexFun, eta: ConvexFun, base_point: float = 0.0) -> EntropyPair:
    rep = f.validate()
    if not rep.valid:
        raise NonConvexFlux("; ".join(rep.problems))
    rep = eta.validate()
    if not rep.valid:
        raise NonStrictEntropy("; ".join(rep.problems))
    if not rep.strict:
        raise NonStrictEntropy("entropy must be strictly convex (it has an affine stretch)")
    return EntropyPair(f, eta, float(base_point))


def pair_from_spec(spec: dict) -> EntropyPair:
    return make_pair(from_spec(spec["flux"]), from_spec(spec["entropy"]))


@dataclass(frozen=True, eq=False)
class KruzkovPair:
    """eta_k(u) = |u - k|, q_k(u) = sgn(u - k)(f(u) - f(k)).

    Not strictly convex; it bypasses :func:`make_pair` validation.
    """

    flux: ConvexFun
    k: float

    def eta(self, u):
        return np.abs(np.asarray(u, dtype=float) - self.k) if np.ndim(u) else abs(u - self.k)

    def q(self, u):
        arr = np.asarray(u, dtype=float)
        out = np.sign(arr - self.k) * (self.flux.eval(arr) - self.flux.eval(self.k))
        return float(out) if np.ndim(u) == 0 else out


def kruzkov_pair(f: ConvexFun, k: float) -> KruzkovPair:
    return KruzkovPair(f, float(k))


def quadratic_form(pair: EntropyPair, u):
    """Q(u) = u q(u) - f(u) eta(u)."""
    arr = np.asarray(u, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        out = arr * pair.q(arr) - pair.f(arr) * pair.eta(arr)
    return float(out) if np.ndim(u) == 0 else out


def q_ratio(pair: EntropyPair, u):
    """h(u) = Q(u) / |q(u)|; raises where q vanishes."""
    q = np.asarray(pair.q(u), dtype=float)
    if np.any(q == 0):
        raise ZeroEntropyFlux(f"q(u) = 0 at u={u}")
    out = quadratic_form(pair, u) / np.abs(q)
    return float(out) if np.ndim(u) == 0 else out


# ---------------------------------------------------------------------------
# growth exponents


@dataclass(frozen=True)
class GrowthDescriptor:
    alpha: float = 1.0
    beta: float = 1.0
    alpha_tilde: Optional[float] = None
    beta_tilde: Optional[float] = None
    log_entropy: bool = False
    exp_flux: bool = False

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("growth exponents must be nonnegative")
        for t in (self.alpha_tilde, self.beta_tilde):
            if t is not None and not 0 < t <= 1:
                raise ValueError("correction exponents must lie in (0, 1]")

    @classmethod
    def from_pair(cls, pair: EntropyPair) -> "GrowthDescriptor":
        fa, ea = pair.flux.asymptotics, pair.entropy.asymptotics
        kw = {}
        if fa.kind == "exp":
            kw.update(exp_flux=True, alpha=0.0)
        elif fa.kind == "sublinear":
            kw.update(alpha=0.0, alpha_tilde=fa.correction)
        elif fa.kind == "power":
            kw.update(alpha=fa.exponent)
        else:
            raise ValueError(f"flux asymptotics {fa.kind!r} not covered")
        if ea.kind == "log":
            kw.update(log_entropy=True, beta=0.0)
        elif ea.kind == "sublinear":
            kw.update(beta=0.0, beta_tilde=ea.correction)
        elif ea.kind == "power":
            kw.update(beta=ea.exponent)
        else:
            raise ValueError(f"entropy asymptotics {ea.kind!r} not covered")
        return cls(**kw)


@dataclass(frozen=True)
class Unavailable:
    reason: str

    def __bool__(self):
        return False


def gamma_from_lipschitz(lam: float) -> float:
    """gamma for a bound |f'| <= C|eta'|^lam at infinity."""
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    return max(lam, 1.0)


def gamma_closed_form(desc: GrowthDescriptor) -> Union[float, Unavailable]:
    a, b = desc.alpha, desc.beta
    at, bt = desc.alpha_tilde, desc.beta_tilde
    if desc.exp_flux:
        return Unavailable("exponential flux: Q/eta ~ e^|u| outgrows every power of Q/f")
    if desc.log_entropy:
        if a > 0:
            return a + 1.0
        if at is not None and at < 1:
            return 1.0
        return Unavailable("log entropy needs a power flux or a sublinear flux with correction < 1")
    if a > 0 and b > 0:
        return max((a + 1) / (b + 1), 1.0)
    if a == 0 and b > 0:
        if at is None:
            return Unavailable("flux is asymptotically affine: Q/|q| stays bounded")
        return 1.0
    if a > 0 and b == 0:
        if bt is None or bt >= 1:
            return Unavailable("entropy needs a sublinear correction exponent in (0, 1)")
        return (a + 1 - bt) / (1 - bt)
    # a == 0 and b == 0
    if at is None or bt is None:
        return Unavailable("both functions asymptotically affine without corrections")
    if at + bt <= 1:
        return 1.0
    return Unavailable("correction exponents sum above 1")


@dataclass
class SideEvidence:
    """Sampled evidence on one half-line ``sign * u -> infinity``."""

    sign: int
    u: np.ndarray
    f_over_u: np.ndarray
    eta_over_power: np.ndarray
    h: np.ndarray
    c_ratio: np.ndarray
    overflow_at: Optional[float] = None

    @property
    def h_increasing_tail(self) -> bool:
        tail = self.h[len(self.h) // 2:]
        return bool(np.all(np.diff(tail) > 0))

    @property
    def c_est(self) -> float:
        return float(np.max(self.c_ratio))

    @property
    def c_max_over_min(self) -> float:
        return float(np.max(self.c_ratio) / np.min(self.c_ratio))

    @property
    def c_growth(self) -> float:
        """Largest value relative to the first sample; stays O(1) when the
        ratio is bounded, blows up when it grows."""
        return float(np.max(self.c_ratio) / self.c_ratio[0])


@dataclass
class GrowthReport:
    gamma: float
    beta: float
    threshold: float
    sides: list
    label: str = "sampled evidence"

    @property
    def min_f_over_u(self) -> float:
        return float(min(np.min(s.f_over_u) for s in self.sides))

    @property
    def min_eta_over_power(self) -> float:
        return float(min(np.min(s.eta_over_power) for s in self.sides))

    @property
    def condition_i(self) -> bool:
        return self.min_f_over_u > 0 and self.min_eta_over_power > 0

    @property
    def condition_ii(self) -> bool:
        return all(s.h_increasing_tail and s.h[-1] > self.threshold for s in self.sides)

    @property
    def c_est(self) -> float:
        return max(s.c_est for s in self.sides)

    @property
    def c_max_over_min(self) -> float:
        return max(s.c_max_over_min for s in self.sides)

    @property
    def c_growth(self) -> float:
        return max(s.c_growth for s in self.sides)

    @property
    def condition_iii(self) -> bool:
        return self.c_growth < self.threshold

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "gamma": self.gamma,
            "beta": self.beta,
            "condition_i": {"min_f_over_abs_u": self.min_f_over_u,
                            "min_eta_over_abs_u_beta1": self.min_eta_over_power,
                            "pass": self.condition_i},
            "condition_ii": {"h_last": [float(s.h[-1]) for s in self.sides],
                             "eventually_increasing": [s.h_increasing_tail for s in self.sides],
                             "threshold": self.threshold,
                             "pass": self.condition_ii},
            "condition_iii": {"c_est": self.c_est, "c_max_over_min": self.c_max_over_min,
                              "c_growth": self.c_growth, "pass": self.condition_iii},
            "overflow_at": [s.overflow_at for s in self.sides],
        }


def default_samples(n: int = 64, lo: float = 1e2, hi: float = 1e6) -> np.ndarray:
    return np.logspace(math.log10(lo), math.log10(hi), n)


def check_growth_conditions(pair: EntropyPair, gamma: float,
                            u_samples: Optional[Sequence[float]] = None,
                            beta: Optional[float] = None,
                            threshold: float = 10.0) -> GrowthReport:
    """Sample the three large-|u| growth conditions on both half-lines.

    Samples where any quantity overflows are dropped from the tail and the
    first such |u| is recorded in ``overflow_at``.
    """
    if gamma < 1:
        raise ValueError("gamma must be >= 1")
    mags = default_samples() if u_samples is None else np.asarray(u_samples, float)
    mags = np.sort(np.abs(mags))
    if np.any(mags < 1e-8):
        raise ValueError("samples must exclude a neighbourhood of 0")
    if beta is None:
        beta = pair.entropy.asymptotics.exponent
    sides = []
    for sgn in (1, -1):
        u = sgn * mags
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            f = np.asarray(pair.f(u), float)
            eta = np.asarray(pair.eta(u), float)
            q = np.asarray(pair.q(u), float)
            Q = u * q - f * eta
            h = Q / np.abs(q)
            c = (Q / eta) / (Q / f) ** gamma
        ok = np.isfinite(f) & np.isfinite(eta) & np.isfinite(q) & np.isfinite(Q) & np.isfinite(c)
        overflow = None
        if not np.all(ok):
            first = int(np.argmin(ok))
            overflow = float(mags[first])
            ok = np.arange(len(u)) < first
        if np.count_nonzero(ok) < 2:
            raise ValueError("fewer than two finite samples; lower the sample range")
        sides.append(SideEvidence(sgn, u[ok], f[ok] / np.abs(u[ok]),
                                  eta[ok] / np.abs(u[ok]) ** (beta + 1), h[ok], c[ok], overflow))
    return GrowthReport(float(gamma), float(beta), threshold, sides)
