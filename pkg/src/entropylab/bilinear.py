"""Averages over discrete probability measures and the bilinear form B(f, eta)."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .convexfn import PiecewiseQuadratic, quadratic, random_piecewise
from .entropypair import EntropyPair, make_pair


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely many atoms with positive weights summing to 1.

    Repeated locations are merged by adding their weights.
    """

    locations: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        loc = np.asarray(self.locations, dtype=float).ravel()
        w = np.asarray(self.weights, dtype=float).ravel()
        if loc.shape != w.shape or loc.size == 0:
            raise ValueError("need equally many (>= 1) locations and weights")
        if not np.all(np.isfinite(loc)):
            raise ValueError("atom locations must be finite")
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {w.sum()!r}, not 1")
        uniq, inv = np.unique(loc, return_inverse=True)
        merged = np.zeros(len(uniq))
        np.add.at(merged, inv, w)
        object.__setattr__(self, "locations", uniq)
        object.__setattr__(self, "weights", merged)

    @classmethod
    def from_atoms(cls, atoms):
        atoms = list(atoms)
        return cls([a[0] for a in atoms], [a[1] for a in atoms])

    @classmethod
    def random(cls, rng: np.random.Generator, max_atoms: int = 8, span: float = 5.0):
        n = int(rng.integers(1, max_atoms + 1))
        w = rng.uniform(0.05, 1.0, n)
        w /= w.sum()
        # renormalizing can leave the sum a few ulps off 1
        w[-1] = 1.0 - w[:-1].sum()
        return cls(rng.uniform(-span, span, n), w)

    @property
    def atoms(self):
        return list(zip(self.locations.tolist(), self.weights.tolist()))

    @property
    def mean(self) -> float:
        return float(self.weights @ self.locations)


def average(m: DiscreteMeasure, h: Callable) -> float:
    vals = np.asarray(h(m.locations), dtype=float)
    if vals.shape != m.locations.shape:
        vals = np.array([float(h(x)) for x in m.locations])
    if not np.all(np.isfinite(vals)):
        raise ValueError("h is not finite at every atom")
    return float(m.weights @ vals)


def _components(m: DiscreteMeasure, pair: EntropyPair):
    u = m.locations
    with np.errstate(over="ignore", invalid="ignore"):
        f = np.asarray(pair.f(u), float)
        eta = np.asarray(pair.eta(u), float)
        q = np.asarray(pair.q(u), float)
    return u, f, eta, q


def bilinear_form(m: DiscreteMeasure, pair: EntropyPair) -> float:
    """<u q> - <u><q> - (<eta f> - <eta><f>)."""
    u, f, eta, q = _components(m, pair)
    w = m.weights
    with np.errstate(over="ignore", invalid="ignore"):
        terms = [w @ (u * q), w @ u, w @ q, w @ (eta * f), w @ eta, w @ f]
        val = terms[0] - terms[1] * terms[2] - (terms[3] - terms[4] * terms[5])
    if not (np.all(np.isfinite(terms)) and np.isfinite(val)):
        raise OverflowError(f"bilinear form overflowed for atoms {m.atoms}")
    return float(val)


def p_term(pair: EntropyPair, v, u):
    """P(v, u) = (v-u)(q(v)-q(u)) - (f(v)-f(u))(eta(v)-eta(u)).

    This is the division-free form of (v-u)(s(eta(u)-eta(v)) - (q(u)-q(v)))
    with s the chord slope of f; it is 0 at v == u.
    """
    v_ = np.asarray(v, dtype=float)
    u_ = np.asarray(u, dtype=float)
    out = ((v_ - u_) * (pair.q(v_) - pair.q(u_))
           - (pair.f(v_) - pair.f(u_)) * (pair.eta(v_) - pair.eta(u_)))
    out = np.where(v_ == u_, 0.0, out)
    return float(out) if out.ndim == 0 else out


def jensen_gaps(m: DiscreteMeasure, pair: EntropyPair) -> tuple[float, float]:
    mean = m.mean
    return (average(m, pair.f) - pair.f(mean), average(m, pair.eta) - pair.eta(mean))


def decomposition(m: DiscreteMeasure, pair: EntropyPair) -> tuple[float, float]:
    """(<P(u, <u>)>, <eta(u) - eta(<u>)> <f(u) - f(<u>)>); they sum to B."""
    mean = m.mean
    p_avg = float(m.weights @ np.atleast_1d(p_term(pair, m.locations, np.full_like(m.locations, mean))))
    gf, geta = jensen_gaps(m, pair)
    return p_avg, gf * geta


def component_scale(m: DiscreteMeasure, pair: EntropyPair) -> float:
    u, f, eta, q = _components(m, pair)
    w = m.weights
    avgs = [w @ (u * q), w @ u, w @ q, w @ (eta * f), w @ eta, w @ f]
    return 1.0 + max(abs(a) for a in avgs)


# ---------------------------------------------------------------------------
# randomized property self-test


@dataclass
class SelfTestResult:
    trials: int
    quadratic_trials: int
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def dump(self, path):
        with open(path, "w") as fh:
            json.dump(self.failures, fh, indent=2)


def _repro(kind, m, pair, **values):
    return {"check": kind, "atoms": m.atoms, "pair": pair.to_spec(),
            "values": {k: float(v) for k, v in values.items()}}


def check_measure(m: DiscreteMeasure, pair: EntropyPair, shifts, tol: float = 1e-10):
    """Run the nonnegativity chain, affine invariance and decomposition checks
    on one (measure, pair); returns a list of failure records."""
    fails = []
    B = bilinear_form(m, pair)
    scale = component_scale(m, pair)
    gf, geta = jensen_gaps(m, pair)
    prod = gf * geta
    if not (B - prod >= -tol * scale and prod >= -tol * scale):
        fails.append(_repro("nonnegativity", m, pair, B=B, lower=prod, scale=scale))
    a, b, c, d = shifts
    shifted = EntropyPair(pair.flux.shifted(a, b), pair.entropy.shifted(c, d))
    B2 = bilinear_form(m, shifted)
    if abs(B2 - B) > tol * max(abs(B), component_scale(m, shifted), scale):
        fails.append(_repro("affine_invariance", m, pair, B=B, B_shifted=B2,
                            a=a, b=b, c=c, d=d))
    p_avg, q_avg = decomposition(m, pair)
    if abs(p_avg + q_avg - B) > tol * scale:
        fails.append(_repro("decomposition", m, pair, B=B, P=p_avg, Q=q_avg))
    if p_avg < -tol * scale:
        fails.append(_repro("p_nonnegative", m, pair, P=p_avg))
    return fails


def check_uniform_convexity(m: DiscreteMeasure, c1: float, c2: float, rng, tol: float = 1e-10):
    f = quadratic(c1, float(rng.uniform(-3, 3)), float(rng.uniform(-3, 3)))
    eta = quadratic(c2, float(rng.uniform(-3, 3)), float(rng.uniform(-3, 3)))
    pair = EntropyPair(f, eta)
    B = bilinear_form(m, pair)
    dev = m.locations - m.mean
    var = float(m.weights @ dev ** 2)
    mad = float(m.weights @ np.abs(dev))
    mid = c1 * c2 / 4 * var ** 2
    low = c1 * c2 / 4 * mad ** 4
    scale = component_scale(m, pair)
    if not (B >= mid - tol * scale and mid >= low - tol * scale):
        return [_repro("uniform_convexity", m, pair, B=B, bound=mid, bound_l1=low,
                       c1=c1, c2=c2)]
    return []


def random_pair(rng) -> EntropyPair:
    f = random_piecewise(rng, strict=False)
    eta = random_piecewise(rng, strict=True)
    return make_pair(f, eta)


def selftest(n_trials: int = 10_000, n_quadratic: Optional[int] = None,
             seed: int = 0) -> SelfTestResult:
    """Randomized check of the bilinear-form properties on exact pairs."""
    rng = np.random.default_rng(seed)
    n_quadratic = max(1, n_trials // 10) if n_quadratic is None else n_quadratic
    res = SelfTestResult(n_trials, n_quadratic)
    pair = random_pair(rng)
    for k in range(n_trials):
        # a fresh pair every few trials keeps the pair constructions cheap
        if k % 4 == 0:
            pair = random_pair(rng)
        m = DiscreteMeasure.random(rng)
        res.failures += check_measure(m, pair, rng.uniform(-10, 10, 4))
    for _ in range(n_quadratic):
        m = DiscreteMeasure.random(rng)
        res.failures += check_uniform_convexity(m, float(rng.uniform(0.1, 3)),
                                                float(rng.uniform(0.1, 3)), rng)
    return res


__all__ = ["DiscreteMeasure", "average", "bilinear_form", "p_term", "jensen_gaps",
           "decomposition", "selftest", "SelfTestResult", "PiecewiseQuadratic"]
