"""Convex, locally Lipschitz scalar functions.

Two backends share one interface:

* :class:`PiecewiseQuadratic` -- exact. ``f'`` is piecewise linear, so
  one-sided derivatives, degeneracy intervals, generalized inverses of ``f'``
  and the Legendre conjugate all have closed forms.
* :class:`AnalyticConvex` -- black-box value/derivative rules with a declared
  asymptotic shape, used for the power/log/exponential growth examples where
  ``|u|`` reaches ``1e6``.

Every method accepts scalars or numpy arrays; scalars come back as ``float``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

INF = math.inf

CONTINUITY_RTOL = 1e-12
BISECT_ATOL = 1e-8
DERIV_RTOL = 1e-10
# flat-piece slope comparison on the exact backend
SLOPE_ATOL = 1e-12


def _as_array(u):
    arr = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("argument must be finite")
    return arr


def _ret(arr, like):
    if np.ndim(like) == 0:
        return float(arr)
    return arr


@dataclass(frozen=True)
class Interval:
    """Closed interval over the extended reals; endpoints may be +-inf."""

    lo: float
    hi: float
    approximate: bool = False

    def __contains__(self, v) -> bool:
        return self.lo <= v <= self.hi

    @property
    def is_singleton(self) -> bool:
        return self.lo == self.hi

    def interior_contains(self, v) -> bool:
        return self.lo < v < self.hi


@dataclass(frozen=True)
class Asymptotics:
    """Declared large-|u| shape of the derivative.

    kind is one of ``power`` (f' ~ sgn(u)|u|^exponent), ``sublinear``
    (f' ~ sgn(u)(1 - m|u|^-correction)), ``log`` (f' ~ sgn(u)(log|u| + 1)) or
    ``exp`` (f' ~ sgn(u)e^|u|).
    """

    kind: str = "power"
    exponent: float = 1.0
    correction: Optional[float] = None


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    strict: bool
    problems: tuple = ()
    bad_pieces: tuple = ()
    sampled: bool = False

    def __str__(self):
        label = "sampled" if self.sampled else "exact"
        status = "valid" if self.valid else "invalid"
        strict = "strict" if self.strict else "not strict"
        lines = [f"{status}, {strict} ({label})"]
        lines += [f"  - {p}" for p in self.problems]
        return "\n".join(lines)


class ConvexFun:
    """Common interface; see the two concrete backends."""

    backend = "abstract"

    def __call__(self, u):
        return self.eval(u)

    def eval(self, u):
        raise NotImplementedError

    def d_onesided(self, u, side="plus"):
        raise NotImplementedError

    def d_minus(self, u):
        return self.d_onesided(u, "minus")

    def d_plus(self, u):
        return self.d_onesided(u, "plus")

    def derivative_inverse(self, xi):
        """Right-continuous generalized inverse ``sup{u : f'(u-0) <= xi}``."""
        raise NotImplementedError

    def derivative_range(self) -> tuple[float, float]:
        """Limits of ``f'`` at -inf and +inf (the closed range of ``f'``)."""
        raise NotImplementedError

    def degeneracy_interval(self, u: float, side: str = "plus") -> Interval:
        raise NotImplementedError

    def conjugate(self, p):
        raise NotImplementedError

    def validate(self) -> ValidationReport:
        raise NotImplementedError

    def argmin(self) -> float:
        """A minimizer of f (possibly +-inf for monotone f)."""
        return self.derivative_inverse(0.0)

    def is_affine_on(self, lo: float, hi: float) -> bool:
        if lo > hi:
            lo, hi = hi, lo
        return hi in self.degeneracy_interval(lo, "plus")


# ---------------------------------------------------------------------------
# exact backend


@dataclass(frozen=True, eq=False)
class PiecewiseQuadratic(ConvexFun):
    """``a_i u^2 + c_i u + d_i`` on ``(b_{i-1}, b_i)``; outer pieces extend to
    infinity. ``len(pieces) == len(breakpoints) + 1``.

    Values of ``d`` that miss continuity by less than ``CONTINUITY_RTOL`` are
    snapped; larger gaps are kept and reported by :meth:`validate`.
    """

    breakpoints: tuple
    pieces: tuple
    strict_claim: Optional[bool] = None
    name: str = ""
    _a: np.ndarray = field(init=False, repr=False)
    _c: np.ndarray = field(init=False, repr=False)
    _d: np.ndarray = field(init=False, repr=False)
    _gaps: tuple = field(init=False, repr=False)

    backend = "exact"

    def __post_init__(self):
        bp = tuple(float(b) for b in self.breakpoints)
        pcs = tuple(tuple(float(x) for x in p) for p in self.pieces)
        if len(pcs) != len(bp) + 1:
            raise ValueError(
                f"need {len(bp) + 1} pieces for {len(bp)} breakpoints, got {len(pcs)}")
        if any(len(p) != 3 for p in pcs):
            raise ValueError("each piece is (a, c, d)")
        if any(not math.isfinite(x) for x in bp) or any(
                not math.isfinite(x) for p in pcs for x in p):
            raise ValueError("breakpoints and coefficients must be finite")
        if any(b1 >= b2 for b1, b2 in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        a = np.array([p[0] for p in pcs])
        c = np.array([p[1] for p in pcs])
        d = np.array([p[2] for p in pcs])
        gaps = []
        for i, b in enumerate(bp):
            left = a[i] * b * b + c[i] * b + d[i]
            right = a[i + 1] * b * b + c[i + 1] * b + d[i + 1]
            scale = 1.0 + abs(left) + abs(right)
            if abs(left - right) <= CONTINUITY_RTOL * scale:
                d[i + 1] = left - a[i + 1] * b * b - c[i + 1] * b
            else:
                gaps.append((i, left - right))
        pcs = tuple((float(x), float(y), float(z)) for x, y, z in zip(a, c, d))
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "pieces", pcs)
        object.__setattr__(self, "_a", a)
        object.__setattr__(self, "_c", c)
        object.__setattr__(self, "_d", d)
        object.__setattr__(self, "_gaps", tuple(gaps))

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_derivative(cls, breakpoints: Sequence[float], curvatures: Sequence[float],
                        left_slope: float, jumps: Sequence[float] | None = None,
                        value_at_zero: float = 0.0, name: str = ""):
        """Build from f'' per piece, f' on the leftmost piece at the first
        breakpoint (or at 0 if there are none), and derivative jumps.

        ``curvatures`` are f'' = 2a values. The constant is fixed so that
        ``f(0) == value_at_zero``.
        """
        bp = [float(b) for b in breakpoints]
        k = [float(x) for x in curvatures]
        if len(k) != len(bp) + 1:
            raise ValueError("need one curvature per piece")
        jumps = [0.0] * len(bp) if jumps is None else [float(j) for j in jumps]
        a = [x / 2 for x in k]
        ref = bp[0] if bp else 0.0
        c = [left_slope - k[0] * ref]
        for i, b in enumerate(bp):
            slope_left = k[i] * b + c[i]
            c.append(slope_left + jumps[i] - k[i + 1] * b)
        d = [0.0]
        for i, b in enumerate(bp):
            val = a[i] * b * b + c[i] * b + d[i]
            d.append(val - a[i + 1] * b * b - c[i + 1] * b)
        f = cls(bp, list(zip(a, c, d)), name=name)
        shift = value_at_zero - f.eval(0.0)
        return cls(bp, [(x, y, z + shift) for x, y, z in zip(a, c, d)], name=name)

    def shifted(self, slope: float, const: float) -> "PiecewiseQuadratic":
        """``f(u) - (slope*u + const)``."""
        return PiecewiseQuadratic(
            self.breakpoints,
            [(a, c - slope, d - const) for a, c, d in self.pieces],
            name=self.name)

    # -- evaluation -------------------------------------------------------

    def _piece(self, u, side):
        bp = np.asarray(self.breakpoints)
        return np.searchsorted(bp, u, side="left" if side == "minus" else "right")

    def eval(self, u):
        arr = _as_array(u)
        i = self._piece(arr, "minus")
        out = (self._a[i] * arr + self._c[i]) * arr + self._d[i]
        return _ret(out, u)

    def d_onesided(self, u, side="plus"):
        if side not in ("minus", "plus"):
            raise ValueError("side must be 'minus' or 'plus'")
        arr = _as_array(u)
        i = self._piece(arr, side)
        return _ret(2 * self._a[i] * arr + self._c[i], u)

    def second_derivative_bounds(self) -> tuple[float, float]:
        k = 2 * self._a
        return float(k.min()), float(k.max())

    def derivative_range(self):
        lo = -INF if self._a[0] > 0 else float(self._c[0])
        hi = INF if self._a[-1] > 0 else float(self._c[-1])
        return lo, hi

    def _bounds(self, i):
        bp = self.breakpoints
        lo = bp[i - 1] if i > 0 else -INF
        hi = bp[i] if i < len(bp) else INF
        return lo, hi

    def derivative_inverse(self, xi):
        x = np.asarray(xi, dtype=float)
        out = np.full(x.shape, -INF)
        for i in range(len(self.pieces)):
            a, c = self._a[i], self._c[i]
            lo, hi = self._bounds(i)
            if a > 0:
                cand = (x - c) / (2 * a)
                ok = cand > lo
                cand = np.minimum(cand, hi)
            else:
                cand = np.full(x.shape, hi)
                ok = c <= x
            out = np.where(ok, np.maximum(out, cand), out)
        return _ret(out, xi)

    def degeneracy_interval(self, u, side="plus"):
        u = float(_as_array(u))
        p = self.d_onesided(u, side)
        tol = SLOPE_ATOL * (1.0 + abs(p))
        n = len(self.pieces)
        bp = self.breakpoints

        def flat(i):
            return self._a[i] == 0 and abs(self._c[i] - p) <= tol

        # walk right: the piece just right of u, then successive pieces
        j = int(self._piece(u, "plus"))
        hi = u
        while True:
            if not flat(j):
                break
            if j == n - 1:
                hi = INF
                break
            hi = bp[j]
            j += 1
        # walk left
        j = int(self._piece(u, "minus"))
        lo = u
        while True:
            if not flat(j):
                break
            if j == 0:
                lo = -INF
                break
            lo = bp[j - 1]
            j -= 1
        return Interval(lo, hi)

    def conjugate(self, p):
        x = np.asarray(p, dtype=float)
        ustar = np.asarray(self.derivative_inverse(x), dtype=float)
        out = np.full(x.shape, INF)
        fin = np.isfinite(ustar)
        if np.any(fin):
            us = ustar[fin]
            out[fin] = x[fin] * us - self.eval(us)
        # p equal to the slope of an unbounded affine outer piece
        if self._a[-1] == 0:
            hit = (ustar == INF) & (np.abs(x - self._c[-1]) <= SLOPE_ATOL * (1 + abs(self._c[-1])))
            out[hit] = -self._d[-1]
        if self._a[0] == 0:
            hit = (ustar == -INF) & (np.abs(x - self._c[0]) <= SLOPE_ATOL * (1 + abs(self._c[0])))
            out[hit] = -self._d[0]
        return _ret(out, p)

    def validate(self):
        problems, bad = [], []
        for i, (a, _, _) in enumerate(self.pieces):
            if a < 0:
                problems.append(f"piece {i} is non-convex (a={a:g})")
                bad.append(i)
        for i, b in enumerate(self.breakpoints):
            dl = 2 * self._a[i] * b + self._c[i]
            dr = 2 * self._a[i + 1] * b + self._c[i + 1]
            if dr < dl - SLOPE_ATOL * (1 + abs(dl)):
                problems.append(
                    f"derivative decreases at breakpoint {i} (u={b:g}): {dl:g} -> {dr:g}")
                bad.append(i + 1)
        for i, gap in self._gaps:
            problems.append(f"discontinuous at breakpoint {i} (gap {gap:g})")
            bad.append(i + 1)
        strict = bool(np.all(self._a > 0))
        if self.strict_claim and not strict:
            flat = [i for i, a in enumerate(self._a) if a <= 0]
            problems.append(f"strict flag is false: affine piece(s) {flat}")
        return ValidationReport(not problems, strict and not bad, tuple(problems),
                                tuple(sorted(set(bad))))

    @property
    def asymptotics(self):
        # outer pieces: quadratic -> f' ~ |u|; affine -> bounded slope
        deg = 1.0 if (self._a[0] > 0 and self._a[-1] > 0) else 0.0
        return Asymptotics("power", deg)

    def to_spec(self):
        return {"kind": "quadratic_pieces",
                "breakpoints": list(self.breakpoints),
                "pieces": [list(p) for p in self.pieces]}

    def __repr__(self):
        label = self.name or "PiecewiseQuadratic"
        return f"<{label} bp={list(self.breakpoints)} pieces={list(self.pieces)}>"


# ---------------------------------------------------------------------------
# analytic backend


@dataclass(frozen=True, eq=False)
class AnalyticConvex(ConvexFun):
    """Convex C^1 function given by vectorized value and derivative rules.

    Calculus that needs inversion (degeneracy boundaries, generalized inverse,
    conjugate) goes through bisection on the monotone predicate
    ``f'(v) <= xi``.
    """

    value: Callable
    derivative: Callable
    asymptotics: Asymptotics = Asymptotics()
    strict_claim: Optional[bool] = True
    name: str = "analytic"
    spec: Optional[dict] = None
    search_limit: float = 1e12

    backend = "analytic"

    def eval(self, u):
        arr = _as_array(u)
        with np.errstate(over="ignore"):
            return _ret(np.asarray(self.value(arr), dtype=float), u)

    def d_onesided(self, u, side="plus"):
        if side not in ("minus", "plus"):
            raise ValueError("side must be 'minus' or 'plus'")
        arr = _as_array(u)
        with np.errstate(over="ignore"):
            return _ret(np.asarray(self.derivative(arr), dtype=float), u)

    def _dscalar(self, v):
        with np.errstate(over="ignore"):
            return float(self.derivative(np.float64(v)))

    def derivative_range(self):
        return self._dscalar(-self.search_limit), self._dscalar(self.search_limit)

    def _sup_where(self, pred, start, direction):
        """Largest (direction=+1) or smallest (-1) v reachable from ``start``
        with ``pred(v)`` true, given pred(start) is true and pred is monotone.
        Returns (boundary, certified)."""
        step = 1.0
        good = start
        while True:
            trial = start + direction * step
            if abs(trial) > self.search_limit:
                return direction * INF, False
            if pred(trial):
                good = trial
                step *= 2
            else:
                bad = trial
                break
        while abs(bad - good) > BISECT_ATOL:
            mid = 0.5 * (good + bad)
            if pred(mid):
                good = mid
            else:
                bad = mid
        return good, True

    def _inverse_scalar(self, xi):
        lo_r, hi_r = self.derivative_range()
        if xi < lo_r:
            return -INF
        if xi >= hi_r:
            return INF
        # bracket a point with f' <= xi
        v, step = 0.0, 1.0
        while self._dscalar(v) > xi:
            v -= step
            step *= 2
            if abs(v) > self.search_limit:
                return -INF
        sup, _ = self._sup_where(lambda w: self._dscalar(w) <= xi, v, +1)
        return sup

    def derivative_inverse(self, xi):
        x = np.asarray(xi, dtype=float)
        if x.ndim == 0:
            return self._inverse_scalar(float(x))
        return self._inverse_vector(x.ravel()).reshape(x.shape)

    def _inverse_vector(self, x):
        """Bisection on all entries at once; same semantics as the scalar path."""
        lo_r, hi_r = self.derivative_range()
        out = np.where(x < lo_r, -INF, INF)
        live = (x >= lo_r) & (x < hi_r)
        if not np.any(live):
            return out
        xs = x[live]
        d = lambda v: np.asarray(self.derivative(v), dtype=float)
        lo = np.full(xs.shape, -1.0)
        hi = np.full(xs.shape, 1.0)
        with np.errstate(over="ignore", invalid="ignore"):
            while True:
                bad = d(lo) > xs
                if not np.any(bad):
                    break
                lo[bad] *= 2
                if np.max(np.abs(lo)) > self.search_limit:
                    lo[bad & (np.abs(lo) > self.search_limit)] = -INF
                    break
            while True:
                bad = d(hi) <= xs
                if not np.any(bad):
                    break
                hi[bad] *= 2
                if np.max(hi) > self.search_limit:
                    break
            fin = np.isfinite(lo)
            for _ in range(200):
                width = hi - lo
                if np.all(~fin | (width <= 1e-13 * (1 + np.abs(hi)))):
                    break
                mid = 0.5 * (lo + hi)
                ok = d(mid) <= xs
                lo = np.where(fin & ok, mid, lo)
                hi = np.where(fin & ~ok, mid, hi)
        out[live] = lo
        return out

    def degeneracy_interval(self, u, side="plus"):
        u = float(_as_array(u))
        p = self._dscalar(u)
        tol = DERIV_RTOL * max(1.0, abs(p))
        hi, ok_hi = self._sup_where(lambda v: self._dscalar(v) - p <= tol, u, +1)
        lo, ok_lo = self._sup_where(lambda v: p - self._dscalar(v) <= tol, u, -1)
        # within bisection tolerance of u means no degeneracy
        if ok_hi and hi - u <= BISECT_ATOL:
            hi = u
        if ok_lo and u - lo <= BISECT_ATOL:
            lo = u
        return Interval(lo, hi, approximate=not (ok_hi and ok_lo))

    def conjugate(self, p):
        x = np.asarray(p, dtype=float)
        us = np.asarray(self.derivative_inverse(x), dtype=float)
        out = np.full(x.shape, INF)
        fin = np.isfinite(us)
        out[fin] = x[fin] * us[fin] - self.eval(us[fin])
        return _ret(out, p)

    def validate(self, grid=None):
        if grid is None:
            core = np.linspace(-50, 50, 2001)
            tail = np.logspace(2, 6, 81)
            grid = np.unique(np.concatenate([-tail[::-1], core, tail]))
        with np.errstate(over="ignore"):
            d = np.asarray(self.derivative(grid), dtype=float)
        problems = []
        # overflow in the far tails (exponential growth) just shortens the grid
        fin = np.isfinite(d)
        if not np.all(fin):
            inner = np.abs(grid) <= 50
            if not np.all(fin[inner]):
                problems.append("derivative not finite on sampling grid")
            grid, d = grid[fin], d[fin]
        diffs = np.diff(d)
        scale = DERIV_RTOL * np.maximum(1.0, np.abs(d[1:]))
        if np.any(diffs < -scale):
            k = int(np.argmax(diffs < -scale))
            problems.append(f"derivative decreases near u={grid[k]:g}")
        strict = bool(np.all(diffs > 0))
        if self.strict_claim and not strict:
            problems.append("strict flag is false: derivative not strictly increasing on grid")
        return ValidationReport(not problems, strict and not problems, tuple(problems),
                                (), sampled=True)

    def to_spec(self):
        return dict(self.spec) if self.spec else {"kind": "named", "name": self.name}

    def __repr__(self):
        return f"<AnalyticConvex {self.name}>"


# ---------------------------------------------------------------------------
# named functions


def burgers() -> PiecewiseQuadratic:
    """u^2/2."""
    return PiecewiseQuadratic((), [(0.5, 0.0, 0.0)], name="burgers")


def quadratic(curvature: float = 1.0, slope: float = 0.0, const: float = 0.0):
    """curvature*u^2/2 + slope*u + const."""
    return PiecewiseQuadratic((), [(curvature / 2, slope, const)], name="quadratic")


def absolute() -> PiecewiseQuadratic:
    return PiecewiseQuadratic((0.0,), [(0.0, -1.0, 0.0), (0.0, 1.0, 0.0)], name="abs")


def flat_flux() -> PiecewiseQuadratic:
    """u^2/2 for u <= 0, 0 on [0, 1], (u-1)^2/2 for u >= 1."""
    return PiecewiseQuadratic((0.0, 1.0),
                              [(0.5, 0.0, 0.0), (0.0, 0.0, 0.0), (0.5, -1.0, 0.5)],
                              name="flat")


def power(alpha: float) -> AnalyticConvex:
    """|u|^(alpha+1)/(alpha+1), so f' = sgn(u)|u|^alpha."""
    alpha = float(alpha)
    if alpha <= 0:
        raise ValueError("power: alpha must be positive (alpha=0 is |u|, use absolute())")
    return AnalyticConvex(
        lambda u: np.abs(u) ** (alpha + 1) / (alpha + 1),
        lambda u: np.sign(u) * np.abs(u) ** alpha,
        Asymptotics("power", alpha),
        name=f"power({alpha:g})",
        spec={"kind": "named", "name": "power", "alpha": alpha})


def sublinear(correction: float) -> AnalyticConvex:
    """Linear growth with slope approaching 1 from below:
    f' = sgn(u)(1 - (1+|u|)^-correction), correction in (0, 1]."""
    k = float(correction)
    if not 0 < k <= 1:
        raise ValueError("sublinear: correction exponent must lie in (0, 1]")
    if k == 1:
        def value(u):
            au = np.abs(u)
            return au - np.log1p(au)
    else:
        def value(u):
            au = np.abs(u)
            return au - ((1 + au) ** (1 - k) - 1) / (1 - k)
    return AnalyticConvex(
        value,
        lambda u: np.sign(u) * (1 - (1 + np.abs(u)) ** (-k)),
        Asymptotics("sublinear", 0.0, k),
        name=f"sublinear({k:g})",
        spec={"kind": "named", "name": "sublinear", "correction": k})


def log_entropy() -> AnalyticConvex:
    """(1+|u|)log(1+|u|) - |u|, with derivative sgn(u)log(1+|u|)."""
    def value(u):
        au = np.abs(u)
        return (1 + au) * np.log1p(au) - au
    return AnalyticConvex(
        value,
        lambda u: np.sign(u) * np.log1p(np.abs(u)),
        Asymptotics("log", 0.0),
        name="log",
        spec={"kind": "named", "name": "log"})


def exp_flux() -> AnalyticConvex:
    """e^|u| - 1 - |u|, with derivative sgn(u)(e^|u| - 1)."""
    return AnalyticConvex(
        lambda u: np.expm1(np.abs(u)) - np.abs(u),
        lambda u: np.sign(u) * np.expm1(np.abs(u)),
        Asymptotics("exp", 0.0),
        name="exp",
        spec={"kind": "named", "name": "exp"})


def random_piecewise(rng: np.random.Generator, *, strict: bool = False,
                     max_breaks: int = 3, span: float = 5.0,
                     flat_prob: float = 0.35) -> PiecewiseQuadratic:
    """Random convex exact function with breakpoints in [-span, span].

    With ``strict=False`` some pieces are affine and some breakpoints carry
    derivative jumps; ``strict=True`` gives every piece positive curvature.
    """
    nb = int(rng.integers(0, max_breaks + 1))
    bp = np.sort(rng.uniform(-span, span, nb))
    while nb > 1 and np.min(np.diff(bp)) < 0.2:
        bp = np.sort(rng.uniform(-span, span, nb))
    curv = rng.uniform(0.2, 2.0, nb + 1)
    if not strict:
        curv[rng.uniform(size=nb + 1) < flat_prob] = 0.0
    jumps = np.where(rng.uniform(size=nb) < 0.3, rng.uniform(0.0, 1.5, nb), 0.0)
    return PiecewiseQuadratic.from_derivative(
        bp, curv, float(rng.uniform(-2, 2)), jumps,
        value_at_zero=float(rng.uniform(-1, 1)), name="random")


NAMED = {
    "burgers": lambda spec: burgers(),
    "abs": lambda spec: absolute(),
    "flat": lambda spec: flat_flux(),
    "quadratic": lambda spec: quadratic(spec.get("curvature", 1.0), spec.get("slope", 0.0),
                                        spec.get("const", 0.0)),
    "power": lambda spec: power(spec["alpha"]),
    "sublinear": lambda spec: sublinear(spec["correction"]),
    "log": lambda spec: log_entropy(),
    "exp": lambda spec: exp_flux(),
}


def from_spec(spec: dict) -> ConvexFun:
    """Build a function from its config value (see README for the schema)."""
    if not isinstance(spec, dict):
        raise ValueError("function spec must be a table/object")
    kind = spec.get("kind")
    if kind == "quadratic_pieces":
        try:
            bp = spec.get("breakpoints", [])
            pieces = spec["pieces"]
        except KeyError as exc:
            raise ValueError(f"quadratic_pieces spec missing {exc}") from None
        return PiecewiseQuadratic(tuple(bp), tuple(tuple(p) for p in pieces))
    if kind == "named":
        name = spec.get("name")
        if name not in NAMED:
            raise ValueError(f"unknown named function {name!r}; known: {sorted(NAMED)}")
        try:
            return NAMED[name](spec)
        except KeyError as exc:
            raise ValueError(f"named function {name!r} needs parameter {exc}") from None
    raise ValueError(f"unknown function kind {kind!r}")


def d_onesided(fun: ConvexFun, u, side="plus"):
    return fun.d_onesided(u, side)


def degeneracy_interval(fun: ConvexFun, u, side="plus") -> Interval:
    return fun.degeneracy_interval(u, side)


def conjugate(fun: ConvexFun, p):
    return fun.conjugate(p)


def validate(fun: ConvexFun) -> ValidationReport:
    return fun.validate()
