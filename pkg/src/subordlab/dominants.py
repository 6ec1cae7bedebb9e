"""Catalogue of dominant functions and class predicates.

Every catalogue entry ``h`` is analytic in the unit disk, has real Taylor
coefficients and satisfies ``h(0) = 1``.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .config import MIN_ORDER, Config, get_config
from .errors import NoExactPredicate, ValuationMismatch
from .power_series import (
    TaylorSeries,
    ValuedSeries,
    derivative,
    divide,
    evaluate,
    exponential,
    power_real,
    tail_estimate,
    z_derivative,
)

TAGS = (
    "half-plane",
    "sector",
    "exp",
    "sqrt-shift",
    "janowski",
    "sigmoid",
    "exp-linear",
    "crescent",
    "slit-a",
    "opendoor-a",
    "opendoor-b",
    "custom",
)

_PARAM_NAMES = {
    "half-plane": (),
    "sector": ("gamma",),
    "exp": (),
    "sqrt-shift": (),
    "janowski": ("A", "B"),
    "sigmoid": (),
    "exp-linear": (),
    "crescent": (),
    "slit-a": ("a",),
    "opendoor-a": ("n", "alpha", "beta"),
    "opendoor-b": ("n", "alpha", "beta"),
    "custom": ("series",),
}

EXACT_TAGS = frozenset({"half-plane", "sector", "exp", "sqrt-shift", "janowski", "slit-a"})
CONVEX_TAGS = frozenset({"half-plane", "sector", "exp", "sqrt-shift", "janowski"})

GEOMETRY_RADII = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95)
GEOMETRY_ANGLES = 720


@dataclass(frozen=True)
class DominantSpec:
    tag: str
    params: tuple = ()

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown dominant tag {self.tag!r}")
        names = _PARAM_NAMES[self.tag]
        given = dict(self.params)
        if set(given) != set(names):
            raise ValueError(f"{self.tag} takes parameters {names}, got {tuple(given)}")
        object.__setattr__(self, "params", tuple((k, given[k]) for k in names))
        _validate(self.tag, given)

    def __getitem__(self, name):
        return dict(self.params)[name]

    @property
    def has_exact_membership(self) -> bool:
        return self.tag in EXACT_TAGS

    @property
    def is_convex(self) -> bool:
        return self.tag in CONVEX_TAGS

    def __call__(self, z):
        return evaluate_dominant(self, z)

    def __repr__(self):
        inner = ", ".join(f"{k}={v!r}" for k, v in self.params if k != "series")
        return f"{self.tag}({inner})"

    # constructors -------------------------------------------------------------
    @classmethod
    def half_plane(cls):
        return cls("half-plane")

    @classmethod
    def sector(cls, gamma: float):
        return cls("sector", (("gamma", float(gamma)),))

    @classmethod
    def exp(cls):
        return cls("exp")

    @classmethod
    def sqrt_shift(cls):
        return cls("sqrt-shift")

    @classmethod
    def janowski(cls, A: float, B: float):
        return cls("janowski", (("A", float(A)), ("B", float(B))))

    @classmethod
    def sigmoid(cls):
        return cls("sigmoid")

    @classmethod
    def exp_linear(cls):
        return cls("exp-linear")

    @classmethod
    def crescent(cls):
        return cls("crescent")

    @classmethod
    def slit_a(cls, a: float):
        return cls("slit-a", (("a", float(a)),))

    @classmethod
    def opendoor_a(cls, n: int, alpha: float, beta: float):
        return cls("opendoor-a", (("n", int(n)), ("alpha", float(alpha)), ("beta", float(beta))))

    @classmethod
    def opendoor_b(cls, n: int, alpha: float, beta: float):
        return cls("opendoor-b", (("n", int(n)), ("alpha", float(alpha)), ("beta", float(beta))))

    @classmethod
    def custom(cls, series: TaylorSeries):
        return cls("custom", (("series", series),))

    # serialization --------------------------------------------------------------
    def to_json(self) -> dict:
        params = {}
        for k, v in self.params:
            params[k] = v.to_json() if isinstance(v, TaylorSeries) else v
        return {"tag": self.tag, "params": params}

    @classmethod
    def from_json(cls, d: dict) -> "DominantSpec":
        tag = d["tag"]
        params = dict(d.get("params", {}))
        if tag == "custom":
            params["series"] = TaylorSeries.from_json(params["series"])
        elif tag in ("opendoor-a", "opendoor-b"):
            params["n"] = int(params["n"])
        return cls(tag, tuple(params.items()))


def _validate(tag, p):
    if tag == "sector" and not 0 < p["gamma"] <= 1:
        raise ValueError("sector needs 0 < gamma <= 1")
    if tag == "janowski":
        A, B = p["A"], p["B"]
        if not (-1 <= A <= 1 and -1 <= B <= 1) or A == B:
            raise ValueError("janowski needs A != B with A, B in [-1, 1]")
    if tag == "slit-a" and not 0 <= p["a"] <= 1:
        raise ValueError("slit-a needs 0 <= a <= 1")
    if tag in ("opendoor-a", "opendoor-b"):
        if p["n"] < 1 or p["alpha"] < 0 or p["beta"] <= 0:
            raise ValueError("open-door dominants need n >= 1, alpha >= 0, beta > 0")
    if tag == "custom" and not isinstance(p["series"], TaylorSeries):
        raise ValueError("custom dominant needs a TaylorSeries")


# --------------------------------------------------------------------------
# evaluation


def evaluate_dominant(h: DominantSpec, z):
    """Closed-form value of ``h`` at ``z`` (principal branches)."""
    z = np.asarray(z, dtype=complex)
    p = dict(h.params)
    t = h.tag
    with np.errstate(divide="ignore", invalid="ignore"):
        if t == "half-plane":
            return (1 + z) / (1 - z)
        if t == "sector":
            return np.exp(p["gamma"] * np.log((1 + z) / (1 - z)))
        if t == "exp":
            return np.exp(z)
        if t == "sqrt-shift":
            return np.sqrt(1 + z)
        if t == "janowski":
            return (1 + p["A"] * z) / (1 + p["B"] * z)
        if t == "sigmoid":
            return 2 / (1 + np.exp(-z))
        if t == "exp-linear":
            return 1 + z * np.exp(z)
        if t == "crescent":
            return z + np.sqrt(1 + z * z)
        if t == "slit-a":
            return (1 + p["a"] * z) / (1 - z)
        if t == "opendoor-a":
            n, al, be = p["n"], p["alpha"], p["beta"]
            return 1 + z + n * z / (be + al * (1 + z))
        if t == "opendoor-b":
            n, al, be = p["n"], p["alpha"], p["beta"]
            return (1 + z) / (1 - z) + 2 * n * z / ((1 - z) * ((al + be) + (al - be) * z))
        return evaluate(p["series"], z)


def dominant_derivative(h: DominantSpec, z):
    z = np.asarray(z, dtype=complex)
    p = dict(h.params)
    t = h.tag
    with np.errstate(divide="ignore", invalid="ignore"):
        if t == "half-plane":
            return 2 / (1 - z) ** 2
        if t == "sector":
            return p["gamma"] * evaluate_dominant(h, z) * 2 / (1 - z * z)
        if t == "exp":
            return np.exp(z)
        if t == "sqrt-shift":
            return 0.5 / np.sqrt(1 + z)
        if t == "janowski":
            return (p["A"] - p["B"]) / (1 + p["B"] * z) ** 2
        if t == "sigmoid":
            e = np.exp(-z)
            return 2 * e / (1 + e) ** 2
        if t == "exp-linear":
            return np.exp(z) * (1 + z)
        if t == "crescent":
            return 1 + z / np.sqrt(1 + z * z)
        if t == "slit-a":
            return (1 + p["a"]) / (1 - z) ** 2
        if t == "opendoor-a":
            n, al, be = p["n"], p["alpha"], p["beta"]
            return 1 + n * (al + be) / (be + al * (1 + z)) ** 2
        if t == "opendoor-b":
            n, al, be = p["n"], p["alpha"], p["beta"]
            c, d = al + be, al - be
            return 2 / (1 - z) ** 2 + 2 * n * (c + d * z * z) / ((1 - z) * (c + d * z)) ** 2
        return evaluate(derivative(p["series"]), z)


def opendoor_a_series(n, alpha, beta, order: int) -> TaylorSeries:
    """``1 + z + n z / (beta + alpha (1 + z))``; ``n`` may be any real."""
    z = TaylorSeries.variable(order)
    return 1 + z + n * z / TaylorSeries([beta + alpha, alpha], order)


def opendoor_b_series(n, alpha, beta, order: int) -> TaylorSeries:
    z = TaylorSeries.variable(order)
    hp = TaylorSeries(np.r_[1.0, np.full(order, 2.0)])
    den = TaylorSeries([1, -1], order) * TaylorSeries([alpha + beta, alpha - beta], order)
    return hp + 2 * n * z / den


@functools.lru_cache(maxsize=256)
def dominant_series(h: DominantSpec, order: int | None = None) -> TaylorSeries:
    """Taylor coefficients of ``h`` through ``order``."""
    N = get_config().order if order is None else order
    p = dict(h.params)
    t = h.tag
    z = TaylorSeries.variable(N)
    one = TaylorSeries.constant(1.0, N)
    if t == "half-plane":
        return TaylorSeries(np.r_[1.0, np.full(N, 2.0)])
    if t == "sector":
        return power_real(dominant_series(DominantSpec.half_plane(), N), p["gamma"])
    if t == "exp":
        return exponential(z)
    if t == "sqrt-shift":
        return power_real(one + z, 0.5)
    if t == "janowski":
        return (one + p["A"] * z) / (one + p["B"] * z)
    if t == "sigmoid":
        return divide(TaylorSeries.constant(2.0, N), one + exponential(-z))
    if t == "exp-linear":
        return one + z * exponential(z)
    if t == "crescent":
        return z + power_real(one + z * z, 0.5)
    if t == "slit-a":
        return (one + p["a"] * z) * TaylorSeries.geometric(1.0, N)
    if t == "opendoor-a":
        return opendoor_a_series(p["n"], p["alpha"], p["beta"], N)
    if t == "opendoor-b":
        return opendoor_b_series(p["n"], p["alpha"], p["beta"], N)
    return p["series"].with_order(N)


# --------------------------------------------------------------------------
# image membership


def membership_slack(h: DominantSpec, w):
    """Signed slack of the exact image predicate; positive inside ``h(D)``.

    Each slack is superharmonic in ``w`` so its minimum over an image of a
    closed disk is attained on the boundary circle.
    """
    if not h.has_exact_membership:
        raise NoExactPredicate(f"{h.tag} has no closed-form image predicate")
    w = np.asarray(w, dtype=complex)
    p = dict(h.params)
    with np.errstate(divide="ignore", invalid="ignore"):
        if h.tag == "half-plane":
            return w.real
        if h.tag == "sector":
            s = p["gamma"] * math.pi / 2 - np.abs(np.angle(w))
            return np.where(w == 0, 0.0, s)
        if h.tag == "exp":
            return 1 - np.abs(np.log(w))
        if h.tag == "sqrt-shift":
            return np.minimum(w.real, 1 - np.abs(w * w - 1))
        if h.tag == "janowski":
            r = np.abs((w - 1) / (p["A"] - p["B"] * w))
            return 1 - np.where(np.isnan(r), np.inf, r)
        # slit-a: Moebius image of the disk is the half-plane Re w > (1-a)/2
        return w.real - (1 - p["a"]) / 2


def contains(h: DominantSpec, w):
    return membership_slack(h, w) > 0


# --------------------------------------------------------------------------
# boundary curves


@dataclass(frozen=True)
class BoundaryCurve:
    radius: float
    thetas: np.ndarray
    points: np.ndarray
    closed: bool = True

    def __len__(self):
        return self.points.size

    @property
    def diameter(self) -> float:
        return float(max(np.ptp(self.points.real), np.ptp(self.points.imag)))

    def rows(self):
        return zip(self.thetas.tolist(), self.points.real.tolist(), self.points.imag.tolist())


def _refine_curve(fn, r, thetas, pts, sag_tol, max_points):
    for _ in range(24):
        nxt_t = np.r_[thetas[1:], thetas[0] + 2 * math.pi]
        nxt_p = np.roll(pts, -1)
        mid_t = 0.5 * (thetas + nxt_t)
        mid_p = fn(r * np.exp(1j * mid_t))
        gap = np.abs(nxt_p - pts)
        diam = max(np.ptp(pts.real), np.ptp(pts.imag))
        sag = np.abs(mid_p - 0.5 * (pts + nxt_p))
        need = (gap > 0.2 * diam) | (sag > sag_tol * np.maximum(1.0, np.abs(mid_p)))
        if not need.any() or pts.size + need.sum() > max_points:
            break
        n = pts.size
        order = np.argsort(np.r_[np.arange(n), np.nonzero(need)[0] + 0.5])
        thetas = np.r_[thetas, mid_t[need]][order]
        pts = np.r_[pts, mid_p[need]][order]
    return thetas, pts


@functools.lru_cache(maxsize=128)
def boundary_curve(h: DominantSpec, r: float, M: int = 256, sag_tol: float = 1e-6,
                   max_points: int = 1 << 15) -> BoundaryCurve:
    """Image of the circle ``|z| = r`` under ``h``, adaptively refined.

    Refinement inserts midpoints where consecutive points are further apart
    than a fifth of the curve diameter or where the chord strays from the
    curve by more than ``sag_tol`` (relative to the local modulus).
    """
    if not 0 < r < 1:
        raise ValueError("radius must lie in (0, 1)")
    if M < 64:
        raise ValueError("a boundary curve needs at least 64 points")
    fn = functools.partial(evaluate_dominant, h)
    thetas = 2 * math.pi * np.arange(M) / M - math.pi
    pts = fn(r * np.exp(1j * thetas))
    thetas, pts = _refine_curve(fn, r, thetas, pts, sag_tol, max_points)
    thetas.flags.writeable = False
    pts.flags.writeable = False
    return BoundaryCurve(r, thetas, pts)


# --------------------------------------------------------------------------
# geometric class predicates


@dataclass(frozen=True)
class GeometryResult:
    holds: bool
    margin: float
    witness: complex | None
    radii_used: tuple = field(default=())

    def __bool__(self):
        return self.holds


def _valued(f) -> ValuedSeries:
    if isinstance(f, ValuedSeries):
        return f
    return ValuedSeries.from_taylor(f)


def _padded(f, order):
    # series shorter than the minimum truncation are read as polynomials
    if isinstance(f, TaylorSeries) and f.order < MIN_ORDER:
        return f.with_order(order)
    if isinstance(f, ValuedSeries) and f.unit.order < MIN_ORDER:
        return ValuedSeries(f.exponent, f.unit.with_order(order))
    return f


def _require_valuation_one(f):
    v = _valued(f)
    if abs(complex(v.exponent) - 1) > 1e-12:
        raise ValuationMismatch(f"expected valuation 1, found {v.exponent}")
    return v


def polar_grid_min(series: Iterable[TaylorSeries], fn, cfg: Config | None = None,
                   radii=GEOMETRY_RADII, n_angles: int = GEOMETRY_ANGLES):
    """Minimise ``fn(z, *values)`` over a polar grid.

    Radii at which any series has a tail estimate above ``cfg.tail_tol`` are
    skipped. Returns ``(margin, witness, radii_used)``; the margin is ``nan``
    when no radius qualifies.
    """
    cfg = cfg or get_config()
    series = list(series)
    theta = 2 * math.pi * np.arange(n_angles) / n_angles
    best, where, used = math.inf, None, []
    for r in radii:
        if any(tail_estimate(s, r) > cfg.tail_tol for s in series):
            continue
        z = r * np.exp(1j * theta)
        vals = fn(z, *(evaluate(s, z) for s in series))
        vals = np.where(np.isnan(vals), -np.inf, vals)
        k = int(np.argmin(vals))
        used.append(r)
        if vals[k] < best:
            best, where = float(vals[k]), complex(z[k])
    if not used:
        return math.nan, None, ()
    return best, where, tuple(used)


def geometry_checks(f, kind: str, g=None, cfg: Config | None = None,
                    radii=GEOMETRY_RADII, n_angles: int = GEOMETRY_ANGLES) -> GeometryResult:
    """Grid test of a classical geometric property; returns the worst margin.

    kinds: ``caratheodory``, ``starlike``, ``convex``, ``typically_real``,
    ``close_to_convex`` (requires ``g``). Series shorter than the minimum
    truncation order are read as polynomials.
    """
    cfg = cfg or get_config()
    f = _padded(f, cfg.order)
    g = None if g is None else _padded(g, cfg.order)
    if kind == "caratheodory":
        s = f.to_taylor() if isinstance(f, ValuedSeries) else f
        res = polar_grid_min([s], lambda z, v: v.real, cfg, radii, n_angles)
    elif kind == "starlike":
        q = _require_valuation_one(f).log_derivative()
        res = polar_grid_min([q], lambda z, v: v.real, cfg, radii, n_angles)
    elif kind == "convex":
        s = f.to_taylor() if isinstance(f, ValuedSeries) else f
        fp = derivative(s)
        if abs(fp.coeffs[0]) <= 1e-12:
            raise ValuationMismatch("convexity needs f'(0) != 0")
        q = 1 + z_derivative(fp) / fp
        res = polar_grid_min([q], lambda z, v: v.real, cfg, radii, n_angles)
    elif kind == "typically_real":
        s = f.to_taylor() if isinstance(f, ValuedSeries) else f

        def ratio(z, v):
            out = v.imag / np.where(np.abs(z.imag) > 1e-9 * np.abs(z), z.imag, np.nan)
            return np.where(np.isnan(out), np.inf, out)

        res = polar_grid_min([s], ratio, cfg, radii, n_angles)
    elif kind == "close_to_convex":
        if g is None:
            raise ValueError("close_to_convex needs the comparison function g")
        fv = _require_valuation_one(f)
        gv = _require_valuation_one(g)
        q = (fv.derivative().times_power(1) / gv).to_taylor()
        res = polar_grid_min([q], lambda z, v: v.real, cfg, radii, n_angles)
    else:
        raise ValueError(f"unknown geometry kind {kind!r}")
    margin, where, used = res
    return GeometryResult(bool(margin > 0), margin, where, used)


def catalogue(n: int = 1, alpha: float = 0.5, beta: float = 1.0) -> list[DominantSpec]:
    """One representative of every non-custom variant."""
    return [
        DominantSpec.half_plane(),
        DominantSpec.sector(0.5),
        DominantSpec.exp(),
        DominantSpec.sqrt_shift(),
        DominantSpec.janowski(0.5, -0.5),
        DominantSpec.sigmoid(),
        DominantSpec.exp_linear(),
        DominantSpec.crescent(),
        DominantSpec.slit_a(0.5),
        DominantSpec.opendoor_a(n, alpha, beta),
        DominantSpec.opendoor_b(n, alpha, beta),
    ]
