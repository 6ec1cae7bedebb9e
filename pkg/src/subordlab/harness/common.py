"""Building blocks shared by the theorem cases."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..config import Config
from ..dominants import DominantSpec, dominant_series, polar_grid_min
from ..power_series import (
    SchwarzSeries,
    TaylorSeries,
    ValuedSeries,
    blaschke_schwarz,
    compose,
    evaluate,
    z_derivative,
)
from ..subordination import is_subordinate

SIGN_RADII = (0.5, 0.8, 0.9, 0.95, 0.99)
IDENTITY_TOL = 1e-9


@dataclass(frozen=True)
class Check:
    """Three-valued outcome of a hypothesis or conclusion."""

    holds: bool | None
    margin: float
    where: complex | None = None
    detail: dict = field(default_factory=dict)

    @property
    def label(self) -> str:
        return {True: "pass", False: "fail", None: "inconclusive"}[self.holds]


def ladder(margin: float, tol: float, where=None, **detail) -> Check:
    if margin is None or math.isnan(margin):
        return Check(None, math.nan, where, detail)
    if margin > tol:
        return Check(True, margin, where, detail)
    if margin < -tol:
        return Check(False, margin, where, detail)
    return Check(None, margin, where, detail)


def strict(margin: float, where=None, **detail) -> Check:
    """Hypothesis-style check: holds iff the margin is positive."""
    ok = margin is not None and not math.isnan(margin) and margin > 0
    return Check(bool(ok), margin, where, detail)


def all_of(*checks: Check) -> Check:
    """Conjunction: any failure fails, otherwise any inconclusive is inconclusive."""
    worst = min(checks, key=lambda c: (c.margin if not math.isnan(c.margin) else math.inf))
    detail = {}
    for c in checks:
        detail.update(c.detail)
    if any(c.holds is False for c in checks):
        bad = next(c for c in checks if c.holds is False)
        return Check(False, bad.margin, bad.where, detail)
    if any(c.holds is None for c in checks):
        return Check(None, worst.margin, worst.where, detail)
    return Check(True, worst.margin, worst.where, detail)


class Draw:
    """Reads successive coordinates of a point of the unit cube."""

    def __init__(self, u):
        self.u = np.asarray(u, dtype=float)
        self.i = 0

    def unit(self) -> float:
        if self.i >= self.u.size:
            raise IndexError("generator consumed more coordinates than declared")
        v = float(self.u[self.i])
        self.i += 1
        return v

    def uniform(self, lo, hi) -> float:
        return lo + (hi - lo) * self.unit()

    def log_uniform(self, lo, hi) -> float:
        return lo * (hi / lo) ** self.unit()

    def choice(self, items):
        return items[min(int(self.unit() * len(items)), len(items) - 1)]

    def integer(self, lo, hi) -> int:
        return lo + min(int(self.unit() * (hi - lo + 1)), hi - lo)

    def disk(self, radius) -> complex:
        r = radius * math.sqrt(self.unit())
        return complex(r * np.exp(2j * math.pi * self.unit()))


def draw_schwarz(d: Draw, cfg: Config, s=(0.2, 0.85), m_max=2, a_max=0.6,
                 valuation=1, real=False) -> SchwarzSeries:
    """Blaschke-form Schwarz function; always consumes ``2 + 2*m_max + 1`` draws."""
    scale = d.uniform(*s)
    m = d.integer(0, m_max)
    zeros = [d.disk(a_max) for _ in range(m_max)][:m]
    turn = d.uniform(-math.pi, math.pi)
    if real:
        zeros = [complex(a.real) for a in zeros]
        turn = 0.0
    w = blaschke_schwarz(scale, zeros, cfg.order, valuation)
    if turn:
        w = SchwarzSeries(w.series * complex(np.exp(1j * turn)), w.margin)
    return w


def subordinate(h: DominantSpec, w: SchwarzSeries) -> TaylorSeries:
    return compose(dominant_series(h, w.order), w)


def perturbation(d: Draw, cfg: Config, eps) -> TaylorSeries:
    """``1 + eps * w(z)`` for a random Schwarz function ``w``."""
    w = draw_schwarz(d, cfg, s=(0.5, 0.95))
    return 1 + eps * w.series


def typically_real(d: Draw, cfg: Config, c_max=1.0, terms=2) -> TaylorSeries:
    """``1 + c sum_j w_j rho z / (1 - 2 t_j rho z + rho^2 z^2)`` with ``c, rho > 0``."""
    N = cfg.order
    c = d.uniform(0.05, c_max)
    rho = d.uniform(0.3, 0.85)
    weights = np.array([d.unit() + 0.05 for _ in range(terms)])
    weights /= weights.sum()
    out = TaylorSeries.constant(1.0, N)
    for wj in weights:
        t = d.uniform(-1, 1)
        den = TaylorSeries([1.0, -2 * t * rho, rho * rho], N)
        out = out + c * float(wj) * TaylorSeries([0.0, rho], N) / den
    return out


def radius_estimate(f: TaylorSeries) -> float:
    """Radius of convergence from the decay of the upper half of the coefficients."""
    c = np.abs(f.coeffs)
    N = f.order
    k = np.arange(N // 2, N + 1)
    v = c[k]
    live = v > 1e-13 * max(1.0, c.max())
    if live.sum() < 4:
        return math.inf
    slope = np.polyfit(k[live], np.log(v[live]), 1)[0]
    return float(math.exp(-slope))


def analytic_in_disk(f: TaylorSeries) -> Check:
    R = radius_estimate(f)
    return strict(R - 1.0, radius=R)


def sub_check(p, h: DominantSpec, cfg: Config, path: str = "auto") -> Check:
    v = is_subordinate(p, h, cfg, path)
    return Check(v.holds, v.margin, v.witness, {"skipped_radii": list(v.skipped_radii)})


def sign_check(series, fn, cfg: Config, radii=SIGN_RADII) -> Check:
    """Tolerance-laddered grid minimum of ``fn(z, *values)``."""
    margin, where, used = polar_grid_min(series, fn, cfg, radii, cfg.samples)
    return ladder(margin, cfg.tolerance, where, radii=list(used))


def grid_sup(f: TaylorSeries, fn, cfg: Config, radius=0.999) -> float:
    z = radius * np.exp(2j * math.pi * np.arange(cfg.samples) / cfg.samples)
    return float(np.max(fn(evaluate(f, z))))


def identity_check(lhs: TaylorSeries, rhs: TaylorSeries, name: str, upto: int | None = None) -> Check:
    """Coefficientwise identity through order ``N - 2``, relative to the coefficient scale."""
    n = min(lhs.order, rhs.order) - 2 if upto is None else upto
    a, b = lhs.coeffs[: n + 1], rhs.coeffs[: n + 1]
    scale = max(1.0, float(np.max(np.abs(b))))
    gap = float(np.max(np.abs(a - b))) / scale
    if gap < IDENTITY_TOL:
        # a satisfied identity does not bound the margin of the surrounding conclusion
        return Check(True, math.inf, None, {name: gap})
    return Check(False, -gap, None, {name: gap})


def f_from_logderivative(q: TaylorSeries) -> ValuedSeries:
    """``f = z exp(integral (q-1)/t)`` so that ``z f'/f = q``."""
    from ..integral_ops import g_from_Q

    return g_from_Q(q)


def theta_operator(f: ValuedSeries, alpha, beta) -> TaylorSeries:
    """``f/(z f') - (z f''/f' + 1 - z f'/f) / (beta z f'/f + alpha)``."""
    q = f.log_derivative()
    fp = f.derivative().to_taylor()
    zfpp = z_derivative(fp) / fp
    return 1 / q - (zfpp + 1 - q) / (beta * q + alpha)


def fz_operator(f: ValuedSeries, alpha, beta) -> TaylorSeries:
    """``f/z + (z f'/f - 1) / (beta z/f + alpha)``."""
    u = f.unit
    return u + (f.log_derivative() - 1) / (beta / u + alpha)
