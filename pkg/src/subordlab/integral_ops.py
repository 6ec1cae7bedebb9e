"""Bernardi-type integral operators computed on valued series.

Every integral is taken termwise, so results are exact up to truncation.
Exponents are tracked explicitly and asserted at each stage.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import Config, get_config
from .dominants import DominantSpec
from .errors import HypothesisFailed, ValuationMismatch
from .power_series import (
    TaylorSeries,
    ValuedSeries,
    exponential,
    integrate_log,
    integrate_valued,
    z_derivative,
)

EXPONENT_TOL = 1e-9


@dataclass(frozen=True)
class OperatorParams:
    """Parameters shared by the integral operators.

    ``lam, eta, gamma, delta`` only matter for the existence operator and
    must satisfy ``lam + delta = eta + gamma = 1``; ``sigma`` only matters
    for the two-function operator.
    """

    alpha: complex = 0.0
    beta: complex = 1.0
    lam: complex = 1.0
    eta: complex = 1.0
    gamma: complex = 0.0
    delta: complex = 0.0
    sigma: complex = 0.0

    def __post_init__(self):
        if abs(self.beta) <= 1e-12:
            raise ValueError("beta must be nonzero")
        if abs(self.lam + self.delta - 1) >= 1e-12 or abs(self.eta + self.gamma - 1) >= 1e-12:
            raise ValueError("need lam + delta = eta + gamma = 1")
        if abs(self.eta) <= 1e-12:
            raise ValueError("eta must be nonzero")

    @property
    def real_nonnegative(self) -> bool:
        a, b = complex(self.alpha), complex(self.beta)
        return a.imag == 0 and b.imag == 0 and a.real >= 0 and b.real > 0

    def to_json(self) -> dict:
        out = {}
        for k in ("alpha", "beta", "lam", "eta", "gamma", "delta", "sigma"):
            v = complex(getattr(self, k))
            out[k] = v.real if v.imag == 0 else [v.real, v.imag]
        return out

    @classmethod
    def from_json(cls, d: dict) -> "OperatorParams":
        kw = {k: complex(*v) if isinstance(v, list) else v for k, v in d.items()}
        return cls(**kw)


def _valued(f) -> ValuedSeries:
    return f if isinstance(f, ValuedSeries) else ValuedSeries.from_taylor(f)


def _unit_series(f, name: str) -> TaylorSeries:
    """A series with value 1 at the origin (``H[1, n]`` normalisation)."""
    s = f.to_taylor() if isinstance(f, ValuedSeries) else f
    if abs(s.coeffs[0] - 1) > 1e-10:
        raise ValuationMismatch(f"{name} must equal 1 at the origin")
    return s


def _normalized(f, name: str) -> ValuedSeries:
    """``z + ...``: valuation one and unit constant one."""
    v = _valued(f)
    if abs(complex(v.exponent) - 1) > 1e-12 or abs(v.unit.coeffs[0] - 1) > 1e-10:
        raise ValuationMismatch(f"{name} must have the form z + a2 z^2 + ...")
    return v


def _expect_exponent(v: ValuedSeries, rho, stage: str) -> ValuedSeries:
    if abs(complex(v.exponent) - complex(rho)) > EXPONENT_TOL:
        raise ValuationMismatch(f"{stage}: exponent {v.exponent}, expected {rho}")
    return ValuedSeries(rho, v.unit)


def _finish(inner: ValuedSeries, power, stage: str) -> ValuedSeries:
    F = inner ** power
    F = _expect_exponent(F, 1, stage)
    if abs(F.unit.coeffs[0] - 1) > 1e-8:
        raise ValuationMismatch(f"{stage}: result is not normalised, F'(0) = {F.unit.coeffs[0]}")
    return F


def g_from_Q(Q: TaylorSeries) -> ValuedSeries:
    """``g = z exp(integral_0^z (Q(t) - 1)/t dt)``, so that ``z g'/g = Q``."""
    return ValuedSeries(1, exponential(integrate_log(Q - 1)))


def _gate(alpha, beta, enforce: bool):
    if not enforce:
        return
    a, b = complex(alpha), complex(beta)
    if a.imag != 0 or b.imag != 0:
        raise ValueError("complex alpha, beta need enforce_gate=False")
    if a.real + b.real <= 0:
        raise ValueError("the operator needs alpha + beta > 0")


def bernardi_general(f, g, params: OperatorParams, enforce_gate: bool = True) -> ValuedSeries:
    """``((alpha+beta) g^-alpha integral g' g^(alpha-1) f^beta dt)^(1/beta)``.

    Complex ``alpha, beta`` are accepted when ``enforce_gate`` is False.
    """
    a, b = params.alpha, params.beta
    _gate(a, b, enforce_gate)
    fv, gv = _normalized(f, "f"), _normalized(g, "g")
    integrand = gv.derivative() * gv ** (a - 1) * fv ** b
    inner = integrate_valued(_expect_exponent(integrand, a + b - 1, "integrand"))
    inner = (a + b) * inner / gv ** a
    return _finish(_expect_exponent(inner, b, "inner"), 1 / b, "bernardi_general")


def bernardi_power(f, params: OperatorParams) -> ValuedSeries:
    """``((alpha+beta) f^-alpha integral f^(alpha-1) f' t^beta dt)^(1/beta)``."""
    a, b = params.alpha, params.beta
    _gate(a, b, True)
    fv = _normalized(f, "f")
    integrand = (fv ** (a - 1) * fv.derivative()).times_power(b)
    inner = integrate_valued(_expect_exponent(integrand, a + b - 1, "integrand"))
    inner = (a + b) * inner / fv ** a
    return _finish(_expect_exponent(inner, b, "inner"), 1 / b, "bernardi_power")


def existence_Q(g, varphi, params: OperatorParams) -> TaylorSeries:
    """``lam z g'/g + z varphi'/varphi + delta``."""
    gv = _normalized(g, "g")
    vp = _unit_series(varphi, "varphi")
    return params.lam * gv.log_derivative() + z_derivative(vp) / vp + params.delta


def existence_operator(g, varphi, phi, params: OperatorParams,
                       cfg: Config | None = None) -> ValuedSeries:
    """Integral operator of the existence theorem.

    The hypothesis ``Q < (1+z)/(1-z)`` is checked numerically first and a
    failure raises :class:`HypothesisFailed`.
    """
    from .subordination import is_subordinate

    a, b = params.alpha, params.beta
    if not params.real_nonnegative:
        raise ValueError("the existence operator needs real alpha >= 0 and beta > 0")
    gv = _normalized(g, "g")
    vp = _unit_series(varphi, "varphi")
    ph = _unit_series(phi, "phi")
    Q = existence_Q(gv, vp, params)
    verdict = is_subordinate(Q, DominantSpec.half_plane(), cfg or get_config())
    if verdict.holds is not True:
        raise HypothesisFailed(f"Q is not subordinate to (1+z)/(1-z): {verdict.label}, "
                               f"margin {verdict.margin:.3g}")
    lam, delta, gamma = params.lam, params.delta, params.gamma
    vpv, phv = ValuedSeries(0, vp), ValuedSeries(0, ph)
    weight = gv ** (lam * a) * vpv ** a
    integrand = (weight * Q).times_power(b + delta * a - 1)
    inner = integrate_valued(_expect_exponent(integrand, a + b - 1, "integrand"))
    inner = (a + b) * inner / (phv ** b * weight).times_power(delta * a + b * gamma)
    inner = _expect_exponent(inner, params.eta * b, "inner")
    return _finish(inner, 1 / (params.eta * b), "existence_operator")


def existence_quotient(F, g, varphi, phi, params: OperatorParams) -> TaylorSeries:
    """``(eta zF'/F + z phi'/phi + gamma) / Q``, the concluded Caratheodory function."""
    ph = _unit_series(phi, "phi")
    num = params.eta * _valued(F).log_derivative() + z_derivative(ph) / ph + params.gamma
    return num / existence_Q(g, varphi, params)


def existence_p(g, varphi, params: OperatorParams) -> TaylorSeries:
    """Closed-form solution of ``p Q + z p'/(beta p + alpha) = 1`` for the existence ``Q``."""
    a, b = params.alpha, params.beta
    gv = _normalized(g, "g")
    vpv = ValuedSeries(0, _unit_series(varphi, "varphi"))
    Q = existence_Q(gv, vpv.unit, params)
    weight = gv ** (params.lam * a) * vpv ** a
    integral = integrate_valued((weight * Q).times_power(b + params.delta * a - 1))
    ratio = weight.times_power(b + params.delta * a) / integral
    return _expect_exponent(ratio, 0, "p").to_taylor() / b - a / b


def two_function_operator(f, g, phi, params: OperatorParams) -> ValuedSeries:
    """``((beta+alpha) z^-alpha phi^-1 integral f^beta g^sigma t^(alpha-sigma-1) dt)^(1/beta)``."""
    a, b, s = params.alpha, params.beta, params.sigma
    fv, gv = _normalized(f, "f"), _normalized(g, "g")
    phv = ValuedSeries(0, _unit_series(phi, "phi"))
    integrand = (fv ** b * gv ** s).times_power(a - s - 1)
    inner = integrate_valued(_expect_exponent(integrand, a + b - 1, "integrand"))
    inner = ((b + a) * inner / phv).times_power(-a)
    return _finish(_expect_exponent(inner, b, "inner"), 1 / b, "two_function_operator")


def two_function_p(f, g, params: OperatorParams) -> TaylorSeries:
    """``(1/beta) f^beta g^sigma z^(alpha-sigma) / integral(...) - alpha/beta``."""
    a, b, s = params.alpha, params.beta, params.sigma
    fv, gv = _normalized(f, "f"), _normalized(g, "g")
    top = (fv ** b * gv ** s).times_power(a - s)
    integral = integrate_valued(top.times_power(-1))
    return _expect_exponent(top / integral, 0, "p").to_taylor() / b - a / b


def two_function_rhs(f, g, params: OperatorParams) -> TaylorSeries:
    """``z f'/f + (sigma/beta)(z g'/g - 1)``."""
    fv, gv = _normalized(f, "f"), _normalized(g, "g")
    return fv.log_derivative() + (params.sigma / params.beta) * (gv.log_derivative() - 1)


def classical_residual(p: TaylorSeries, rhs: TaylorSeries, alpha, beta, upto: int | None = None) -> float:
    """Max coefficient gap of ``p + z p'/(beta p + alpha) - rhs``."""
    lhs = p + z_derivative(p) / (beta * p + alpha)
    n = min(lhs.order, rhs.order) if upto is None else upto
    return float(np.max(np.abs(lhs.coeffs[: n + 1] - rhs.coeffs[: n + 1])))
