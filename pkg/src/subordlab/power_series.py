"""Truncated Taylor series with complex coefficients.

A :class:`TaylorSeries` of order ``N`` stores ``c_0 .. c_N``; coefficients of
higher powers are unknown, so every binary operation truncates to the smaller
order of its operands. :class:`ValuedSeries` carries a factor ``z**rho`` in
front of a unit series and is what the integral operators work with.

All objects are immutable; every function here is pure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import get_config
from .errors import LogarithmicTerm, NearZeroConstantTerm, SingularAtOrigin

C0_EPS = 1e-12
SCHWARZ_CHECK_SAMPLES = 4096


class TaylorSeries:
    """Coefficients ``c_0 .. c_N`` of an analytic germ at the origin."""

    __slots__ = ("_c",)

    def __init__(self, coeffs, order: int | None = None):
        c = np.array(coeffs, dtype=complex).ravel()
        if c.size == 0:
            raise ValueError("a series needs at least one coefficient")
        if order is not None:
            if order < 0:
                raise ValueError("order must be non-negative")
            if c.size > order + 1:
                c = c[: order + 1]
            elif c.size < order + 1:
                c = np.concatenate([c, np.zeros(order + 1 - c.size, dtype=complex)])
        if not np.all(np.isfinite(c)):
            raise ValueError("series coefficients must be finite")
        c.flags.writeable = False
        self._c = c

    # construction helpers -------------------------------------------------
    @classmethod
    def constant(cls, value: complex, order: int | None = None) -> "TaylorSeries":
        order = get_config().order if order is None else order
        return cls([value], order)

    @classmethod
    def variable(cls, order: int | None = None) -> "TaylorSeries":
        """The series of ``z``."""
        order = get_config().order if order is None else order
        return cls([0, 1], max(order, 1))

    @classmethod
    def geometric(cls, ratio: complex, order: int | None = None) -> "TaylorSeries":
        """Series of ``1/(1 - ratio*z)``."""
        order = get_config().order if order is None else order
        return cls(np.asarray(ratio, dtype=complex) ** np.arange(order + 1))

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def order(self) -> int:
        return self._c.size - 1

    def __getitem__(self, k):
        return self._c[k]

    def __len__(self):
        return self._c.size

    def with_order(self, order: int) -> "TaylorSeries":
        """Truncate, or pad with zeros (treating the series as a polynomial)."""
        return TaylorSeries(self._c, order)

    def __call__(self, z):
        return evaluate(self, z)

    def __repr__(self):
        head = ", ".join(f"{c:.6g}" for c in self._c[:6])
        more = ", ..." if self._c.size > 6 else ""
        return f"TaylorSeries([{head}{more}], order={self.order})"

    # arithmetic --------------------------------------------------------------
    def __neg__(self):
        return TaylorSeries(-self._c)

    def __add__(self, other):
        if isinstance(other, TaylorSeries):
            return linear_combine(1, self, 1, other)
        if np.isscalar(other):
            c = self._c.copy()
            c[0] += other
            return TaylorSeries(c)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, TaylorSeries):
            return linear_combine(1, self, -1, other)
        if np.isscalar(other):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TaylorSeries):
            return multiply(self, other)
        if np.isscalar(other):
            return TaylorSeries(self._c * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TaylorSeries):
            return divide(self, other)
        if np.isscalar(other):
            return TaylorSeries(self._c / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if np.isscalar(other):
            return divide(TaylorSeries.constant(other, self.order), self)
        return NotImplemented

    def allclose(self, other: "TaylorSeries", atol: float = 1e-12) -> bool:
        n = min(self.order, other.order) + 1
        return bool(np.all(np.abs(self._c[:n] - other._c[:n]) <= atol))

    # serialization ------------------------------------------------------------
    def to_json(self) -> dict:
        return {"order": self.order, "re": self._c.real.tolist(), "im": self._c.imag.tolist()}

    @classmethod
    def from_json(cls, d: dict) -> "TaylorSeries":
        re = np.asarray(d["re"], dtype=float)
        im = np.asarray(d.get("im", np.zeros_like(re)), dtype=float)
        if re.shape != im.shape:
            raise ValueError("re and im must have equal length")
        return cls(re + 1j * im, d.get("order"))


def _as_series(f, order: int) -> TaylorSeries:
    if isinstance(f, TaylorSeries):
        return f
    return TaylorSeries(f, order)


def linear_combine(a: complex, f: TaylorSeries, b: complex, g: TaylorSeries) -> TaylorSeries:
    n = min(f.order, g.order) + 1
    return TaylorSeries(a * f.coeffs[:n] + b * g.coeffs[:n])


def multiply(f: TaylorSeries, g: TaylorSeries) -> TaylorSeries:
    n = min(f.order, g.order) + 1
    return TaylorSeries(np.convolve(f.coeffs[:n], g.coeffs[:n])[:n])


def divide(f: TaylorSeries, g: TaylorSeries) -> TaylorSeries:
    """Quotient ``f/g`` by forward substitution on ``h*g = f``."""
    n = min(f.order, g.order) + 1
    a, b = f.coeffs[:n], g.coeffs[:n]
    if abs(b[0]) <= C0_EPS:
        raise NearZeroConstantTerm(f"divisor has |c0| = {abs(b[0]):.3g}")
    h = np.zeros(n, dtype=complex)
    for k in range(n):
        h[k] = (a[k] - np.dot(b[1 : k + 1], h[k - 1 :: -1][:k])) / b[0]
    return TaylorSeries(h)


def exponential(f: TaylorSeries) -> TaylorSeries:
    # k E_k = sum_{j=1..k} j f_j E_{k-j}
    c = f.coeffs
    n = c.size
    jf = np.arange(n) * c
    e = np.zeros(n, dtype=complex)
    e[0] = np.exp(c[0])
    for k in range(1, n):
        e[k] = np.dot(jf[1 : k + 1], e[k - 1 :: -1][:k]) / k
    return TaylorSeries(e)


def logarithm(f: TaylorSeries) -> TaylorSeries:
    """Principal logarithm; requires a genuine constant term."""
    c = f.coeffs
    n = c.size
    if abs(c[0]) <= C0_EPS:
        raise NearZeroConstantTerm("logarithm needs |c0| > 1e-12")
    out = np.zeros(n, dtype=complex)
    out[0] = np.log(c[0])
    jl = np.zeros(n, dtype=complex)  # j * L_j
    for k in range(1, n):
        s = np.dot(jl[1:k], c[k - 1 : 0 : -1]) if k > 1 else 0.0
        jl[k] = k * c[k] - s
        jl[k] /= c[0]
        out[k] = jl[k] / k
    return TaylorSeries(out)


def power_real(f: TaylorSeries, s: complex) -> TaylorSeries:
    """Principal ``f**s`` from ``f P' = s f' P``."""
    c = f.coeffs
    n = c.size
    if abs(c[0]) <= C0_EPS:
        raise NearZeroConstantTerm("power needs |c0| > 1e-12")
    p = np.zeros(n, dtype=complex)
    p[0] = np.exp(s * np.log(c[0]))
    for k in range(1, n):
        j = np.arange(1, k + 1)
        p[k] = np.dot((s * j - (k - j)) * c[1 : k + 1], p[k - 1 :: -1][:k]) / (k * c[0])
    return TaylorSeries(p)


def z_derivative(f: TaylorSeries) -> TaylorSeries:
    """The map ``f -> z f'``."""
    return TaylorSeries(np.arange(f.order + 1) * f.coeffs)


def derivative(f: TaylorSeries) -> TaylorSeries:
    """Ordinary derivative; the result has order one less."""
    if f.order == 0:
        return TaylorSeries([0])
    return TaylorSeries(np.arange(1, f.order + 1) * f.coeffs[1:])


def integrate_log(f: TaylorSeries) -> TaylorSeries:
    """``integral_0^z f(t)/t dt`` for ``f`` vanishing at the origin."""
    c = f.coeffs
    if abs(c[0]) >= 1e-10:
        raise SingularAtOrigin(f"integrand f/t has a pole: |c0| = {abs(c[0]):.3g}")
    out = np.zeros_like(c)
    out[1:] = c[1:] / np.arange(1, c.size)
    return TaylorSeries(out)


def evaluate(f: TaylorSeries, z):
    """Horner evaluation; accepts scalars or arrays."""
    return np.polyval(f.coeffs[::-1], z)


def boundary_profile(f: TaylorSeries, r: float, M: int) -> np.ndarray:
    if M < 8:
        raise ValueError("boundary_profile needs M >= 8")
    return evaluate(f, r * np.exp(2j * np.pi * np.arange(M) / M))


def tail_estimate(f: TaylorSeries, r: float) -> float:
    """Heuristic size of the discarded tail at radius ``r``.

    Uses the larger of the last two coefficients so that even or odd series
    are not reported as exact.
    """
    c = np.abs(f.coeffs)
    last = c[-2:].max() if c.size > 1 else c[-1]
    return float(last * r ** f.order / (1.0 - r))


def compose(h: TaylorSeries, w) -> TaylorSeries:
    """Coefficients of ``h(w(z))`` for ``w(0) = 0``."""
    ws = w.series if isinstance(w, SchwarzSeries) else w
    if abs(ws.coeffs[0]) > C0_EPS:
        raise ValueError("inner series must vanish at the origin")
    n = min(h.order, ws.order) + 1
    hc, wc = h.coeffs[:n], ws.coeffs[:n]
    acc = np.zeros(n, dtype=complex)
    acc[0] = hc[n - 1]
    for k in range(n - 2, -1, -1):
        acc = np.convolve(acc, wc)[:n]
        acc[0] += hc[k]
    return TaylorSeries(acc)


# --------------------------------------------------------------------------
# valued series


def _norm_exponent(x) -> float | complex:
    x = complex(x)
    if x.imag == 0.0:
        return x.real
    return x


@dataclass(frozen=True)
class ValuedSeries:
    """``z**exponent * unit(z)`` with ``unit(0) != 0``.

    The exponent is real for every admissible instance; complex exponents
    arise only when callers pass complex operator parameters.
    """

    exponent: float | complex
    unit: TaylorSeries

    def __post_init__(self):
        object.__setattr__(self, "exponent", _norm_exponent(self.exponent))
        c = np.abs(self.unit.coeffs)
        if not c[0] > 1e-12 * c.max():
            raise NearZeroConstantTerm("unit of a valued series must have a nonzero constant term")

    @classmethod
    def from_taylor(cls, f: TaylorSeries, rel_tol: float = 1e-14) -> "ValuedSeries":
        """Split off the valuation of ``f``; the unit loses that many orders."""
        c = np.abs(f.coeffs)
        nz = np.nonzero(c > rel_tol * c.max())[0]
        if nz.size == 0:
            raise SingularAtOrigin("cannot take the valuation of the zero series")
        v = int(nz[0])
        return cls(v, TaylorSeries(f.coeffs[v:]))

    @property
    def order(self) -> int:
        return self.unit.order

    @property
    def is_real(self) -> bool:
        return isinstance(self.exponent, float)

    def to_taylor(self, tol: float = 1e-9) -> TaylorSeries:
        rho = complex(self.exponent)
        k = round(rho.real)
        if abs(rho - k) > tol or k < 0:
            raise ValueError(f"exponent {self.exponent} is not a non-negative integer")
        return TaylorSeries(np.concatenate([np.zeros(k, dtype=complex), self.unit.coeffs]))

    def __mul__(self, other):
        if isinstance(other, ValuedSeries):
            return ValuedSeries(self.exponent + other.exponent, self.unit * other.unit)
        if isinstance(other, TaylorSeries):
            return self * ValuedSeries.from_taylor(other)
        if np.isscalar(other):
            return ValuedSeries(self.exponent, self.unit * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ValuedSeries):
            return ValuedSeries(self.exponent - other.exponent, self.unit / other.unit)
        if isinstance(other, TaylorSeries):
            return self / ValuedSeries.from_taylor(other)
        if np.isscalar(other):
            return ValuedSeries(self.exponent, self.unit / other)
        return NotImplemented

    def __pow__(self, s):
        return ValuedSeries(self.exponent * s, power_real(self.unit, s))

    def times_power(self, rho) -> "ValuedSeries":
        """Multiply by ``z**rho``."""
        return ValuedSeries(self.exponent + rho, self.unit)

    def log_derivative(self) -> TaylorSeries:
        """``z v'(z) / v(z)``."""
        return z_derivative(self.unit) / self.unit + self.exponent

    def derivative(self) -> "ValuedSeries":
        """``v'`` as ``z**(rho-1) * (rho*u + z*u')``."""
        return ValuedSeries(self.exponent - 1, self.unit * self.exponent + z_derivative(self.unit))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return np.exp(self.exponent * np.log(z)) * evaluate(self.unit, z)

    def to_json(self) -> dict:
        d = self.unit.to_json()
        e = complex(self.exponent)
        d["exponent"] = e.real
        if e.imag:
            d["exponent_im"] = e.imag
        return d

    @classmethod
    def from_json(cls, d: dict) -> "ValuedSeries":
        e = complex(d["exponent"], d.get("exponent_im", 0.0))
        return cls(e, TaylorSeries.from_json(d))


def integrate_valued(v: ValuedSeries) -> ValuedSeries:
    """``integral_0^z v(t) dt`` computed termwise."""
    c = v.unit.coeffs
    d = v.exponent + np.arange(1, c.size + 1)
    live = np.abs(c) > 1e-14 * np.abs(c).max()
    bad = live & (np.real(d) <= 1e-9)
    if np.any(bad):
        k = int(np.nonzero(bad)[0][0])
        raise LogarithmicTerm(f"exponent {v.exponent} + {k} + 1 leaves a non-integrable term")
    return ValuedSeries(v.exponent + 1, TaylorSeries(c / d))


# --------------------------------------------------------------------------
# Schwarz functions


@dataclass(frozen=True)
class SchwarzSeries:
    """Series of a self-map of the disk fixing 0, with certified margin.

    ``sup_{|z|=1} |series(z)| <= 1 - margin``.
    """

    series: TaylorSeries
    margin: float

    def __post_init__(self):
        if abs(self.series.coeffs[0]) > 1e-15:
            raise ValueError("a Schwarz function must vanish at the origin")
        if not 0 < self.margin <= 1:
            raise ValueError(f"margin must lie in (0, 1], got {self.margin}")
        peak = np.abs(boundary_profile(self.series, 1.0, SCHWARZ_CHECK_SAMPLES)).max()
        if peak > 1 - self.margin + 1e-10:
            raise ValueError(f"boundary modulus {peak:.12g} exceeds 1 - margin")

    @property
    def order(self) -> int:
        return self.series.order

    def __call__(self, z):
        return evaluate(self.series, z)

    def to_json(self) -> dict:
        d = self.series.to_json()
        d["margin"] = self.margin
        return d


def _blaschke_majorant_tail(zeros: Sequence[complex], n: int) -> float:
    """Bound on sum_{k>n} |b_k| for the Blaschke product with these zeros."""
    maj = np.zeros(n + 1)
    maj[0] = 1.0
    total = 1.0
    for a in zeros:
        r = abs(a)
        m = np.empty(n + 1)
        m[0] = r
        m[1:] = (1 - r * r) * r ** np.arange(n)
        maj = np.convolve(maj, m)[: n + 1]
        total *= 1 + 2 * r
    return max(0.0, total - maj.sum())


def blaschke_schwarz(
    scale: float,
    zeros: Sequence[complex] = (),
    order: int | None = None,
    valuation: int = 1,
) -> SchwarzSeries:
    """``scale * z**valuation * prod (z - a)/(1 - conj(a) z)`` as a series.

    Finite Blaschke products have unit modulus on the circle, so the margin
    is ``1 - scale`` up to a rigorous bound on the truncated tail.
    """
    order = get_config().order if order is None else order
    if not 0 <= scale <= 0.95:
        raise ValueError("scale must lie in [0, 0.95]")
    if len(zeros) > 3 or any(abs(a) > 0.8 for a in zeros):
        raise ValueError("at most three zeros, each with |a| <= 0.8")
    if valuation < 1 or valuation > order:
        raise ValueError("valuation must lie in [1, order]")
    n = order - valuation
    b = TaylorSeries([1.0], n)
    for a in zeros:
        a = complex(a)
        factor = TaylorSeries(np.conj(a) ** np.arange(n + 1)) * TaylorSeries([-a, 1.0], n)
        b = b * factor
    c = np.concatenate([np.zeros(valuation, dtype=complex), scale * b.coeffs])
    tail = _blaschke_majorant_tail(zeros, n)
    margin = 1.0 - scale * (1.0 + tail)
    if margin <= 0:
        raise ValueError("truncation tail leaves no margin; raise the order")
    return SchwarzSeries(TaylorSeries(c), min(1.0, margin))


def schwarz_sample(seed, m: int, s_max: float, order: int | None = None,
                   a_max: float = 0.8, valuation: int = 1) -> SchwarzSeries:
    """Deterministic Blaschke-form Schwarz function with scale ``s_max``.

    ``m`` zeros are drawn uniformly (by area) from ``|a| <= a_max``.
    """
    if not 0 <= m <= 3:
        raise ValueError("m must lie in [0, 3]")
    if not 0 <= s_max <= 0.95:
        raise ValueError("s_max must lie in [0, 0.95]")
    rng = np.random.default_rng(seed)
    radii = a_max * np.sqrt(rng.uniform(size=m))
    angles = rng.uniform(0, 2 * math.pi, size=m)
    zeros = [complex(r * np.exp(1j * t)) for r, t in zip(radii, angles)]
    return blaschke_schwarz(s_max, zeros, order, valuation)
