"""Generalized Briot-Bouquet operator, its solvers and hypothesis checkers."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import Config, get_config
from .dominants import DominantSpec, dominant_derivative, evaluate_dominant
from .errors import (
    DegenerateAngle,
    DenominatorVanishes,
    ResonantOrder,
    UnknownCase,
)
from .integral_ops import g_from_Q
from .power_series import TaylorSeries, ValuedSeries, evaluate, integrate_valued, tail_estimate, z_derivative

E = math.e
SQRT2 = math.sqrt(2.0)

# bounds of max|phi| on the circle for the phi-list corollary, items (i)-(v)
PHI_CONSTANTS = {
    "phi-i": E,
    "phi-ii": SQRT2,
    "phi-iii": 2 * E / (1 + E),
    "phi-iv": 1 + E,
    "phi-v": 1 + SQRT2,
}


@dataclass(frozen=True)
class BBParams:
    alpha: complex = 0.0
    beta: complex = 1.0
    n: int = 1

    def __post_init__(self):
        if abs(self.beta) <= 1e-12:
            raise ValueError("beta must be nonzero")
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        object.__setattr__(self, "alpha", _plain(self.alpha))
        object.__setattr__(self, "beta", _plain(self.beta))

    @property
    def real_nonnegative(self) -> bool:
        a, b = complex(self.alpha), complex(self.beta)
        return a.imag == 0 and b.imag == 0 and a.real >= 0 and b.real > 0

    def to_json(self) -> dict:
        def enc(v):
            v = complex(v)
            return v.real if v.imag == 0 else [v.real, v.imag]

        return {"alpha": enc(self.alpha), "beta": enc(self.beta), "n": self.n}

    @classmethod
    def from_json(cls, d: dict) -> "BBParams":
        def dec(v):
            return complex(*v) if isinstance(v, list) else v

        return cls(dec(d.get("alpha", 0.0)), dec(d.get("beta", 1.0)), int(d.get("n", 1)))


def _plain(x):
    x = complex(x)
    return x.real if x.imag == 0 else x


# --------------------------------------------------------------------------
# operator and solvers


def bb_operator(p: TaylorSeries, Q: TaylorSeries, params: BBParams) -> TaylorSeries:
    """``p Q + z p' / (beta p + alpha)``."""
    order = min(p.order, Q.order)
    p, Q = p.with_order(order), Q.with_order(order)
    den = params.beta * p + params.alpha
    if abs(den.coeffs[0]) <= 1e-10:
        raise DenominatorVanishes("beta p(0) + alpha vanishes")
    return p * Q + z_derivative(p) / den


def classical_bb(p: TaylorSeries, alpha, beta) -> TaylorSeries:
    """``p + z p'/(beta p + alpha)`` by an explicit coefficient loop.

    Written independently of the series division so it can serve as a
    check on :func:`bb_operator` with ``Q = 1``.
    """
    c = p.coeffs
    d = beta * c + np.r_[alpha, np.zeros(c.size - 1)]
    if abs(d[0]) <= 1e-10:
        raise DenominatorVanishes("beta p(0) + alpha vanishes")
    zp = np.arange(c.size) * c
    q = np.zeros_like(c)
    for k in range(c.size):
        q[k] = (zp[k] - np.dot(q[:k], d[k:0:-1])) / d[0]
    return TaylorSeries(c + q)


def bb_solve_from_target(Psi: TaylorSeries, Q: TaylorSeries, params: BBParams) -> TaylorSeries:
    """Solve ``p Q + z p'/(beta p + alpha) = Psi`` for ``p`` with ``p(0) = Psi(0)/Q(0)``.

    Works on the cleared equation ``p Q (beta p + alpha) + z p' = Psi (beta p + alpha)``,
    which is linear in each new coefficient.
    """
    N = min(Psi.order, Q.order)
    psi, q = Psi.with_order(N).coeffs, Q.with_order(N).coeffs
    a, b = params.alpha, params.beta
    if abs(q[0]) <= 1e-12:
        raise DenominatorVanishes("Q(0) vanishes")
    p = np.zeros(N + 1, dtype=complex)
    A = np.zeros(N + 1, dtype=complex)  # p Q
    B = np.zeros(N + 1, dtype=complex)  # beta p + alpha
    p[0] = psi[0] / q[0]
    A[0] = p[0] * q[0]
    B[0] = b * p[0] + a
    if abs(B[0]) <= 1e-10:
        raise DenominatorVanishes("beta p(0) + alpha vanishes")
    for k in range(1, N + 1):
        denom = k + q[0] * (2 * b * p[0] + a) - b * psi[0]
        if abs(denom) <= 1e-10:
            raise ResonantOrder(f"recursion is singular at order {k}")
        a_k = np.dot(p[:k], q[k:0:-1])
        resid = (np.dot(A[1:k], B[k - 1:0:-1]) + a_k * B[0]
                 - np.dot(psi[1:k + 1], B[k - 1::-1]))
        p[k] = -resid / denom
        A[k] = a_k + q[0] * p[k]
        B[k] = b * p[k]
    return TaylorSeries(p)


def odl_closed_form(Q: TaylorSeries, params: BBParams) -> TaylorSeries:
    """Closed-form solution of ``p Q + z p'/(beta p + alpha) = 1``.

    ``p = g^alpha z^beta / beta * (integral g^(alpha-1) g' t^beta dt)^-1 - alpha/beta``
    with ``g = z exp(integral (Q-1)/t)``.
    """
    if abs(Q.coeffs[0] - 1) > 1e-10:
        raise ValueError("Q must equal 1 at the origin")
    if not params.real_nonnegative:
        raise ValueError("the closed form needs real alpha >= 0 and beta > 0")
    a, b = params.alpha, params.beta
    g = g_from_Q(Q)
    integral = integrate_valued((g ** (a - 1) * g.derivative()).times_power(b))
    ratio = (g ** a).times_power(b) / integral
    if abs(complex(ratio.exponent)) > 1e-9:
        raise ValueError(f"exponent did not cancel: {ratio.exponent}")
    p = ValuedSeries(0, ratio.unit).to_taylor() / b - a / b
    if abs(p.coeffs[0] - 1) > 1e-9:
        raise ValueError(f"closed form gives p(0) = {p.coeffs[0]}")
    return p


# --------------------------------------------------------------------------
# hypothesis checkers


@dataclass(frozen=True)
class Grid:
    """Sample points for the ``z`` and ``zeta`` quantifiers."""

    z_radius: float = 0.999
    z_angles: int = 512
    zeta_radius: float = 0.999
    zeta_angles: int = 512
    interior_radii: tuple = (0.0, 0.5, 0.9)

    def zeta(self) -> np.ndarray:
        t = 2 * math.pi * (np.arange(self.zeta_angles) + 0.5) / self.zeta_angles
        return self.zeta_radius * np.exp(1j * t)

    def z(self) -> np.ndarray:
        t = 2 * math.pi * np.arange(self.z_angles) / self.z_angles
        return self.z_radius * np.exp(1j * t)


@dataclass(frozen=True)
class CheckResult:
    holds: bool
    margin: float
    witness: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds


def _q_values(Q: TaylorSeries, grid: Grid, cfg: Config) -> np.ndarray:
    """``Q`` sampled on the largest admissible radius not above ``grid.z_radius``.

    ``Re(c (Q - 1))`` is harmonic, so its infimum over the disk is approached
    on large circles; radii where the truncated series is unreliable are
    stepped down.
    """
    r = grid.z_radius
    while r > 0.5 and tail_estimate(Q, r) > cfg.tail_tol:
        r = round(r - 0.01, 10)
    z = r * np.exp(2j * math.pi * np.arange(grid.z_angles) / grid.z_angles)
    return evaluate(Q, z)


def _reciprocal_margin(h: DominantSpec, params: BBParams, grid: Grid):
    """``min Re 1/(beta h + alpha)`` over the zeta circle and interior rings."""
    pts = [grid.zeta()] + [r * np.exp(1j * np.angle(grid.zeta())) for r in grid.interior_radii]
    zs = np.concatenate(pts)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = (1 / (params.beta * evaluate_dominant(h, zs) + params.alpha)).real
    vals = np.where(np.isfinite(vals), vals, -np.inf)
    k = int(np.argmin(vals))
    return float(vals[k]), complex(zs[k])


def check_thm21(h: DominantSpec, Q: TaylorSeries, params: BBParams, grid: Grid | None = None,
                cfg: Config | None = None) -> CheckResult:
    """Conditions (i) and (ii) for the generalized Briot-Bouquet implication.

    (ii) is quantified over the whole circle ``|zeta| = grid.zeta_radius``
    rather than the preimage set, which only strengthens the requirement.
    """
    grid = grid or Grid()
    cfg = cfg or get_config()
    m1, w1 = _reciprocal_margin(h, params, grid)
    zeta = grid.zeta()
    with np.errstate(divide="ignore", invalid="ignore"):
        hz = evaluate_dominant(h, zeta)
        X = hz / (zeta * dominant_derivative(h, zeta))
        Y = (1 / (params.beta * hz + params.alpha)).real
    R = _q_values(Q, grid, cfg) - 1
    # min over z of Re(R(z) X(zeta)) for every zeta
    inner = (R[:, None] * X[None, :]).real.min(axis=0) if np.any(R) else np.zeros_like(Y)
    vals = inner + Y
    vals = np.where(np.isfinite(vals), vals, -np.inf)
    k = int(np.argmin(vals))
    m2 = float(vals[k])
    margin = min(m1, m2)
    return CheckResult(margin > 0, margin, {"i": m1, "ii": m2, "zeta_i": w1, "zeta_ii": complex(zeta[k])})


def k_from_h0(h0) -> float:
    """``k`` from ``h(0) = (k - 1)/4``."""
    return 4 * complex(h0).real + 1


def _sup_over_disk(Q: TaylorSeries, fn, grid: Grid, cfg: Config) -> float:
    vals = fn(_q_values(Q, grid, cfg) - 1)
    return float(np.max(vals))


def _janowski_lhs_rhs(A, B, D, E_, alpha, beta, M):
    lhs = (A - B) * (1 - A) * (1 + E_)
    rhs = (1 + abs(A)) * (beta + alpha + abs(beta * A + alpha * B)) * ((1 + D) * (1 - B) + M * (1 + E_) * (1 - A))
    return lhs, rhs


def _janowski_ranges(A, B, D, E_, alpha, beta) -> bool:
    return -1 <= B < A < 1 and -1 < E_ < D <= 1 and alpha + beta > 0


def check_inequalities(case_id: str, grid: Grid | None = None, cfg: Config | None = None,
                       **kw) -> CheckResult:
    """Evaluate one printed hypothesis inequality; ``margin`` is LHS minus RHS.

    Cases: ``thm21``, ``eq09``, ``eq6M``, ``ez``, ``eq02``, ``eq17``,
    ``phi-i`` ... ``phi-v``, ``sector-F`` (verbatim ``Re(Q - 1) > 1 - gamma``)
    and ``sector-F-g`` (``Re Q > 1 - gamma``).
    """
    grid = grid or Grid()
    cfg = cfg or get_config()
    if case_id == "thm21":
        return check_thm21(kw["h"], kw["Q"], kw["params"], grid, cfg)
    if case_id == "eq09":
        h, Q, params = kw["h"], kw["Q"], kw["params"]
        k = kw.get("k", k_from_h0(evaluate_dominant(h, 0.0)))
        left, _ = _reciprocal_margin(h, params, Grid(grid.z_radius, grid.z_angles, grid.zeta_radius,
                                                     grid.zeta_angles, ()))
        right = _sup_over_disk(Q, lambda R: k * np.abs(R) - R.real, grid, cfg)
        return CheckResult(left > right, left - right, {"k": k, "lhs": left, "rhs": right})
    if case_id == "eq6M":
        h, params = kw["h"], kw["params"]
        M = kw["M"] if "M" in kw else float(np.max(np.abs(_q_values(kw["Q"], grid, cfg))))
        left, _ = _reciprocal_margin(h, params, Grid(grid.z_radius, grid.z_angles, grid.zeta_radius,
                                                     grid.zeta_angles, ()))
        right = 6 * (M + 1)
        return CheckResult(left > right, left - right, {"M": M, "lhs": left, "rhs": right})
    if case_id == "ez":
        params = kw["params"]
        bound = 1 / (params.beta * E + params.alpha)
        sup = _sup_over_disk(kw["Q"], np.abs, grid, cfg)
        ok = params.real_nonnegative and sup < bound
        return CheckResult(ok, bound - sup, {"sup": sup, "bound": bound})
    if case_id == "eq02":
        params = kw["params"]
        bound = 1 / (2 * (SQRT2 * params.beta + params.alpha))
        sup = _sup_over_disk(kw["Q"], lambda R: np.abs(R) - R.real, grid, cfg)
        ok = params.real_nonnegative and sup < bound
        return CheckResult(ok, float(np.real(bound - sup)), {"sup": sup, "bound": bound})
    if case_id == "eq17" or case_id in PHI_CONSTANTS:
        A, B, D, E_ = kw["A"], kw["B"], kw["D"], kw["E"]
        alpha, beta = kw["alpha"], kw["beta"]
        if case_id == "eq17":
            lhs, rhs = _janowski_lhs_rhs(A, B, D, E_, alpha, beta, kw["M"])
        elif case_id == "phi-iii":
            lhs = (A - B) * (1 - A) * (1 + E_) * (1 + E)
            rhs = (1 + abs(A)) * (beta + alpha + abs(beta * A + alpha * B)) * (
                (1 + D) * (1 - B) * (1 + E) + 2 * E * (1 + E_) * (1 - A))
        else:
            lhs, rhs = _janowski_lhs_rhs(A, B, D, E_, alpha, beta, PHI_CONSTANTS[case_id])
        ok = _janowski_ranges(A, B, D, E_, alpha, beta) and lhs > rhs
        return CheckResult(ok, lhs - rhs, {"lhs": lhs, "rhs": rhs})
    if case_id in ("sector-F", "sector-F-g"):
        gamma = kw["gamma"]
        shift = 1.0 if case_id == "sector-F" else 0.0
        low = -_sup_over_disk(kw["Q"], lambda R: -(R.real + 1 - shift), grid, cfg)
        # the infimum over the open disk includes the value at the origin
        low = min(low, float((kw["Q"].coeffs[0] - shift).real))
        return CheckResult(low > 1 - gamma, low - (1 - gamma), {"inf": low})
    raise UnknownCase(case_id)


# --------------------------------------------------------------------------
# boundary radii of the open-door dominants


def boundary_radius_lemma1(theta: float, params: BBParams) -> float:
    """``|h(e^{i theta})|`` for ``h = 1 + z + n z/(beta + alpha (1 + z))``."""
    a, b, n = float(np.real(params.alpha)), float(np.real(params.beta)), params.n
    c, s = math.cos(theta), math.sin(theta)
    d = (b + a * (1 + c)) ** 2 + (a * s) ** 2
    return math.sqrt(2 * (1 + c) + (n * n + 2 * n * (2 * a + b) * (1 + c)) / d)


def boundary_radius_lemma2(theta: float, params: BBParams) -> float:
    """Boundary modulus formula for ``(1+z)/(1-z) + 2nz/((1-z)((a+b)+(a-b)z))``.

    ``gamma = cot(theta/2)`` comes from ``(1 + e^{i theta})/(1 - e^{i theta}) = i gamma``.
    """
    s = math.sin(theta)
    if abs(s) < 1e-12 or not -math.pi < theta < math.pi:
        raise DegenerateAngle(f"theta = {theta} has sin(theta) = 0")
    a, b, n = float(np.real(params.alpha)), float(np.real(params.beta)), params.n
    g = 1 / math.tan(theta / 2)
    return math.sqrt(g * g + (n * n + 4 * n * a * g * g / (1 + g * g)) / (s * s * ((b / g) ** 2 + a * a)))
