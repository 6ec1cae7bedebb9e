"""Executable theorem cases.

Each case maps a point ``u`` of the unit cube to an instance, gates it with
the printed hypothesis and evaluates the printed conclusion. Instances that
make a subordination hypothesis true are built as ``h o w`` and the unknown
function is recovered from the differential equation, so no rejection
sampling over ``p`` is needed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..briot_bouquet import (
    PHI_CONSTANTS,
    BBParams,
    bb_operator,
    bb_solve_from_target,
    check_inequalities,
    check_thm21,
    k_from_h0,
    odl_closed_form,
)
from ..config import Config
from ..dominants import DominantSpec, evaluate_dominant
from ..errors import UnknownCase
from ..integral_ops import (
    OperatorParams,
    bernardi_general,
    bernardi_power,
    existence_operator,
    existence_p,
    existence_Q,
    existence_quotient,
    g_from_Q,
    two_function_operator,
    two_function_p,
    two_function_rhs,
)
from ..power_series import TaylorSeries, ValuedSeries, derivative, exponential, z_derivative
from ..subordination import is_subordinate
from .common import (
    Check,
    Draw,
    all_of,
    analytic_in_disk,
    draw_schwarz,
    f_from_logderivative,
    fz_operator,
    grid_sup,
    identity_check,
    perturbation,
    sign_check,
    strict,
    sub_check,
    subordinate,
    theta_operator,
    typically_real,
)

DIM = 32

Instance = dict


@dataclass(frozen=True)
class TheoremCase:
    id: str
    build: Callable[[np.ndarray, Config], Instance]
    hypothesis: Callable[[Instance, Config], Check]
    conclusion: Callable[[Instance, Config], Check]
    notes: str = ""
    dim: int = DIM
    converse: bool = False
    # hypothesis known to be unsatisfiable or rarely satisfiable as printed
    expect_starved: bool = False


def _janowski(d: Draw, b_min=-0.9, b_max=0.9):
    B = d.uniform(b_min, b_max)
    A = d.uniform(-1.0, 1.0)
    if abs(A - B) < 0.2:
        A = B + 0.2 if B < 0.8 else B - 0.2
    return DominantSpec.janowski(A, B)


def _convex_h(d: Draw, allow_unbounded=True):
    kind = d.choice(("exp", "sqrt-shift", "janowski", "half-plane", "sector") if allow_unbounded
                    else ("exp", "sqrt-shift", "janowski"))
    gamma = d.uniform(0.2, 1.0)
    jan = _janowski(d)
    return {"exp": DominantSpec.exp(), "sqrt-shift": DominantSpec.sqrt_shift(), "janowski": jan,
            "half-plane": DominantSpec.half_plane(), "sector": DominantSpec.sector(gamma)}[kind]


def _params(d: Draw, a=(0.0, 2.0), b=(0.2, 2.0), twist=0.0, n=1) -> BBParams:
    alpha = d.uniform(*a)
    beta = d.uniform(*b) * complex(np.exp(1j * d.uniform(-twist, twist)))
    return BBParams(alpha, beta, n)


def _gate(result) -> Check:
    """A hypothesis checker result as a strict check."""
    return strict(result.margin, **{k: v for k, v in result.witness.items() if isinstance(v, float)})


def _implication(inst, cfg):
    """Recover ``p`` from ``Psi = h o w`` and test ``p < h``."""
    return sub_check(inst["p"], inst["h"], cfg)


def _solve(inst):
    inst["p"] = bb_solve_from_target(inst["Psi"], inst["Q"], inst["params"])
    return inst


# --------------------------------------------------------------------------
# generalized Briot-Bouquet implication and its corollaries


def _build_thm21(u, cfg):
    d = Draw(u)
    h = _convex_h(d)
    params = _params(d, twist=0.3)
    eps = d.uniform(0.0, 0.4)
    Q = perturbation(d, cfg, eps)
    if h.tag in ("half-plane", "sector"):
        # condition (ii) forces Q = 1 for dominants whose h/(zeta h') is imaginary on the circle
        Q = TaylorSeries.constant(1.0, cfg.order)
    w = draw_schwarz(d, cfg)
    return _solve({"h": h, "params": params, "Q": Q, "omega": w, "Psi": subordinate(h, w)})


def _hyp_thm21(inst, cfg):
    return all_of(_gate(check_thm21(inst["h"], inst["Q"], inst["params"], cfg=cfg)),
                  analytic_in_disk(inst["p"]))


def _build_kcor(u, cfg):
    d = Draw(u)
    # convex h normalised so that h - h(0) has derivative at least one at 0
    kind = d.choice(("exp", "janowski"))
    B = d.uniform(-0.9, 0.0)
    A = min(1.0, B + d.uniform(1.0, 1.9))
    h = DominantSpec.exp() if kind == "exp" else DominantSpec.janowski(A, B)
    params = _params(d, a=(0.0, 0.5), b=(0.05, 0.5))
    Q = perturbation(d, cfg, d.log_uniform(1e-3, 0.2))
    w = draw_schwarz(d, cfg)
    return _solve({"h": h, "params": params, "Q": Q, "omega": w, "Psi": subordinate(h, w)})


def _hyp_kcor(inst, cfg):
    k = k_from_h0(evaluate_dominant(inst["h"], 0.0))
    r = check_inequalities("eq09", h=inst["h"], Q=inst["Q"], params=inst["params"], k=k, cfg=cfg)
    return all_of(strict(r.margin, k=k), analytic_in_disk(inst["p"]))


def _build_6M(u, cfg):
    d = Draw(u)
    h = _convex_h(d, allow_unbounded=False)
    params = _params(d, a=(0.0, 0.01), b=(1e-3, 0.05))
    Q = perturbation(d, cfg, d.uniform(0.0, 1.5))
    w = draw_schwarz(d, cfg)
    return _solve({"h": h, "params": params, "Q": Q, "omega": w, "Psi": subordinate(h, w)})


def _hyp_6M(inst, cfg):
    r = check_inequalities("eq6M", h=inst["h"], Q=inst["Q"], params=inst["params"], cfg=cfg)
    return all_of(strict(r.margin, M=r.witness["M"]), analytic_in_disk(inst["p"]))


def _corF_instance(d: Draw, cfg, h, Q, params):
    w = draw_schwarz(d, cfg)
    f = f_from_logderivative(subordinate(h, w))
    g = g_from_Q(Q)
    op = OperatorParams(params.alpha, params.beta)
    F = bernardi_general(f, g, op, enforce_gate=False)
    p = F.log_derivative() / Q
    return {"h": h, "params": params, "Q": Q, "omega": w, "f": f, "g": g, "F": F, "p": p}


def _corF_identity(inst):
    lhs = bb_operator(inst["p"], inst["Q"], inst["params"])
    return identity_check(lhs, inst["f"].log_derivative(), "bb_identity")


def _build_corF(u, cfg):
    d = Draw(u)
    h = _convex_h(d)
    if h.tag == "janowski" and h["A"] < h["B"]:
        h = DominantSpec.janowski(h["B"], h["A"])
    params = _params(d, a=(0.0, 2.0), b=(0.2, 2.0))
    Q = perturbation(d, cfg, d.uniform(0.0, 0.3))
    if h.tag in ("half-plane", "sector"):
        Q = TaylorSeries.constant(1.0, cfg.order)
    return _corF_instance(d, cfg, h, Q, params)


def _hyp_corF(inst, cfg):
    return _gate(check_thm21(inst["h"], inst["Q"], inst["params"], cfg=cfg))


def _conc_corF(inst, cfg):
    return all_of(_corF_identity(inst), sub_check(inst["p"], inst["h"], cfg))


def _build_sectorF_relaxed(u, cfg, trivial_g=False):
    d = Draw(u)
    gamma = d.uniform(0.2, 1.0)
    h = DominantSpec.sector(gamma)
    params = _params(d, a=(0.0, 2.0), b=(0.2, 2.0))
    Q = typically_real(d, cfg, c_max=0.6)
    if trivial_g:
        Q = TaylorSeries.constant(1.0, cfg.order)
    inst = _corF_instance(d, cfg, h, Q, params)
    inst["gamma"] = gamma
    return inst


def _hyp_sectorF_relaxed(inst, cfg):
    # Re(Q - 1) > 1 - gamma fails at the origin, so the bound is read as Re Q > 1 - gamma
    return _gate(check_inequalities("sector-F-g", Q=inst["Q"], gamma=inst["gamma"], cfg=cfg))


def _build_sectorF(u, cfg):
    # conditions (i), (ii) for the sector dominant admit only Q = 1
    return _build_sectorF_relaxed(u, cfg, trivial_g=u[-1] < 0.5)


def _hyp_sectorF(inst, cfg):
    inherited = _gate(check_thm21(inst["h"], inst["Q"], inst["params"], cfg=cfg))
    return all_of(_hyp_sectorF_relaxed(inst, cfg), inherited)


def _build_gstar_printed(u, cfg, trivial_g=False):
    d = Draw(u)
    h = DominantSpec.half_plane()
    params = _params(d, a=(0.0, 2.0), b=(0.2, 2.0))
    # g starlike and analytic across the circle, hence univalent on the closed disk
    Q = subordinate(h, draw_schwarz(d, cfg, s=(0.05, 0.6)))
    if trivial_g:
        Q = TaylorSeries.constant(1.0, cfg.order)
    return _corF_instance(d, cfg, h, Q, params)


def _hyp_gstar_printed(inst, cfg):
    return sub_check(inst["Q"], DominantSpec.half_plane(), cfg)


def _build_gstar(u, cfg):
    # for the half-plane dominant condition (ii) admits only Q = 1, that is g = z
    return _build_gstar_printed(u, cfg, trivial_g=u[-1] < 0.5)


def _hyp_gstar(inst, cfg):
    inherited = _gate(check_thm21(inst["h"], inst["Q"], inst["params"], cfg=cfg))
    return all_of(_hyp_gstar_printed(inst, cfg), inherited)


def _build_ez(u, cfg):
    d = Draw(u)
    h = DominantSpec.exp()
    params = _params(d, a=(0.0, 2.0), b=(0.1, 2.0))
    Q = perturbation(d, cfg, d.uniform(0.0, 0.4))
    w = draw_schwarz(d, cfg)
    return _solve({"h": h, "params": params, "Q": Q, "omega": w, "Psi": subordinate(h, w)})


def _hyp_ez(inst, cfg):
    r = check_inequalities("ez", Q=inst["Q"], params=inst["params"], cfg=cfg)
    return all_of(strict(r.margin), analytic_in_disk(inst["p"]))


def _build_sqrt(u, cfg):
    d = Draw(u)
    h = DominantSpec.sqrt_shift()
    params = _params(d, a=(0.0, 2.0), b=(0.1, 2.0))
    # mostly real perturbations keep |Q-1| - Re(Q-1) small
    Q = 1 + d.uniform(0.0, 0.5) * draw_schwarz(d, cfg, s=(0.3, 0.9), real=True).series
    Q = Q + d.uniform(0.0, 0.05) * draw_schwarz(d, cfg).series
    w = draw_schwarz(d, cfg)
    return _solve({"h": h, "params": params, "Q": Q, "omega": w, "Psi": subordinate(h, w)})


def _hyp_sqrt(inst, cfg):
    r = check_inequalities("eq02", Q=inst["Q"], params=inst["params"], cfg=cfg)
    return all_of(strict(r.margin), analytic_in_disk(inst["p"]))


def _build_ss(u, cfg):
    d = Draw(u)
    gamma = d.uniform(0.2, 1.0)
    h = DominantSpec.sector(gamma)
    params = _params(d, a=(0.0, 2.0), b=(0.1, 2.0))
    Q = typically_real(d, cfg, c_max=1.0)
    w = draw_schwarz(d, cfg, real=True)
    return _solve({"h": h, "params": params, "Q": Q, "omega": w, "Psi": subordinate(h, w)})


def _hyp_ss(inst, cfg):
    Q, p = inst["Q"], inst["p"]
    q1, p1 = complex(Q.coeffs[1]), complex(p.coeffs[1])
    real = abs(q1.imag) < 1e-12 and abs(p1.imag) < 1e-12
    return all_of(strict(min(q1.real, p1.real) if real else -1.0, Q1=q1.real, p1=p1.real),
                  strict(1.0 if inst["params"].real_nonnegative else -1.0),
                  analytic_in_disk(p))


def _janowski_params(d: Draw):
    A = d.uniform(-0.9, 0.95)
    B = d.uniform(-1.0, A - 0.01)
    D = d.uniform(-0.95, 1.0)
    E_ = d.uniform(-0.99, D - 0.01)
    alpha = d.log_uniform(1e-5, 0.05)
    beta = d.log_uniform(1e-5, 0.05)
    return A, B, D, E_, alpha, beta


def _build_janowski(u, cfg):
    d = Draw(u)
    A, B, D, E_, alpha, beta = _janowski_params(d)
    Q = perturbation(d, cfg, d.uniform(0.0, 1.0))
    M = 1.001 * grid_sup(Q, np.abs, cfg)
    w = draw_schwarz(d, cfg)
    target = DominantSpec.janowski(D, E_)
    return _solve({"h": DominantSpec.janowski(A, B), "target": target, "params": BBParams(alpha, beta),
                   "Q": Q, "M": M, "omega": w, "Psi": subordinate(target, w),
                   "ABDE": (A, B, D, E_)})


def _hyp_janowski(inst, cfg):
    A, B, D, E_ = inst["ABDE"]
    P = inst["params"]
    r = check_inequalities("eq17", A=A, B=B, D=D, E=E_, alpha=P.alpha, beta=P.beta, M=inst["M"])
    return all_of(strict(r.margin if r.holds else min(r.margin, -1e-300), **r.witness),
                  analytic_in_disk(inst["p"]))


PHI = {
    "phi-i": DominantSpec.exp(),
    "phi-ii": DominantSpec.sqrt_shift(),
    "phi-iii": DominantSpec.sigmoid(),
    "phi-iv": DominantSpec.exp_linear(),
    "phi-v": DominantSpec.crescent(),
}


def _build_phi(u, cfg):
    d = Draw(u)
    item = d.choice(tuple(PHI))
    A, B, D, E_, alpha, beta = _janowski_params(d)
    Q = subordinate(PHI[item], draw_schwarz(d, cfg))
    w = draw_schwarz(d, cfg)
    target = DominantSpec.janowski(D, E_)
    return _solve({"item": item, "h": DominantSpec.janowski(A, B), "target": target,
                   "params": BBParams(alpha, beta), "Q": Q, "omega": w,
                   "Psi": subordinate(target, w), "ABDE": (A, B, D, E_)})


def _hyp_phi(inst, cfg):
    A, B, D, E_ = inst["ABDE"]
    P = inst["params"]
    r = check_inequalities(inst["item"], A=A, B=B, D=D, E=E_, alpha=P.alpha, beta=P.beta)
    const = PHI_CONSTANTS[inst["item"]]
    bound = strict(const - grid_sup(inst["Q"], np.abs, cfg), M=const)
    return all_of(strict(r.margin if r.holds else min(r.margin, -1e-300)), bound,
                  analytic_in_disk(inst["p"]))


def _build_slit(u, cfg):
    d = Draw(u)
    a = d.uniform(0.0, 1.0)
    h = DominantSpec.slit_a(a)
    params = _params(d)
    Q = typically_real(d, cfg, c_max=1.0)
    w = draw_schwarz(d, cfg, real=True)
    return _solve({"h": h, "params": params, "Q": Q, "omega": w, "Psi": subordinate(h, w)})


def _hyp_slit(inst, cfg):
    Q, p = inst["Q"], inst["p"]
    q1, p1 = complex(Q.coeffs[1]), complex(p.coeffs[1])
    below_one = strict(1.0 - max(grid_sup(Q, np.real, cfg), float(Q.coeffs[0].real)))
    return all_of(strict(min(q1.real, p1.real)), below_one, analytic_in_disk(p))


# --------------------------------------------------------------------------
# open-door analogue and integral existence


def _build_odl(u, cfg):
    d = Draw(u)
    params = _params(d)
    Q = subordinate(DominantSpec.half_plane(), draw_schwarz(d, cfg))
    return {"params": params, "Q": Q, "p": odl_closed_form(Q, params)}


def _hyp_odl(inst, cfg):
    return sub_check(inst["Q"], DominantSpec.half_plane(), cfg)


def _conc_odl(inst, cfg):
    one = TaylorSeries.constant(1.0, inst["Q"].order)
    ident = identity_check(bb_operator(inst["p"], inst["Q"], inst["params"]), one, "ode")
    return all_of(ident, sign_check([inst["p"]], lambda z, v: v.real, cfg))


def _build_fz_over_z(u, cfg):
    d = Draw(u)
    fp = subordinate(DominantSpec.half_plane(), draw_schwarz(d, cfg))
    f = ValuedSeries(1, TaylorSeries(fp.coeffs / np.arange(1, fp.order + 2)))
    return {"fprime": fp, "f": f}


def _hyp_fz_over_z(inst, cfg):
    nonzero = sign_check([inst["f"].unit], lambda z, v: np.abs(v), cfg)
    return all_of(sub_check(inst["fprime"], DominantSpec.half_plane(), cfg),
                  Check(nonzero.holds is True, nonzero.margin))


def _conc_fz_over_z(inst, cfg):
    return sign_check([inst["f"].unit], lambda z, v: v.real, cfg)


def _build_existence(u, cfg):
    d = Draw(u)
    P = _params(d, a=(0.0, 2.0), b=(0.2, 2.0))
    delta = d.disk(0.3)
    gamma = d.disk(0.5)
    op = OperatorParams(P.alpha, P.beta, lam=1 - delta, eta=1 - gamma, gamma=gamma, delta=delta)
    g = g_from_Q(subordinate(DominantSpec.half_plane(), draw_schwarz(d, cfg, s=(0.05, 0.5))))
    varphi = _unit_exp(d, cfg, 0.3)
    phi = _unit_exp(d, cfg, 0.5)
    return {"op": op, "g": g, "varphi": varphi, "phi": phi, "Q": existence_Q(g, varphi, op)}


def _unit_exp(d: Draw, cfg, c_max):

    c = d.disk(c_max)
    return exponential(c * draw_schwarz(d, cfg).series)


def _hyp_existence(inst, cfg):
    return sub_check(inst["Q"], DominantSpec.half_plane(), cfg)


def _conc_existence(inst, cfg):
    op = inst["op"]
    F = existence_operator(inst["g"], inst["varphi"], inst["phi"], op, cfg)
    quotient = existence_quotient(F, inst["g"], inst["varphi"], inst["phi"], op)
    p = existence_p(inst["g"], inst["varphi"], op)
    ident = identity_check(quotient, p, "pQ_identity")
    nonzero = sign_check([F.unit], lambda z, v: np.abs(v), cfg)
    return all_of(ident, nonzero, sign_check([quotient], lambda z, v: v.real, cfg))


def _build_bernardi_star(u, cfg):
    d = Draw(u)
    P = _params(d, a=(0.0, 2.0), b=(0.2, 2.0))
    Q = subordinate(DominantSpec.half_plane(), draw_schwarz(d, cfg))
    return {"params": P, "Q": Q, "g": g_from_Q(Q)}


def _conc_bernardi_star(inst, cfg):
    P = inst["params"]
    g = inst["g"]
    one = TaylorSeries.constant(1.0, cfg.order)
    op = OperatorParams(P.alpha, P.beta)
    # the corollary is the existence operator with lam = eta = 1, delta = gamma = 0
    F = existence_operator(g, one, one, op, cfg)
    z = ValuedSeries(1, one)
    direct = bernardi_general(z, g, op)
    ident = identity_check(F.unit, direct.unit, "operator_identity")
    ratio = F.log_derivative() / inst["Q"]
    return all_of(ident, sign_check([ratio], lambda z_, v: v.real, cfg))


def _build_two_fn(u, cfg):
    d = Draw(u)
    h = _convex_h(d)
    P = _params(d, a=(0.0, 2.0), b=(0.2, 2.0), twist=0.3)
    sigma = d.disk(1.0)
    G = subordinate(DominantSpec.half_plane(), draw_schwarz(d, cfg, s=(0.05, 0.5)))
    g = g_from_Q(G)
    w = draw_schwarz(d, cfg)
    Phi = subordinate(h, w)
    f = f_from_logderivative(Phi + (sigma / P.beta) * (1 - G))
    phi = _unit_exp(d, cfg, 0.5)
    op = OperatorParams(P.alpha, P.beta, sigma=sigma)
    return {"h": h, "params": P, "op": op, "sigma": sigma, "g": g, "f": f, "phi": phi, "omega": w}


def _hyp_two_fn(inst, cfg):
    h, P = inst["h"], inst["params"]
    z = 0.999 * np.exp(2j * math.pi * np.arange(cfg.samples) / cfg.samples)
    inner = np.concatenate([z, 0.5 * z, [0.0]])
    with np.errstate(invalid="ignore", over="ignore"):
        re = (P.beta * evaluate_dominant(h, inner) + P.alpha).real
    re = np.where(np.isfinite(re), re, -np.inf)
    # hypothesis subordination holds by construction: beta zf'/f + sigma zg'/g = beta h(w) + sigma
    lhs = P.beta * inst["f"].log_derivative() + inst["sigma"] * inst["g"].log_derivative()
    rhs = P.beta * subordinate(h, inst["omega"]) + inst["sigma"]
    return all_of(strict(float(np.min(re))), identity_check(lhs, rhs, "hypothesis_identity"))


def _conc_two_fn(inst, cfg):
    op, P = inst["op"], inst["params"]
    F = two_function_operator(inst["f"], inst["g"], inst["phi"], op)
    p = two_function_p(inst["f"], inst["g"], op)
    eq8 = identity_check(p + z_derivative(p) / (P.beta * p + P.alpha),
                         two_function_rhs(inst["f"], inst["g"], op), "eq8")
    phi = inst["phi"]
    lhs = F.log_derivative() + z_derivative(phi) / phi / P.beta
    return all_of(eq8, identity_check(lhs, p, "p_identity"), sub_check(lhs, inst["h"], cfg))


# --------------------------------------------------------------------------
# open-door dominants


def _door(d: Draw, kind: str, fixed=None):
    n = d.integer(1, 3)
    beta = d.uniform(0.3, 2.0)
    if kind == "a":
        alpha = d.uniform(0.0, 2.0)
        d.unit()
        return DominantSpec.opendoor_a(n, alpha, beta), BBParams(alpha, beta, n)
    # alpha < beta < 3 alpha or beta < alpha < 3 beta
    side = d.unit()
    ratio = d.uniform(1 / 3 + 0.01, 0.99) if side < 0.5 else d.uniform(1.01, 2.99)
    alpha = beta * ratio
    return DominantSpec.opendoor_b(n, alpha, beta), BBParams(alpha, beta, n)


def _door_solution(u, cfg, kind):
    d = Draw(u)
    door, P = _door(d, kind)
    w = draw_schwarz(d, cfg, valuation=P.n)
    Q = subordinate(door, w)
    one = TaylorSeries.constant(1.0, cfg.order)
    p = bb_solve_from_target(one, Q, P)
    return {"door": door, "params": P, "omega": w, "Q": Q, "p": p}


def _hyp_door_p(inst, cfg):
    # Q < door by construction; p must be analytic
    return analytic_in_disk(inst["p"])


def _lemma_build(kind):
    return lambda u, cfg: _door_solution(u, cfg, kind)


def _lemma_conc(target):
    def conc(inst, cfg):
        return sub_check(inst["p"], target, cfg)

    return conc


def _ratio_build(kind):
    def build(u, cfg):
        d = Draw(u)
        door, P = _door(d, kind)
        w = draw_schwarz(d, cfg, valuation=P.n)
        q = subordinate(door, w)
        f = f_from_logderivative(q)
        F = bernardi_power(f, OperatorParams(P.alpha, P.beta))
        return {"door": door, "params": P, "omega": w, "q": q, "f": f, "F": F}

    return build


def _hyp_ratio(inst, cfg):
    return Check(True, math.inf)


def _conc_ratio(inst, cfg):
    Fq = inst["F"].log_derivative()
    return sign_check([Fq, inst["q"]], lambda z, a, b: 2 * np.abs(a) - np.abs(b), cfg)


def _conc_ratio2(inst, cfg):
    Fq = inst["F"].log_derivative()
    return sign_check([Fq / inst["q"]], lambda z, v: v.real, cfg)


def _theta_build(kind):
    def build(u, cfg):
        inst = _door_solution(u, cfg, kind)
        inst["f"] = f_from_logderivative(inst["p"])
        return inst

    return build


def _hyp_theta(inst, cfg):
    P = inst["params"]
    th = theta_operator(inst["f"], P.alpha, P.beta)
    return all_of(identity_check(th, inst["Q"], "theta_identity"), analytic_in_disk(inst["p"]))


def _theta_conc(target):
    def conc(inst, cfg):
        return sub_check(inst["f"].log_derivative(), target, cfg)

    return conc


def _fz_build(kind):
    def build(u, cfg):
        inst = _door_solution(u, cfg, kind)
        inst["f"] = ValuedSeries(1, 1 / inst["p"])
        return inst

    return build


def _hyp_fz(inst, cfg):
    P = inst["params"]
    Qf = fz_operator(inst["f"], P.alpha, P.beta)
    return all_of(identity_check(Qf, inst["Q"], "fz_identity"), analytic_in_disk(inst["p"]),
                  analytic_in_disk(inst["f"].unit))


def _fz_conc(target):
    def conc(inst, cfg):
        return sub_check(inst["f"].unit, target, cfg)

    return conc


def _build_tuneski(u, cfg):
    d = Draw(u)
    w = draw_schwarz(d, cfg, s=(0.2, 0.9))
    Q = 1 + 2 * w.series
    P = BBParams(0.0, 1.0, 1)
    one = TaylorSeries.constant(1.0, cfg.order)
    p = bb_solve_from_target(one, Q, P)
    return {"params": P, "omega": w, "Q": Q, "p": p, "f": f_from_logderivative(p)}


def tuneski_ratio(f: ValuedSeries) -> TaylorSeries:
    """``f f''/(f')^2``."""
    fp = f.derivative().to_taylor()
    return f.to_taylor() * derivative(fp) / (fp * fp)


def _hyp_tuneski(inst, cfg):
    X = tuneski_ratio(inst["f"])
    sup = grid_sup(X, np.abs, cfg)
    return all_of(strict(2.0 - sup, sup=sup), analytic_in_disk(inst["p"]))


def _build_fprime(u, cfg):
    d = Draw(u)
    w = draw_schwarz(d, cfg, s=(0.2, 0.95))
    fp = 1 + 2 * w.series
    f = ValuedSeries(1, TaylorSeries(fp.coeffs / np.arange(1, fp.order + 2)))
    return {"omega": w, "fprime": fp, "f": f}


def _hyp_fprime(inst, cfg):
    sup = grid_sup(inst["fprime"], lambda v: np.abs(v - 1), cfg)
    return strict(2.0 - sup, sup=sup)


def _build_last(u, cfg):
    d = Draw(u)
    door = DominantSpec.opendoor_b(1, 0.0, 1.0)
    w = draw_schwarz(d, cfg)
    fp = subordinate(door, w)
    f = ValuedSeries(1, TaylorSeries(fp.coeffs / np.arange(1, fp.order + 2)))
    return {"door": door, "omega": w, "fprime": fp, "f": f}


def _hyp_last(inst, cfg):
    nonzero = sign_check([inst["f"].unit], lambda z, v: np.abs(v), cfg)
    return Check(nonzero.holds is True, nonzero.margin)


# --------------------------------------------------------------------------
# falsifier controls


def _build_converse_ez(u, cfg):
    d = Draw(u)
    params = _params(d, a=(0.0, 0.3), b=(0.1, 1.0))
    w = draw_schwarz(d, cfg, s=(0.2, 0.95))
    p = subordinate(DominantSpec.exp(), w)
    Q = TaylorSeries([1.0, 0.3], cfg.order)
    return {"h": DominantSpec.exp(), "params": params, "omega": w, "p": p, "Q": Q,
            "Psi": bb_operator(p, Q, params)}


def _hyp_converse_ez(inst, cfg):
    gate = check_inequalities("ez", Q=inst["Q"], params=inst["params"], cfg=cfg)
    return all_of(strict(gate.margin), sub_check(inst["p"], inst["h"], cfg))


def _conc_converse_ez(inst, cfg):
    return sub_check(inst["Psi"], inst["h"], cfg)


def _conc_planted(inst, cfg):
    c = _implication(inst, cfg)
    flipped = {True: False, False: True, None: None}[c.holds]
    return Check(flipped, -c.margin, c.where, c.detail)


# --------------------------------------------------------------------------


def _always(inst, cfg):
    return Check(True, math.inf)


def _cases() -> list[TheoremCase]:
    jan_half = DominantSpec.janowski(0.0, 1.0)      # 1/(1+z)
    jan_right = DominantSpec.janowski(-1.0, 1.0)    # (1-z)/(1+z)
    disk_one = DominantSpec.janowski(1.0, 0.0)      # 1+z
    hp = DominantSpec.half_plane()
    return [
        TheoremCase("thm-2.1", _build_thm21, _hyp_thm21, _implication,
                    "convex h; conditions (i), (ii) on a grid with zeta on |zeta| = 0.999"),
        TheoremCase("cor-kcor", _build_kcor, _hyp_kcor, _implication,
                    "k = 4 h(0) + 1 = 5; h restricted to normalised convex dominants"),
        TheoremCase("cor-6M", _build_6M, _hyp_6M, _implication, "M = sup |Q| on the grid"),
        TheoremCase("cor-corF", _build_corF, _hyp_corF, _conc_corF,
                    "F = I[f, g]; p = (zF'/F)/Q checked against the generalized operator"),
        TheoremCase("cor-sector-F", _build_sectorF, _hyp_sectorF, _conc_corF,
                    "h = sector; Re Q > 1 - gamma plus conditions (i), (ii) of cor-corF"),
        TheoremCase("cor-gstar", _build_gstar, _hyp_gstar, _conc_corF,
                    "f starlike, g univalent on the closed disk, plus conditions (i), (ii) of cor-corF"),
        TheoremCase("cor-ez", _build_ez, _hyp_ez, _implication, "|Q - 1| < 1/(beta e + alpha)"),
        TheoremCase("cor-sqrt", _build_sqrt, _hyp_sqrt, _implication,
                    "|Q-1| < Re(Q-1) + 1/(2(sqrt2 beta + alpha))"),
        TheoremCase("cor-ss", _build_ss, _hyp_ss, _implication,
                    "Q typically real with Q'(0) > 0; real Schwarz functions so that p'(0) > 0"),
        TheoremCase("thm-janowski", _build_janowski, _hyp_janowski, _implication,
                    "inequality (A-B)(1-A)(1+E) > ... evaluated verbatim"),
        TheoremCase("cor-phi-list", _build_phi, _hyp_phi, _implication,
                    "Q = phi o w; M replaced by max |phi| for items (i)-(v)"),
        TheoremCase("thm-slit-a", _build_slit, _hyp_slit, _implication,
                    "Re Q < 1 with Q(0) = 1 cannot hold for nonconstant Q", expect_starved=True),
        TheoremCase("thm-odl", _build_odl, _hyp_odl, _conc_odl, "closed-form solution; Re p > 0"),
        TheoremCase("cor-fz-over-z", _build_fz_over_z, _hyp_fz_over_z, _conc_fz_over_z,
                    "f' < (1+z)/(1-z) implies Re f/z > 0"),
        TheoremCase("thm-existence", _build_existence, _hyp_existence, _conc_existence,
                    "complex lambda, eta, gamma, delta; Re of the concluded quotient > 0"),
        TheoremCase("cor-bernardi-star", _build_bernardi_star, _hyp_existence, _conc_bernardi_star,
                    "outer power 1/beta as in the operator it specialises"),
        TheoremCase("thm-two-fn", _build_two_fn, _hyp_two_fn, _conc_two_fn,
                    "zf'/f built from h o w so the hypothesis holds by construction"),
        TheoremCase("lem-1", _lemma_build("a"), _hyp_door_p, _lemma_conc(jan_half),
                    "Q = h o w with w of valuation n; p < 1/(1+z)"),
        TheoremCase("thm-ratio", _ratio_build("a"), _hyp_ratio, _conc_ratio,
                    "2|zF'/F| - |zf'/f| > 0 on the grid"),
        TheoremCase("thm-theta", _theta_build("a"), _hyp_theta, _theta_conc(jan_half),
                    "Theta(f) recomputed from f and compared with Q"),
        TheoremCase("cor-tuneski", _build_tuneski, _hyp_tuneski, _theta_conc(jan_half),
                    "|f f''/f'^2| < 2 checked directly on f"),
        TheoremCase("thm-fz", _fz_build("a"), _hyp_fz, _fz_conc(disk_one), "p = z/f; f/z < 1 + z"),
        TheoremCase("cor-fprime", _build_fprime, _hyp_fprime, _fz_conc(disk_one),
                    "|f' - 1| < 2 implies |f/z - 1| < 1"),
        TheoremCase("lem-2", _lemma_build("b"), _hyp_door_p, _lemma_conc(jan_right),
                    "real alpha, beta with alpha < beta < 3 alpha or beta < alpha < 3 beta"),
        TheoremCase("thm-ratio-2", _ratio_build("b"), _hyp_ratio, _conc_ratio2,
                    "Re((zF'/F)/(zf'/f)) > 0"),
        TheoremCase("thm-theta-2", _theta_build("b"), _hyp_theta, _theta_conc(jan_right),
                    "zf'/f < (1-z)/(1+z)"),
        TheoremCase("thm-fz-2", _fz_build("b"), _hyp_fz, _fz_conc(hp), "f/z < (1+z)/(1-z)"),
        TheoremCase("cor-last", _build_last, _hyp_last, _fz_conc(hp),
                    "alpha = 0, beta = 1, n = 1 as stated"),
        TheoremCase("converse-of(cor-ez)", _build_converse_ez, _hyp_converse_ez, _conc_converse_ez,
                    "p < e^z with Q = 1 + 0.3z does not force the operator into e^z", converse=True),
        TheoremCase("printed-reading(cor-gstar)", _build_gstar_printed, _hyp_gstar_printed, _conc_corF,
                    "without conditions (i), (ii) the g-starlike conclusion fails", converse=True),
        TheoremCase("printed-reading(cor-sector-F)", _build_sectorF_relaxed, _hyp_sectorF_relaxed,
                    _conc_corF, "Re Q > 1 - gamma alone does not give the conclusion", converse=True),
        TheoremCase("planted-defect", _build_ez, _hyp_ez, _conc_planted,
                    "cor-ez with the conclusion margin negated", converse=True),
    ]


_REGISTRY: dict[str, TheoremCase] | None = None


def registry(include_controls: bool = True) -> list[TheoremCase]:
    """All theorem cases in a stable order; controls (converse, planted) last."""
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = {c.id: c for c in _cases()}
    cases = list(_REGISTRY.values())
    return cases if include_controls else [c for c in cases if not c.converse]


def get_case(case_id: str) -> TheoremCase:
    registry()
    try:
        return _REGISTRY[case_id]
    except KeyError:
        raise UnknownCase(case_id) from None


def converse_of(case_id: str) -> TheoremCase:
    return get_case(f"converse-of({case_id})")
