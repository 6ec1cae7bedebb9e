"""Numerical subordination tests and construction of subordinate functions."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np
from scipy.spatial import cKDTree

from .config import MIN_ORDER, Config, get_config
from .dominants import (
    BoundaryCurve,
    DominantSpec,
    boundary_curve,
    dominant_series,
    evaluate_dominant,
    membership_slack,
)
from .errors import PointOnCurve
from .power_series import (
    SchwarzSeries,
    TaylorSeries,
    boundary_profile,
    compose,
    schwarz_sample,
    tail_estimate,
)

__all__ = [
    "SubordinationVerdict",
    "make_subordinate",
    "winding_number",
    "winding_numbers",
    "distance_to_curve",
    "is_subordinate",
    "schwarz_sample",
]

Analytic = Union[TaylorSeries, Callable]


@dataclass(frozen=True)
class SubordinationVerdict:
    """Outcome of ``p < h``: ``holds`` is True, False or None (inconclusive)."""

    holds: bool | None
    margin: float
    witness: complex | None
    config_used: dict
    path: str = "predicate"
    radius_margins: tuple = field(default=())
    skipped_radii: tuple = field(default=())

    @property
    def label(self) -> str:
        return {True: "true", False: "false", None: "inconclusive"}[self.holds]

    def to_json(self) -> dict:
        w = self.witness
        return {
            "holds": self.label,
            "margin": None if math.isnan(self.margin) else self.margin,
            "witness": None if w is None else [w.real, w.imag],
            "path": self.path,
            "radius_margins": [[r, m] for r, m in self.radius_margins],
            "skipped_radii": list(self.skipped_radii),
            "config_used": self.config_used,
        }


def make_subordinate(h: DominantSpec, w: SchwarzSeries) -> TaylorSeries:
    """Series of ``h o w``, subordinate to ``h`` by construction."""
    return compose(dominant_series(h, w.order), w)


# --------------------------------------------------------------------------
# winding numbers


def winding_number(curve: BoundaryCurve | np.ndarray, w: complex) -> int:
    """Total change of ``arg(P - w)`` around the closed polygon, in turns."""
    pts = curve.points if isinstance(curve, BoundaryCurve) else np.asarray(curve, dtype=complex)
    d = pts - w
    if np.min(np.abs(d)) <= 1e-8:
        raise PointOnCurve(f"{w} lies on the curve")
    steps = np.angle(np.roll(d, -1) / d)
    return int(round(steps.sum() / (2 * math.pi)))


def winding_numbers(curve: BoundaryCurve | np.ndarray, ws) -> np.ndarray:
    """Winding numbers of many points at once by signed ray crossings.

    Agrees with :func:`winding_number` for points off the curve. Points are
    sorted by imaginary part so each edge only tests the points whose
    ordinate lies in its span.
    """
    pts = curve.points if isinstance(curve, BoundaryCurve) else np.asarray(curve, dtype=complex)
    ws = np.atleast_1d(np.asarray(ws, dtype=complex))
    order = np.argsort(ws.imag)
    ys = ws.imag[order]
    xs = ws.real[order]
    a, b = pts, np.roll(pts, -1)
    up = (a.imag <= b.imag)
    lo_y = np.where(up, a.imag, b.imag)
    hi_y = np.where(up, b.imag, a.imag)
    # an upward edge counts points with a.y <= y < b.y, a downward one b.y <= y < a.y
    start = np.searchsorted(ys, lo_y, side="left")
    stop = np.searchsorted(ys, hi_y, side="left")
    counts = np.maximum(stop - start, 0)
    total = int(counts.sum())
    wn = np.zeros(ws.size, dtype=np.int64)
    if total:
        edge = np.repeat(np.arange(pts.size), counts)
        offsets = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
        idx = np.repeat(start, counts) + offsets
        ax, ay, bx, by = a.real[edge], a.imag[edge], b.real[edge], b.imag[edge]
        cross = (bx - ax) * (ys[idx] - ay) - (xs[idx] - ax) * (by - ay)
        sign = np.where(up[edge], 1, -1)
        hit = np.where(up[edge], cross > 0, cross < 0)
        np.add.at(wn, idx[hit], sign[hit])
    out = np.empty_like(wn)
    out[order] = wn
    return out


def distance_to_curve(curve: BoundaryCurve, ws, k: int = 4) -> np.ndarray:
    """Distance from each point to the closed polygon (nearest-edge search)."""
    pts = curve.points
    ws = np.atleast_1d(np.asarray(ws, dtype=complex))
    tree = _kdtree(curve)
    kk = min(k, pts.size)
    _, near = tree.query(np.c_[ws.real, ws.imag], k=kk)
    near = np.atleast_2d(near).reshape(ws.size, kk)
    best = np.full(ws.size, np.inf)
    n = pts.size
    for shift in (0, -1):
        i = (near + shift) % n
        a, b = pts[i], pts[(i + 1) % n]
        ab = b - a
        denom = np.where(np.abs(ab) > 0, np.abs(ab) ** 2, 1.0)
        t = np.clip(((ws[:, None] - a) * np.conj(ab)).real / denom, 0, 1)
        d = np.abs(ws[:, None] - (a + t * ab)).min(axis=1)
        best = np.minimum(best, d)
    return best


_TREES: dict[int, tuple[BoundaryCurve, cKDTree]] = {}


def _kdtree(curve: BoundaryCurve) -> cKDTree:
    hit = _TREES.get(id(curve))
    if hit is not None and hit[0] is curve:
        return hit[1]
    if len(_TREES) > 64:
        _TREES.clear()
    tree = cKDTree(np.c_[curve.points.real, curve.points.imag])
    _TREES[id(curve)] = (curve, tree)
    return tree


def signed_distance(curve: BoundaryCurve, ws) -> np.ndarray:
    """Distance to the curve, positive for points the curve winds around once."""
    ws = np.atleast_1d(np.asarray(ws, dtype=complex))
    inside = winding_numbers(curve, ws) == 1
    d = distance_to_curve(curve, ws)
    return np.where(inside, d, -d)


# --------------------------------------------------------------------------


def reads_as_polynomial(p: TaylorSeries, polynomial: bool | None = None) -> bool:
    if polynomial is None:
        return p.order < MIN_ORDER
    return polynomial


def _sample(p: Analytic, r: float, M: int) -> np.ndarray:
    if isinstance(p, TaylorSeries):
        return boundary_profile(p, r, M)
    z = r * np.exp(2j * np.pi * np.arange(M) / M)
    return np.asarray(p(z), dtype=complex)


def is_subordinate(p: Analytic, h: DominantSpec, cfg: Config | None = None,
                   path: str = "auto", polynomial: bool | None = None) -> SubordinationVerdict:
    """Decide ``p < h`` by image containment on circles inside the disk.

    ``p`` is a series or any vectorised callable. A series is read as a
    polynomial (exact, no tail) when ``polynomial`` is True; by default only
    series shorter than the minimum truncation order are. ``path`` selects ``predicate`` (exact image
    test), ``winding`` (containment in the image of ``|z| = cfg.r_h``) or
    ``auto`` (predicate when one exists). Radii where the series tail
    estimate exceeds ``cfg.tail_tol`` are skipped and reported.
    """
    cfg = cfg or get_config()
    if isinstance(p, TaylorSeries) and reads_as_polynomial(p, polynomial):
        p = p.with_order(max(cfg.order, p.order))
    use_pred = path == "predicate" or (path == "auto" and h.has_exact_membership)
    if path not in ("auto", "predicate", "winding"):
        raise ValueError(f"unknown path {path!r}")
    used = {"r_h": cfg.r_h, "M": cfg.samples, "tolerance": cfg.tolerance,
            "N": p.order if isinstance(p, TaylorSeries) else None}
    label = "predicate" if use_pred else "winding"

    p0 = complex(p.coeffs[0]) if isinstance(p, TaylorSeries) else complex(np.asarray(p(0.0)))
    gap = abs(p0 - complex(evaluate_dominant(h, 0.0)))
    if gap > 1e-8:
        used["r_p"] = []
        return SubordinationVerdict(False, -gap, 0j, used, label)

    curve = None if use_pred else boundary_curve(h, cfg.r_h, max(256, cfg.samples))
    margins, skipped = [], []
    best, witness = math.inf, None
    for r in cfg.test_radii:
        if isinstance(p, TaylorSeries) and tail_estimate(p, r) > cfg.tail_tol:
            skipped.append(r)
            continue
        w = _sample(p, r, cfg.samples)
        if use_pred:
            slack = membership_slack(h, w)
        else:
            slack = signed_distance(curve, w)
        slack = np.where(np.isnan(slack), -np.inf, slack)
        k = int(np.argmin(slack))
        margins.append((r, float(slack[k])))
        if slack[k] < best:
            best = float(slack[k])
            witness = complex(r * np.exp(2j * np.pi * k / cfg.samples))
    used["r_p"] = [r for r, _ in margins]
    if not margins:
        return SubordinationVerdict(None, math.nan, None, used, label, (), tuple(skipped))
    if best > cfg.tolerance:
        holds = True
    elif best < -cfg.tolerance:
        holds = False
    else:
        holds = None
    return SubordinationVerdict(holds, best, witness, used, label, tuple(margins), tuple(skipped))
