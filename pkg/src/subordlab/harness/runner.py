"""Randomized trial runner, falsifier and report persistence."""
from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from ..config import Config, get_config
from ..errors import GeneratorStarved, IoFailure
from ..power_series import TaylorSeries, ValuedSeries
from .cases import TheoremCase, get_case
from .common import Check

MAX_RETRIES = 50
STARVED_RATE = 0.01


@dataclass
class TrialReport:
    """Outcome of running one case; ``wall_time`` is excluded from equality.

    ``passes + inconclusive + failures`` counts every trial. Trials whose
    retries ran out are inconclusive and are also tallied in ``skipped``.
    """

    case_id: str
    seed: int
    trials: int
    passes: int = 0
    inconclusive: int = 0
    failures: int = 0
    skipped: int = 0
    attempts: int = 0
    worst_margin: float = math.inf
    witness: dict | None = None
    starved: bool = False
    config: dict = field(default_factory=dict)
    wall_time: float = field(default=0.0, compare=False)

    @property
    def evaluated(self) -> int:
        """Trials whose hypothesis was met and whose conclusion was evaluated."""
        return self.passes + self.failures + self.inconclusive - self.skipped

    @property
    def inconclusive_rate(self) -> float:
        total = self.passes + self.failures + self.inconclusive
        return self.inconclusive / total if total else 0.0

    def to_json(self) -> dict:
        d = asdict(self)
        d["worst_margin"] = _num(self.worst_margin)
        return d

    @classmethod
    def from_json(cls, d: dict) -> "TrialReport":
        d = dict(d)
        wm = d.get("worst_margin")
        d["worst_margin"] = math.inf if wm is None else float(wm)
        return cls(**d)

    def summary(self) -> str:
        tag = " starved" if self.starved else ""
        return (f"{self.case_id}: {self.passes} pass, {self.failures} fail, "
                f"{self.inconclusive} inconclusive ({self.skipped} skipped), "
                f"worst margin {self.worst_margin:.3g}{tag}")


def _num(x):
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return None
    return float(x)


def _encode(v):
    """JSON form of instance values for witnesses."""
    if isinstance(v, TaylorSeries):
        return v.to_json()
    if isinstance(v, ValuedSeries):
        return v.to_json()
    if hasattr(v, "to_json"):
        return v.to_json()
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (float, int, str, bool)) or v is None:
        return v
    if isinstance(v, (tuple, list)):
        return [_encode(x) for x in v]
    if isinstance(v, np.generic):
        return _encode(v.item())
    if hasattr(v, "series"):
        return {"series": v.series.to_json(), "margin": v.margin}
    return repr(v)


def _witness(u, inst, check: Check) -> dict:
    return {
        "u": [float(x) for x in u],
        "margin": _num(check.margin),
        "where": None if check.where is None else [check.where.real, check.where.imag],
        "instance": {k: _encode(v) for k, v in inst.items()},
    }


@dataclass
class _Outcome:
    status: str  # pass, fail, inconclusive, skipped
    attempts: int
    margin: float = math.nan
    u: np.ndarray | None = None
    inst: dict | None = None
    check: Check | None = None


def _attempt(case: TheoremCase, u, cfg: Config):
    """Build, gate and evaluate one point; returns (hypothesis_ok, instance, check)."""
    try:
        inst = case.build(u, cfg)
        hyp = case.hypothesis(inst, cfg)
    except (ArithmeticError, ValueError, FloatingPointError):
        return False, None, None
    if hyp.holds is not True:
        return False, inst, None
    try:
        con = case.conclusion(inst, cfg)
    except (ArithmeticError, ValueError, FloatingPointError) as exc:
        con = Check(None, math.nan, None, {"error": str(exc)})
    return True, inst, con


def _trial(case: TheoremCase, seed: int, idx: int, cfg: Config) -> _Outcome:
    rng = np.random.default_rng([seed, idx])
    for attempt in range(1, MAX_RETRIES + 1):
        u = rng.random(case.dim)
        with np.errstate(all="ignore"):
            ok, inst, con = _attempt(case, u, cfg)
        if ok:
            status = con.label
            return _Outcome(status, attempt, con.margin, u, inst, con)
    return _Outcome("skipped", MAX_RETRIES)


def _chunk(args):
    case_id, seed, indices, cfg = args
    case = get_case(case_id)
    out = []
    for i in indices:
        o = _trial(case, seed, i, cfg)
        # instances only travel back for the worst trial, which is rebuilt locally
        out.append((i, o.status, o.attempts, o.margin))
    return out


def _fold(report: TrialReport, status: str, attempts: int):
    report.attempts += attempts
    if status == "pass":
        report.passes += 1
    elif status == "fail":
        report.failures += 1
    elif status == "inconclusive":
        report.inconclusive += 1
    else:
        report.skipped += 1
        report.inconclusive += 1


def run_case(case_id: str, trials: int = 100, seed: int | None = None, cfg: Config | None = None,
             workers: int = 1, strict_starvation: bool = False) -> TrialReport:
    """Run ``trials`` independent trials of a case.

    Trial ``i`` draws from ``default_rng([seed, i])`` so results do not depend
    on ``workers``. A case whose hypothesis is met in fewer than 1% of
    attempts is flagged ``starved``; with ``strict_starvation`` that raises.
    """
    cfg = cfg or get_config()
    seed = cfg.seed if seed is None else seed
    case = get_case(case_id)
    report = TrialReport(case_id, seed, trials, config=cfg.to_dict())
    t0 = time.perf_counter()
    if workers > 1 and trials > 1:
        parts = [list(range(trials))[k::workers] for k in range(workers)]
        with ProcessPoolExecutor(workers) as pool:
            rows = [r for chunk in pool.map(_chunk, [(case_id, seed, p, cfg) for p in parts]) for r in chunk]
        rows.sort()
    else:
        rows = _chunk((case_id, seed, range(trials), cfg))
    worst_idx = None
    for i, status, attempts, margin in rows:
        _fold(report, status, attempts)
        if status != "skipped" and not math.isnan(margin) and margin < report.worst_margin:
            report.worst_margin, worst_idx = margin, i
    if worst_idx is not None:
        o = _trial(case, seed, worst_idx, cfg)
        report.witness = _witness(o.u, o.inst, o.check)
        report.witness["trial"] = worst_idx
    met = report.evaluated
    report.starved = report.attempts > 0 and met < STARVED_RATE * report.attempts
    report.wall_time = time.perf_counter() - t0
    if report.starved and strict_starvation:
        raise GeneratorStarved(f"{case_id}: hypothesis met in {met} of {report.attempts} attempts")
    return report


def _refine(case: TheoremCase, u, margin, cfg: Config, steps=(0.1, 0.03, 0.01), rounds=2):
    """Coordinate-wise descent on the conclusion margin from a starting point."""
    best_u, best = np.array(u, dtype=float), margin
    for step in steps:
        for _ in range(rounds):
            improved = False
            for j in range(best_u.size):
                for sgn in (1, -1):
                    v = best_u.copy()
                    v[j] = min(max(v[j] + sgn * step, 0.0), 1.0 - 1e-12)
                    with np.errstate(all="ignore"):
                        ok, _, con = _attempt(case, v, cfg)
                    if ok and con.holds is not None and con.margin < best:
                        best_u, best, improved = v, con.margin, True
            if not improved:
                break
    return best_u, best


def falsify(case_id: str, budget: int = 500, seed: int | None = None, cfg: Config | None = None,
            refine: int = 5, stop_after: int | None = None) -> TrialReport:
    """Search for counterexamples.

    Random points are evaluated first; the ``refine`` smallest positive
    margins are then pushed down by coordinate descent. With ``stop_after``
    the search ends once that many failures are found.
    """
    cfg = cfg or get_config()
    seed = cfg.seed if seed is None else seed
    case = get_case(case_id)
    report = TrialReport(case_id, seed, budget, config=cfg.to_dict())
    t0 = time.perf_counter()
    found = []  # (margin, index, u)
    for i in range(budget):
        o = _trial(case, seed, i, cfg)
        _fold(report, o.status, o.attempts)
        if o.status != "skipped" and not math.isnan(o.margin):
            found.append((o.margin, i, o.u))
        if stop_after is not None and report.failures >= stop_after:
            report.trials = i + 1
            break
    found.sort(key=lambda t: t[0])
    worst = found[0] if found else None
    if refine and found and found[0][0] > 0:
        for margin, i, u in found[:refine]:
            v, m = _refine(case, u, margin, cfg)
            if m < worst[0]:
                worst = (m, i, v)
                if m < 0:
                    break
        if worst[0] < 0:
            # the refined point counts as one more evaluated trial
            report.trials += 1
            report.failures += 1
    if worst is not None:
        with np.errstate(all="ignore"):
            _, inst, con = _attempt(case, worst[2], cfg)
        report.worst_margin = worst[0]
        report.witness = _witness(worst[2], inst, con)
    report.starved = report.attempts > 0 and report.evaluated < STARVED_RATE * report.attempts
    report.wall_time = time.perf_counter() - t0
    return report


def persist_report(report: TrialReport, path: str | os.PathLike) -> None:
    try:
        with open(path, "w") as fh:
            json.dump(report.to_json(), fh, indent=2)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def load_report(path: str | os.PathLike) -> TrialReport:
    try:
        with open(path) as fh:
            return TrialReport.from_json(json.load(fh))
    except (OSError, json.JSONDecodeError, TypeError) as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
