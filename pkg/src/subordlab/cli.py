"""Command-line front end.

Series arguments are comma-separated coefficient lists (``1,0.5,0.25`` or
``1,2+1j``) or ``@path.json`` files in the series JSON format. Normalised
functions ``f = z + ...`` are given by their full coefficient list, leading
zero included.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys

import numpy as np

from .briot_bouquet import BBParams, bb_operator, bb_solve_from_target, check_inequalities, odl_closed_form
from .config import Config, MAX_ORDER, MIN_ORDER
from .dominants import TAGS, BoundaryCurve, DominantSpec, boundary_curve
from .errors import IoFailure, SubordlabError
from .harness import TrialReport, falsify, get_case, registry, run_case
from .harness.runner import persist_report
from .integral_ops import (
    OperatorParams,
    bernardi_general,
    bernardi_power,
    existence_operator,
    two_function_operator,
)
from .power_series import TaylorSeries, ValuedSeries
from .subordination import is_subordinate

log = logging.getLogger("subordlab")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# --------------------------------------------------------------------------
# argument helpers


def _series(text: str, order: int) -> TaylorSeries:
    if text.startswith("@"):
        try:
            with open(text[1:]) as fh:
                s = TaylorSeries.from_json(json.load(fh))
        except OSError as exc:
            raise IoFailure(str(exc)) from exc
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"bad series file {text[1:]}: {exc}") from exc
        return s
    try:
        coeffs = [complex(t.strip().replace(" ", "")) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"bad coefficient list {text!r}") from exc
    if not coeffs:
        raise UsageError("empty coefficient list")
    # short lists are polynomials; pad them to the working order
    return TaylorSeries(coeffs, max(order, len(coeffs) - 1))


def _number(text: str) -> complex | float:
    v = complex(text)
    return v.real if v.imag == 0 else v


def _dominant(args) -> DominantSpec:
    tag = args.dominant
    if tag == "half-plane":
        return DominantSpec.half_plane()
    if tag == "sector":
        return DominantSpec.sector(args.gamma)
    if tag == "exp":
        return DominantSpec.exp()
    if tag == "sqrt-shift":
        return DominantSpec.sqrt_shift()
    if tag == "janowski":
        return DominantSpec.janowski(args.A, args.B)
    if tag == "sigmoid":
        return DominantSpec.sigmoid()
    if tag == "exp-linear":
        return DominantSpec.exp_linear()
    if tag == "crescent":
        return DominantSpec.crescent()
    if tag == "slit-a":
        return DominantSpec.slit_a(args.a)
    if tag == "opendoor-a":
        return DominantSpec.opendoor_a(args.n, args.door_alpha, args.door_beta)
    if tag == "opendoor-b":
        return DominantSpec.opendoor_b(args.n, args.door_alpha, args.door_beta)
    raise UsageError(f"dominant {tag!r} cannot be built from flags")


def _add_dominant(p: argparse.ArgumentParser, door_flags=True):
    p.add_argument("--dominant", required=True, choices=[t for t in TAGS if t != "custom"])
    p.add_argument("--gamma", type=float, default=1.0, help="sector order")
    p.add_argument("--A", type=float, default=1.0, help="Janowski A")
    p.add_argument("--B", type=float, default=-1.0, help="Janowski B")
    p.add_argument("--a", type=float, default=1.0, help="slit parameter")
    p.add_argument("--n", type=int, default=1, help="open-door valuation")
    if door_flags:
        p.add_argument("--alpha", dest="door_alpha", type=float, default=0.0)
        p.add_argument("--beta", dest="door_beta", type=float, default=1.0)
    else:
        p.add_argument("--door-alpha", dest="door_alpha", type=float, default=0.0)
        p.add_argument("--door-beta", dest="door_beta", type=float, default=1.0)


def _add_ab(p: argparse.ArgumentParser):
    p.add_argument("--alpha", type=_number, default=0.0)
    p.add_argument("--beta", type=_number, default=1.0)


# --------------------------------------------------------------------------
# output


def _write(text: str, output: str | None):
    if output in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(output, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(f"cannot write {output}: {exc}") from exc


def emit_plot_data(obj, fmt: str = "csv", output: str | None = None) -> str:
    """Serialise a boundary curve, trial report or series for external plotting.

    Curves give CSV ``theta,re,im`` or JSON with the same columns; reports
    and series are JSON only. The text is returned and, when ``output`` is
    given, written there (``-`` for stdout).
    """
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown format {fmt!r}")
    if isinstance(obj, BoundaryCurve):
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["theta", "re", "im"])
            for t, x, y in obj.rows():
                w.writerow([repr(t), repr(x), repr(y)])
            text = buf.getvalue()
        else:
            text = json.dumps({"radius": obj.radius, "theta": obj.thetas.tolist(),
                               "re": obj.points.real.tolist(), "im": obj.points.imag.tolist()}) + "\n"
    elif isinstance(obj, TrialReport):
        if fmt != "json":
            raise ValueError("trial reports are emitted as JSON")
        text = json.dumps(obj.to_json(), indent=2)
    elif isinstance(obj, (TaylorSeries, ValuedSeries)):
        if fmt != "json":
            raise ValueError("series are emitted as JSON")
        text = json.dumps(obj.to_json()) + "\n"
    else:
        raise TypeError(f"cannot emit {type(obj).__name__}")
    if output is not None:
        if isinstance(obj, TrialReport) and output != "-":
            persist_report(obj, output)
        else:
            _write(text, output)
    return text


def _emit_series(s, args):
    emit_plot_data(s, "json", args.output or "-")


# --------------------------------------------------------------------------
# subcommands


def cmd_subord_check(args, cfg) -> int:
    p = _series(args.p, cfg.order)
    v = is_subordinate(p, _dominant(args), cfg, args.path,
                       polynomial=True if args.polynomial else None)
    print(f"holds={v.label} margin={v.margin:.6g} path={v.path}")
    if args.verbose:
        print(json.dumps(v.to_json(), indent=2))
    return EXIT_OK if v.holds is True else EXIT_FAIL


def cmd_bb(args, cfg) -> int:
    params = BBParams(args.alpha, args.beta, args.n)
    Q = _series(args.Q, cfg.order)
    if args.action == "apply":
        _emit_series(bb_operator(_series(args.p, cfg.order), Q, params), args)
        return EXIT_OK
    if args.action == "solve":
        if args.closed_form:
            p = odl_closed_form(Q, params)
        else:
            p = bb_solve_from_target(_series(args.psi, cfg.order), Q, params)
        _emit_series(p, args)
        return EXIT_OK
    kw = {"Q": Q, "params": params, "alpha": args.alpha, "beta": args.beta}
    if args.dominant:
        kw["h"] = _dominant(args)
    for name in ("k", "M", "gamma_", "A_", "B_", "D", "E"):
        val = getattr(args, name)
        if val is not None:
            kw[name.rstrip("_")] = val
    try:
        r = check_inequalities(args.case, cfg=cfg, **kw)
    except KeyError as exc:
        raise UsageError(f"case {args.case} needs --{exc.args[0]}") from exc
    print(f"holds={str(r.holds).lower()} margin={r.margin:.6g}")
    if args.verbose:
        print(json.dumps({k: _plain(v) for k, v in r.witness.items()}))
    return EXIT_OK if r.holds else EXIT_FAIL


def _plain(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, np.generic):
        return v.item()
    return v


def _normalised(text, order) -> ValuedSeries:
    return ValuedSeries.from_taylor(_series(text, order))


def cmd_iop(args, cfg) -> int:
    params = OperatorParams(args.alpha, args.beta, lam=1 - args.delta, eta=1 - args.gamma,
                            gamma=args.gamma, delta=args.delta, sigma=args.sigma)
    one = "1"
    if args.operator == "bernardi-power":
        F = bernardi_power(_normalised(args.f, cfg.order), params)
    elif args.operator == "bernardi-general":
        F = bernardi_general(_normalised(args.f, cfg.order), _normalised(args.g, cfg.order), params)
    elif args.operator == "existence":
        F = existence_operator(_normalised(args.g, cfg.order), _series(args.varphi or one, cfg.order),
                               _series(args.phi or one, cfg.order), params, cfg)
    else:
        F = two_function_operator(_normalised(args.f, cfg.order), _normalised(args.g, cfg.order),
                                  _series(args.phi or one, cfg.order), params)
    _emit_series(F.to_taylor(), args)
    return EXIT_OK


def _selected(case: str, controls: bool):
    if case == "all":
        return [c.id for c in registry(include_controls=controls)]
    return [get_case(c).id for c in case.split(",")]


def cmd_verify(args, cfg) -> int:
    reports = []
    for cid in _selected(args.case, args.include_controls):
        r = run_case(cid, args.trials, cfg.seed, cfg, workers=args.workers)
        reports.append(r)
        print(r.summary())
    bad = [r for r in reports if r.failures and not get_case(r.case_id).converse]
    if args.report:
        _write(json.dumps([r.to_json() for r in reports], indent=2), args.report)
    print(f"{len(reports)} cases, {sum(r.failures for r in reports)} failures, "
          f"{len(bad)} cases with failures")
    return EXIT_FAIL if bad else EXIT_OK


def cmd_falsify(args, cfg) -> int:
    case = get_case(f"converse-of({args.case})" if args.converse else args.case)
    r = falsify(case.id, args.budget, cfg.seed, cfg, stop_after=args.stop_after)
    print(r.summary())
    if args.report:
        persist_report(r, args.report)
    if args.verbose and r.witness:
        print(json.dumps(r.witness["u"]))
    # a theorem must survive the search; a control must not
    found = r.failures > 0
    return EXIT_FAIL if found != case.converse else EXIT_OK


def cmd_curve(args, cfg) -> int:
    curve = boundary_curve(_dominant(args), args.r, args.points)
    emit_plot_data(curve, args.format, args.output or "-")
    return EXIT_OK


# --------------------------------------------------------------------------


def _global_options(p: argparse.ArgumentParser, suppress: bool):
    """Options accepted both before and after the subcommand."""
    def d(v):
        return argparse.SUPPRESS if suppress else v

    p.add_argument("--order", type=int, default=d(64), help=f"truncation order N in [{MIN_ORDER}, {MAX_ORDER}]")
    p.add_argument("--samples", type=int, default=d(1024), help="boundary samples M")
    p.add_argument("--tolerance", type=float, default=d(1e-4))
    p.add_argument("--radii", type=str, default=d(None), help="comma-separated test radii")
    p.add_argument("--seed", type=int, default=d(0), help="overridden by SUBORDLAB_SEED")
    p.add_argument("--output", default=d(None), help="output path, '-' for stdout")
    p.add_argument("--verbose", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="subordlab", description="Differential subordination toolkit.")
    _global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    s = sub.add_parser("subord", help="subordination tests")
    ssub = s.add_subparsers(dest="action", parser_class=_Parser, required=True)
    sc = ssub.add_parser("check", help="decide p < h", parents=[common])
    sc.add_argument("--p", required=True)
    sc.add_argument("--path", choices=("auto", "predicate", "winding"), default="auto")
    sc.add_argument("--polynomial", action="store_true", help="read p as an exact polynomial")
    _add_dominant(sc)
    sc.set_defaults(func=cmd_subord_check)

    b = sub.add_parser("bb", help="generalized Briot-Bouquet operator")
    bsub = b.add_subparsers(dest="action", parser_class=_Parser, required=True)
    ba = bsub.add_parser("apply", help="p Q + z p'/(beta p + alpha)", parents=[common])
    ba.add_argument("--p", required=True)
    bs = bsub.add_parser("solve", help="solve for p given the right-hand side", parents=[common])
    bs.add_argument("--psi", default="1")
    bs.add_argument("--closed-form", action="store_true", help="closed form (right-hand side 1)")
    bc = bsub.add_parser("check", help="evaluate a hypothesis inequality", parents=[common])
    bc.add_argument("--case", required=True)
    bc.add_argument("--dominant", default=None, choices=[t for t in TAGS if t != "custom"])
    bc.add_argument("--k", type=float, default=None)
    bc.add_argument("--M", type=float, default=None)
    bc.add_argument("--gamma", dest="gamma_", type=float, default=None)
    bc.add_argument("--A", dest="A_", type=float, default=None)
    bc.add_argument("--B", dest="B_", type=float, default=None)
    bc.add_argument("--D", type=float, default=None)
    bc.add_argument("--E", type=float, default=None)
    bc.add_argument("--a", type=float, default=1.0)
    bc.add_argument("--door-alpha", dest="door_alpha", type=float, default=0.0)
    bc.add_argument("--door-beta", dest="door_beta", type=float, default=1.0)
    for q in (ba, bs, bc):
        q.add_argument("--Q", default="1")
        _add_ab(q)
        if q is not bc:
            q.add_argument("--n", type=int, default=1)
        q.set_defaults(func=cmd_bb)
    bc.add_argument("--n", type=int, default=1)

    i = sub.add_parser("iop", help="integral operators")
    isub = i.add_subparsers(dest="action", parser_class=_Parser, required=True)
    ia = isub.add_parser("apply", parents=[common])
    ia.add_argument("--operator", "--which", dest="operator", required=True,
                    choices=("bernardi-power", "bernardi-general", "existence", "two-function"))
    ia.add_argument("--f", default="0,1")
    ia.add_argument("--g", default="0,1")
    ia.add_argument("--varphi", default=None)
    ia.add_argument("--phi", default=None)
    _add_ab(ia)
    ia.add_argument("--gamma", type=_number, default=0.0)
    ia.add_argument("--delta", type=_number, default=0.0)
    ia.add_argument("--sigma", type=_number, default=0.0)
    ia.set_defaults(func=cmd_iop)

    v = sub.add_parser("verify", help="run theorem cases", parents=[common])
    v.add_argument("--case", default="all", help="case id, comma list, or 'all'")
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--include-controls", action="store_true")
    v.add_argument("--report", "--out", dest="report", default=None, help="write all reports as JSON")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("falsify", help="counterexample search", parents=[common])
    f.add_argument("--case", required=True)
    f.add_argument("--budget", type=int, default=500)
    f.add_argument("--stop-after", type=int, default=None)
    f.add_argument("--converse", action="store_true", help="search the converse of the case")
    f.add_argument("--report", "--out", dest="report", default=None)
    f.set_defaults(func=cmd_falsify)

    c = sub.add_parser("curve", help="boundary curve of a dominant", parents=[common])
    _add_dominant(c)
    c.add_argument("--r", type=float, default=0.999)
    c.add_argument("--points", type=int, default=256)
    c.add_argument("--format", choices=("csv", "json"), default="csv")
    c.set_defaults(func=cmd_curve)
    return parser


def _config(args) -> Config:
    seed = args.seed
    env = os.environ.get("SUBORDLAB_SEED")
    if env:
        try:
            seed = int(env)
        except ValueError as exc:
            raise UsageError(f"SUBORDLAB_SEED must be an integer, got {env!r}") from exc
    kw = {"order": args.order, "samples": args.samples, "tolerance": args.tolerance, "seed": seed}
    if args.radii:
        kw["test_radii"] = tuple(float(r) for r in args.radii.split(","))
    try:
        return Config(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def dispatch(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                            format="%(levelname)s %(message)s")
        cfg = _config(args)
        return args.func(args, cfg)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    except (IoFailure, OSError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except KeyError as exc:
        print(f"unknown: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SubordlabError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main() -> None:
    sys.exit(dispatch())
