"""Command-line front end.

Exit codes: 0 success, 1 usage or configuration error, 2 inadmissible
sampling, 3 verification failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io
from .admissibility import check_generic
from .aperiodic import model_coefficients, simulate
from .exceptions import (
    AperiodicLTIError,
    ConfigError,
    InadmissibleSequenceError,
    ScheduleGenerationError,
)
from .lti_core import spectrum
from .periodic import (
    TABLE1_PERIODS,
    TABLE1_SYSTEM,
    check_periodic_resonance,
    dead_time_model,
    gain_identity,
)
from .validation import compare, convolution_oracle, state_update_oracle

EXIT_OK, EXIT_USAGE, EXIT_INADMISSIBLE, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for inadmissible sampling
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# tables


def coefficient_table(models):
    """Rows ``b_j``, ``a_i``, ``sum_b`` with one column per period."""
    header = ["parameter"] + [f"T0={io.fmt(m.T0)}" for m in models]
    m0 = models[0]
    start = 1 if m0.hold == "zoh" and all(m.b[0] == 0.0 for m in models) else 0
    rows = [[f"b_{j}"] + [m.b[j] for m in models] for j in range(start, m0.b.size)]
    rows += [[f"a_{i + 1}"] + [m.a[i] for m in models] for i in range(m0.n)]
    rows.append(["sum_b"] + [float(np.sum(m.b)) for m in models])
    if any(m.dead_shift for m in models):
        rows.append(["p"] + [m.dead_shift for m in models])
    return header, rows


def _human_table(header, rows):
    cells = [header] + [[r[0]] + [f"{v:.4f}" for v in r[1:]] for r in rows]
    widths = [max(len(row[c]) for row in cells) for c in range(len(header))]
    return "".join("  ".join(cell.rjust(w) if c else cell.ljust(w)
                             for c, (cell, w) in enumerate(zip(row, widths))) + "\n"
                   for row in cells)


def _models_doc(models):
    out = []
    for m in models:
        d = m.to_dict()
        d["sum_b"] = float(np.sum(m.b))
        if m.hold == "zoh":
            d["gain_residual"] = gain_identity(m)
        out.append(d)
    return out


def _periodic_models(cfg):
    sp = spectrum(cfg.system)
    models = []
    for T0 in cfg.T0:
        rep = check_periodic_resonance(sp, T0, cfg.thresholds)
        if not rep.admissible:
            return None, rep
        models.append(dead_time_model(cfg.system, T0, cfg.Td, cfg.hold, cfg.thresholds))
    return models, None


def _inadmissible(out, rep, what):
    names = ", ".join(f.condition for f in rep.resonances) or "degenerate determinant"
    out.write(io.dumps_json(rep.to_dict()))
    sys.stderr.write(f"inadmissible {what}: {names}\n")
    return EXIT_INADMISSIBLE


# --------------------------------------------------------------------------
# commands


def cmd_discretize(cfg, out):
    if not cfg.periodic:
        raise UsageError("discretize needs 'T0' (a period or a list of periods)")
    models, rep = _periodic_models(cfg)
    if rep is not None:
        return _inadmissible(out, rep, "period")
    if cfg.format == "json":
        out.write(io.dumps_json({"system": cfg.system.to_dict(), "hold": cfg.hold,
                                 "Td": cfg.Td, "models": _models_doc(models)}))
    else:
        out.write(io.write_csv(*coefficient_table(models)))
    return EXIT_OK


def cmd_table1(fmt, out):
    models = [dead_time_model(TABLE1_SYSTEM, T0, 0.0, "zoh") for T0 in TABLE1_PERIODS]
    header, rows = coefficient_table(models)
    if fmt == "json":
        out.write(io.dumps_json({"system": TABLE1_SYSTEM.to_dict(), "hold": "zoh",
                                 "models": _models_doc(models)}))
    elif fmt == "csv":
        out.write(io.write_csv(header, rows))
    else:
        out.write(_human_table(header, rows))
    return EXIT_OK


def _schedule(cfg):
    if cfg.periodic and len(cfg.T0) != 1:
        raise UsageError("this command takes a single period, not a sweep")
    return cfg.schedule_for()


def cmd_model(cfg, out, fail_fast=False):
    sched = _schedule(cfg)
    n = cfg.system.n
    if sched.K < n:
        raise UsageError(f"schedule has {len(sched)} instants; at least {n + 1} are needed")
    try:
        steps = model_coefficients(cfg.system, sched, cfg.hold, fail_fast=fail_fast,
                                   thresholds=cfg.thresholds)
    except InadmissibleSequenceError as exc:
        sys.stderr.write(f"inadmissible window at step {exc.step}: {exc}\n")
        return EXIT_INADMISSIBLE
    m = n + (cfg.hold == "zoh")
    t = sched.instants
    if cfg.format == "json":
        out.write(io.dumps_json([{"k": c.k, "t": t[c.k], "status": c.status,
                                  "delta_magnitude": c.delta_magnitude,
                                  "f": c.f, "g": c.g} for c in steps]))
    else:
        header = (["k", "t", "status", "delta_magnitude"]
                  + [f"f_{i}" for i in range(1, n + 1)] + [f"g_{j}" for j in range(m)])
        rows = [[c.k, t[c.k], c.status, c.delta_magnitude, *c.f, *c.g] for c in steps]
        out.write(io.write_csv(header, rows))
    return EXIT_OK


def cmd_simulate(cfg, out):
    sched = _schedule(cfg)
    u = cfg.input_vector(len(sched))
    if cfg.periodic:
        rep = check_periodic_resonance(spectrum(cfg.system), cfg.T0[0], cfg.thresholds)
        if not rep.admissible:
            return _inadmissible(out, rep, "period")
        y = dead_time_model(cfg.system, cfg.T0[0], cfg.Td, cfg.hold, cfg.thresholds).simulate(u)
    else:
        if cfg.Td:
            raise UsageError("dead time is supported with a constant period 'T0' only")
        try:
            y = simulate(cfg.system, sched, u, cfg.hold, cfg.thresholds)
        except InadmissibleSequenceError as exc:
            sys.stderr.write(f"inadmissible window at step {exc.step}: {exc}\n")
            return EXIT_INADMISSIBLE
    t = sched.instants
    if cfg.format == "json":
        out.write(io.dumps_json({"t": t, "u": u, "y": y}))
    else:
        out.write(io.write_csv(["k", "t", "u", "y"],
                               [[k, t[k], u[k], y[k]] for k in range(y.size)]))
    return EXIT_OK


def _overall(reports):
    verdicts = {r.verdict for r in reports}
    for v in ("inadmissible", "marginal"):
        if v in verdicts:
            return v
    return "admissible"


def cmd_validate(cfg, out):
    sp = spectrum(cfg.system)
    if cfg.periodic:
        keyed = [("T0", T0, check_periodic_resonance(sp, T0, cfg.thresholds)) for T0 in cfg.T0]
    else:
        sched = cfg.schedule_for()
        n = sp.n
        if sched.K < n:
            raise UsageError(f"schedule has {len(sched)} instants; at least {n + 1} are needed")
        keyed = [("k", k, check_generic(sp, sched.window(k, n), cfg.thresholds))
                 for k in range(n, sched.K + 1)]
    reports = [r for _, _, r in keyed]
    overall = _overall(reports)
    if cfg.format == "json":
        out.write(io.dumps_json({"verdict": overall,
                                 "windows": [{key: v, **r.to_dict()} for key, v, r in keyed]}))
    else:
        key = keyed[0][0]
        out.write(io.write_csv(
            [key, "verdict", "delta_magnitude", "conditions"],
            [[v, r.verdict, r.delta_magnitude, ";".join(f.condition for f in r.resonances)]
             for _, v, r in keyed]))
    if overall == "inadmissible":
        bad = next(f"{key}={io.fmt(v)}" for key, v, r in keyed if not r.admissible)
        sys.stderr.write(f"inadmissible sampling at {bad}\n")
        return EXIT_INADMISSIBLE
    return EXIT_OK


def cmd_verify(cfg, out):
    tol = cfg.tolerance
    results = []
    if cfg.periodic:
        sp = spectrum(cfg.system)
        for T0 in cfg.T0:
            rep = check_periodic_resonance(sp, T0, cfg.thresholds)
            if not rep.admissible:
                return _inadmissible(out, rep, "period")
            sched = cfg.schedule_for(T0)
            u = cfg.input_vector(len(sched))
            y = dead_time_model(cfg.system, T0, cfg.Td, cfg.hold, cfg.thresholds).simulate(u)
            y_ref = convolution_oracle(cfg.system, sched, u, cfg.hold, cfg.Td)
            results.append(("recursion_vs_convolution", T0, compare(y, y_ref, tol)))
            if cfg.hold == "zoh" and cfg.Td == 0:
                results.append(("convolution_vs_state_update", T0,
                                compare(y_ref, state_update_oracle(cfg.system, sched, u), tol)))
    else:
        if cfg.Td:
            raise UsageError("dead time is supported with a constant period 'T0' only")
        sched = cfg.schedule_for()
        u = cfg.input_vector(len(sched))
        try:
            y = simulate(cfg.system, sched, u, cfg.hold, cfg.thresholds)
        except InadmissibleSequenceError as exc:
            sys.stderr.write(f"inadmissible window at step {exc.step}: {exc}\n")
            return EXIT_INADMISSIBLE
        y_ref = convolution_oracle(cfg.system, sched, u, cfg.hold)
        results.append(("recursion_vs_convolution", None, compare(y, y_ref, tol)))
        if cfg.hold == "zoh":
            results.append(("convolution_vs_state_update", None,
                            compare(y_ref, state_update_oracle(cfg.system, sched, u), tol)))
    if cfg.format == "json":
        out.write(io.dumps_json([{"check": name, "T0": T0, **r.to_dict()}
                                 for name, T0, r in results]))
    else:
        out.write(io.write_csv(
            ["check", "T0", "max_abs_error", "max_rel_error", "index_of_worst",
             "tolerance", "pass"],
            [[name, "" if T0 is None else T0, r.max_abs_error, r.max_rel_error,
              r.index_of_worst, r.tolerance_used, str(r.passed).lower()]
             for name, T0, r in results]))
    if not all(r.passed for _, _, r in results):
        sys.stderr.write("verification failed\n")
        return EXIT_VERIFY
    return EXIT_OK


# --------------------------------------------------------------------------
# entry point


def build_parser():
    p = _Parser(prog="aperiodic-lti",
                description="Discretize LTI systems under periodic or aperiodic sampling.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, config_required=True):
        sp.add_argument("--config", required=config_required, metavar="PATH",
                        help="JSON run configuration")
        sp.add_argument("--format", choices=io.FORMATS, help="output format (default: config)")
        sp.add_argument("--seed", type=int, help="seed for random inputs and schedules")
        sp.add_argument("--tolerance", type=float, help="verification tolerance")
        sp.add_argument("--output", "-o", metavar="PATH", help="write to a file, not stdout")

    common(sub.add_parser("discretize", help="periodic coefficient table over T0"))
    m = sub.add_parser("model", help="per-step aperiodic coefficients")
    common(m)
    m.add_argument("--fail-fast", action="store_true",
                   help="stop with exit code 2 at the first inadmissible window")
    common(sub.add_parser("simulate", help="output sequence"))
    common(sub.add_parser("validate-sequence", help="admissibility of the sampling"))
    common(sub.add_parser("verify", help="compare against the convolution oracle"))
    t = sub.add_parser("table1", help="built-in third-order example over T0 = 2..12")
    t.add_argument("--format", choices=("text",) + io.FORMATS, default="text")
    t.add_argument("--output", "-o", metavar="PATH")
    return p


def _dispatch(args, out):
    if args.command == "table1":
        return cmd_table1(args.format, out)
    cfg = io.load_config(args.config).with_overrides(
        format=args.format, seed=args.seed, tolerance=args.tolerance)
    if args.command == "discretize":
        return cmd_discretize(cfg, out)
    if args.command == "model":
        return cmd_model(cfg, out, fail_fast=args.fail_fast)
    if args.command == "simulate":
        return cmd_simulate(cfg, out)
    if args.command == "validate-sequence":
        return cmd_validate(cfg, out)
    return cmd_verify(cfg, out)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.output:
            with open(args.output, "w", encoding="utf-8", newline="") as fh:
                return _dispatch(args, fh)
        return _dispatch(args, sys.stdout)
    except InadmissibleSequenceError as exc:
        sys.stderr.write(f"inadmissible: {exc}\n")
        return EXIT_INADMISSIBLE
    except (UsageError, ConfigError, ScheduleGenerationError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except AperiodicLTIError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
