"""Command-line front end.

Every subcommand writes a table (CSV by default, JSON with ``--format
json``) whose header carries the seed, trial count and package version,
and exits 0 only if all of its checks pass.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .classical import ClassicalModel, classical_chsh_max, classical_pair_correlation
from .correlation import (
    OPTIMAL_ANGLES,
    ChshSettings,
    analytic_correlation,
    chsh,
    pair_correlation_analytic,
    reference_frame_average,
)
from .cv import CvGenerator, cv_first_moment, cv_sample, cv_width
from .generators import ParticleKind
from .locality import DISTRIBUTION, SignalingFault, run_session, verify_no_signaling
from .measurement import direction_at, sequential_same_probability
from .montecarlo import ensemble_chsh, ensemble_correlation, singles_average

SE_TOL = 5.0
ANGLE_COLUMNS = {"theta", "a", "a_prime", "b", "b_prime"}
_PI_RE = re.compile(r"^([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\*?pi(?:/(\d+(?:\.\d*)?))?$")


class UsageError(Exception):
    pass


def parse_angle(text: str) -> float:
    """Radians, either a plain number or a multiple of pi such as ``3pi/8`` or ``-pi/4``."""
    text = text.strip().replace(" ", "")
    try:
        return float(text)
    except ValueError:
        pass
    m = _PI_RE.match(text)
    if not m:
        raise argparse.ArgumentTypeError(f"cannot parse angle {text!r}")
    k = m.group(1)
    mult = 1.0 if k in ("", "+") else -1.0 if k == "-" else float(k)
    div = float(m.group(2)) if m.group(2) else 1.0
    return mult * math.pi / div


def parse_sweep(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("sweep must be start:stop:steps")
    start, stop = parse_angle(parts[0]), parse_angle(parts[1])
    try:
        steps = int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError("steps must be an integer") from None
    if steps < 1:
        raise argparse.ArgumentTypeError("steps must be >= 1")
    if steps == 1:
        return [start]
    return [start + (stop - start) * i / (steps - 1) for i in range(steps)]


def parse_settings(text: str) -> tuple[float, float, float, float]:
    vals = [parse_angle(t) for t in text.split(",")]
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("settings must be a,a',b,b'")
    return tuple(vals)


# --- output ---------------------------------------------------------------

@dataclass
class Table:
    command: str
    metadata: dict
    columns: list[str]
    rows: list[dict] = field(default_factory=list)
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def _fmt(col: str, value) -> str:
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if col in ANGLE_COLUMNS:
            return format(value, ".15g")
        return repr(value)
    return str(value)


def _normalise(col: str, value):
    """Value as it will be read back from the file."""
    if isinstance(value, float) and col in ANGLE_COLUMNS:
        return float(format(value, ".15g"))
    return value


def _parse_cell(text: str):
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def render(table: Table, fmt: str) -> str:
    meta = dict(table.metadata)
    meta["checks"] = dict(table.checks)
    meta["passed"] = table.passed
    if fmt == "json":
        doc = {"metadata": meta,
               "columns": table.columns,
               "rows": [{c: _normalise(c, r[c]) for c in table.columns} for r in table.rows]}
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    buf.write("# " + json.dumps(meta, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for r in table.rows:
        w.writerow([_fmt(c, r[c]) for c in table.columns])
    return buf.getvalue()


def read_table(text: str) -> Table:
    """Parse output of :func:`render` (either format) back into a :class:`Table`."""
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        meta = dict(doc["metadata"])
    else:
        first, _, body = text.partition("\n")
        meta = json.loads(first[2:])
        reader = csv.reader(io.StringIO(body))
        cols = next(reader)
        doc = {"columns": cols,
               "rows": [{c: float(v) if c in ANGLE_COLUMNS else _parse_cell(v)
                         for c, v in zip(cols, row)} for row in reader]}
    checks = meta.pop("checks", {})
    meta.pop("passed", None)
    return Table(meta.get("command", ""), meta, list(doc["columns"]), list(doc["rows"]), checks)


def human(table: Table) -> str:
    widths = {c: max(len(c), *(len(_fmt(c, r[c])) for r in table.rows)) if table.rows else len(c)
              for c in table.columns}
    lines = ["  ".join(c.rjust(widths[c]) for c in table.columns)]
    for r in table.rows:
        lines.append("  ".join(_fmt(c, r[c]).rjust(widths[c]) for c in table.columns))
    for name, ok in table.checks.items():
        lines.append(f"[{'PASS' if ok else 'FAIL'}] {name}")
    return "\n".join(lines) + "\n"


# --- commands -------------------------------------------------------------

def _meta(args, **extra) -> dict:
    meta = {"command": args.command, "version": __version__, "seed": args.seed,
            "n_trials": args.samples}
    if getattr(args, "kind", None) is not None:
        meta["kind"] = args.kind.value
    meta.update(extra)
    return meta


def _angles(args, default: list[float]) -> list[float]:
    if args.theta is not None and args.sweep is not None:
        raise UsageError("--theta and --sweep are mutually exclusive")
    if args.sweep is not None:
        return args.sweep
    if args.theta is not None:
        return args.theta
    return default


def cmd_sweep(args) -> Table:
    kind = args.kind
    stop = "pi/2" if kind is ParticleKind.PHOTON else "pi"
    thetas = _angles(args, parse_sweep(f"0:{stop}:9"))
    b = direction_at(kind, 0.0)
    t = Table("sweep", _meta(args), ["theta", "analytic", "monte_carlo", "std_error",
                                      "classical_factorized"])
    ok = True
    for i, th in enumerate(thetas):
        a = direction_at(kind, th)
        exact = pair_correlation_analytic(kind, a, b)
        rep = ensemble_correlation(kind, a, b, args.samples, args.seed + i, workers=args.workers)
        cl = classical_pair_correlation(kind, ClassicalModel.FACTORIZED_PROJECTION, a, b)
        t.rows.append({"theta": th, "analytic": exact, "monte_carlo": rep.estimate,
                       "std_error": rep.std_error, "classical_factorized": cl})
        ok &= rep.deviation(exact) <= SE_TOL
    t.checks["monte_carlo_within_5se"] = bool(ok)
    return t


def cmd_chsh(args) -> Table:
    kind = args.kind
    if args.settings is not None:
        settings = ChshSettings.from_angles(kind, *args.settings)
    else:
        settings = ChshSettings.optimal(kind)
    angles = args.settings if args.settings is not None else OPTIMAL_ANGLES[kind]
    quantum = chsh(settings, analytic_correlation(kind))
    mc = ensemble_chsh(kind, settings, args.samples, args.seed, workers=args.workers)
    t = Table("chsh", _meta(args, settings=list(angles)), ["quantity", "value", "std_error"])
    t.rows.append({"quantity": "quantum_analytic", "value": quantum.value, "std_error": 0.0})
    t.rows.append({"quantity": "quantum_monte_carlo", "value": mc.value,
                   "std_error": mc.std_error})
    bounds_ok = True
    for model in ClassicalModel:
        at = chsh(settings, lambda x, y: classical_pair_correlation(kind, model, x, y))
        best = classical_chsh_max(kind, model)
        t.rows.append({"quantity": f"classical_{model.value}", "value": at.value,
                       "std_error": 0.0})
        t.rows.append({"quantity": f"classical_{model.value}_max", "value": best,
                       "std_error": 0.0})
        bounds_ok &= best <= 2.0 + 1e-9
    t.checks["monte_carlo_within_5se"] = mc.deviation(quantum.value) <= SE_TOL
    t.checks["classical_bound"] = bool(bounds_ok)
    return t


def cmd_sequential(args) -> Table:
    kind = args.kind
    thetas = _angles(args, parse_sweep("0:pi/2:5"))
    t = Table("sequential", _meta(args), ["theta", "analytic", "estimate", "std_error", "n_kept"])
    ok = True
    for i, th in enumerate(thetas):
        exact = math.cos(th) ** 2 if kind is ParticleKind.PHOTON else math.cos(th / 2) ** 2
        rep = sequential_same_probability(kind, th, args.samples, args.seed + i,
                                          workers=args.workers)
        t.rows.append({"theta": th, "analytic": exact, "estimate": rep.estimate,
                       "std_error": rep.std_error, "n_kept": rep.n_trials})
        if rep.std_error > 0:
            ok &= rep.deviation(exact) <= SE_TOL
        else:
            ok &= abs(rep.estimate - exact) < 1e-12
    t.checks["within_5se"] = bool(ok)
    return t


def cmd_singles(args) -> Table:
    kind = args.kind
    thetas = _angles(args, [i * math.pi / 8 for i in range(8)])
    t = Table("singles", _meta(args), ["theta", "estimate", "std_error"])
    bound = SE_TOL / math.sqrt(args.samples)
    ok = True
    for i, th in enumerate(thetas):
        rep = singles_average(kind, direction_at(kind, th), args.samples, args.seed + i,
                              workers=args.workers)
        t.rows.append({"theta": th, "estimate": rep.estimate, "std_error": rep.std_error})
        ok &= abs(rep.estimate) <= bound
    t.checks["within_5_over_sqrt_n"] = bool(ok)
    return t


def cmd_quadrature(args) -> Table:
    kind = args.kind
    nodes = args.nodes if args.nodes is not None else (
        256 if kind is ParticleKind.PHOTON else 10_000)
    tol = 1e-10 if kind is ParticleKind.PHOTON else 1e-3
    thetas = _angles(args, parse_sweep("0:pi:9"))
    b = direction_at(kind, 0.0)
    t = Table("quadrature", _meta(args, nodes=nodes, tolerance=tol),
              ["theta", "quadrature", "analytic", "abs_error"])
    ok = True
    for th in thetas:
        a = direction_at(kind, th)
        q = reference_frame_average(kind, a, b, nodes)
        exact = pair_correlation_analytic(kind, a, b)
        t.rows.append({"theta": th, "quadrature": q, "analytic": exact,
                       "abs_error": abs(q - exact)})
        ok &= abs(q - exact) <= tol
    t.checks["within_tolerance"] = bool(ok)
    return t


def cmd_locality(args) -> Table:
    kind = args.kind
    angles = args.settings if args.settings is not None else (0.0, math.pi / 4, math.pi / 8,
                                                             3 * math.pi / 8)
    a, _, b, bp = (direction_at(kind, x) for x in angles)
    schedule = [(a, b if n % 2 == 0 else bp) for n in range(2 * args.samples)]
    fault = SignalingFault(args.inject_bias, b) if args.inject_bias else None
    res = run_session(kind, schedule, args.seed, fault=fault)
    if args.transcript:
        with open(args.transcript, "w") as fh:
            fh.write(res.transcript.to_lines())
    report = verify_no_signaling(res.log_a, res.log_b)
    n_dist = res.transcript.count(DISTRIBUTION)
    n_cross = res.transcript.inter_party_count()
    t = Table("locality", _meta(args, settings=list(angles), samples_per_group=args.samples),
              ["rounds", "distribution_messages", "inter_party_measurement_messages",
               "z", "p_value", "status"])
    t.rows.append({"rounds": len(schedule), "distribution_messages": n_dist,
                   "inter_party_measurement_messages": n_cross, "z": report.statistic,
                   "p_value": report.p_value, "status": report.status})
    t.checks["no_inter_party_messages"] = n_cross == 0 and n_dist == 2 * len(schedule)
    t.checks["marginals_independent"] = report.passed
    return t


def cmd_cv(args) -> Table:
    t = Table("cv", _meta(args, f=args.f, center=args.center),
              ["observable", "f", "sigma", "uncertainty_product", "first_moment",
               "sample_mean", "mean_se", "sample_variance", "variance_se"])
    product = cv_width("x", args.f) * cv_width("p", args.f)
    ok_moment = ok_samples = True
    for i, kind in enumerate(("x", "p")):
        gen = CvGenerator(kind, args.center, args.f)
        m1 = cv_first_moment(gen)
        rep = cv_sample(gen, args.seed, args.samples, stream=i)
        t.rows.append({"observable": kind, "f": args.f, "sigma": gen.sigma,
                       "uncertainty_product": product, "first_moment": m1,
                       "sample_mean": rep.mean, "mean_se": rep.mean_se,
                       "sample_variance": rep.variance, "variance_se": rep.variance_se})
        ok_moment &= abs(m1 - gen.center) <= 1e-10
        ok_samples &= (abs(rep.mean - gen.center) <= SE_TOL * rep.mean_se
                       and abs(rep.variance - gen.sigma ** 2) <= SE_TOL * rep.variance_se)
    t.checks["uncertainty_product"] = abs(product - 0.5) <= 1e-15
    t.checks["first_moment"] = bool(ok_moment)
    t.checks["sample_moments_within_5se"] = bool(ok_samples)
    return t


COMMANDS = {
    "sweep": cmd_sweep,
    "chsh": cmd_chsh,
    "sequential": cmd_sequential,
    "singles": cmd_singles,
    "quadrature": cmd_quadrature,
    "locality": cmd_locality,
    "cv": cmd_cv,
}


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--samples", type=_positive_int, default=100_000,
                        help="Monte Carlo trials (per angle / per group)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="write the machine-readable table here")
    common.add_argument("--workers", type=_positive_int, default=1,
                        help="threads for Monte Carlo blocks; does not change results")

    kinded = argparse.ArgumentParser(add_help=False)
    kinded.add_argument("--kind", type=ParticleKind.parse, default=ParticleKind.PHOTON,
                        help="photon or spin")

    angles = argparse.ArgumentParser(add_help=False)
    angles.add_argument("--theta", type=lambda s: [parse_angle(x) for x in s.split(",")],
                        help="comma-separated angles in radians, e.g. 0,pi/8")
    angles.add_argument("--sweep", type=parse_sweep, help="start:stop:steps")

    p = argparse.ArgumentParser(prog="bellgen", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("sweep", parents=[common, kinded, angles], help="correlation curve")
    s = sub.add_parser("chsh", parents=[common, kinded], help="CHSH values")
    s.add_argument("--settings", type=parse_settings, help="a,a',b,b' in radians")
    sub.add_parser("sequential", parents=[common, kinded, angles],
                   help="repeat-measurement statistics")
    sub.add_parser("singles", parents=[common, kinded, angles], help="single-particle averages")
    s = sub.add_parser("quadrature", parents=[common, kinded, angles],
                       help="reference-frame average by quadrature")
    s.add_argument("--nodes", type=_positive_int)
    s = sub.add_parser("locality", parents=[common, kinded], help="two-party no-signalling audit")
    s.add_argument("--settings", type=parse_settings,
                   help="a,a',b,b'; A measures a, B alternates b and b'")
    s.add_argument("--transcript", help="write the message transcript (JSON lines) here")
    s.add_argument("--inject-bias", type=float, default=0.0,
                   help="leak B's setting to A and bias A's outcome (harness self-test)")
    s = sub.add_parser("cv", parents=[common], help="continuous-variable ansatz checks")
    s.add_argument("-f", "--f", type=_positive_float, default=1.0, help="quality factor")
    s.add_argument("--center", type=float, default=0.0)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        table = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    text = render(table, args.format)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
        sys.stdout.write(human(table))
    else:
        sys.stdout.write(text)
        for name, ok in table.checks.items():
            print(f"[{'PASS' if ok else 'FAIL'}] {name}", file=sys.stderr)
    return 0 if table.passed else 1


if __name__ == "__main__":
    sys.exit(main())
