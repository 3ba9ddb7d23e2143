"""Command-line front end.

Every subcommand writes CSV (or JSON) whose first line echoes the tool version
and the full configuration, so an output file is enough to regenerate itself.
Floats are printed with 12 significant digits.

Exit codes: 0 ok, 1 rejected round, 2 bad input, 3 size guard,
4 non-convergence, 5 oracle mismatch.
"""
from __future__ import annotations

import argparse
import io
import json
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .adaptive import Schedule, mub_preprocess, run_adaptive
from .exceptions import NonConvergenceError, SizeGuardError, ZeroSuccessError
from .mcaepp import fixed_point, fixed_point_infidelity, infidelity_bound
from .oracle import cross_check
from .single_carrier import closed_form_fidelity, converges, satisfies_hypothesis, trajectory
from .state_model import BellTable, from_marginal_params, load_table, marginals, mub_weights

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_BAD_INPUT = 2
EXIT_SIZE_GUARD = 3
EXIT_NONCONVERGENCE = 4
EXIT_ORACLE_MISMATCH = 5

ORACLE_TOL = 1e-10


class InputError(ValueError):
    pass


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    if v is None:
        return ""
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(f"{float(v):.12g}")
    return v


def _config(args: argparse.Namespace) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "func"}


def header(args: argparse.Namespace) -> str:
    return f"# caepp {__version__} config={json.dumps(_config(args), sort_keys=True)}\n"


def emit(args: argparse.Namespace, columns: Sequence[str], rows: Sequence[Sequence], extra: dict | None = None) -> None:
    buf = io.StringIO(newline="")
    if args.format == "json":
        doc = {"tool": f"caepp {__version__}", "config": _config(args)}
        doc.update(extra or {})
        doc["rows"] = [dict(zip(columns, r)) for r in rows]
        buf.write(json.dumps(_jsonable(doc), sort_keys=True, indent=2))
        buf.write("\n")
    else:
        buf.write(header(args))
        buf.write(",".join(columns) + "\n")
        for r in rows:
            buf.write(",".join(fmt(v) for v in r) + "\n")
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def parse_values(text: str, name: str) -> list[float]:
    """``0.3,0.4`` or an inclusive grid ``start:stop:count``."""
    try:
        if ":" in text:
            a, b, n = text.split(":")
            if int(n) < 1:
                raise ValueError
            return [float(x) for x in np.linspace(float(a), float(b), int(n))]
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"cannot read {name} values from {text!r}") from None


def _channel(args) -> BellTable:
    if getattr(args, "channel", None):
        try:
            return load_table(args.channel)
        except OSError as exc:
            raise InputError(f"cannot read channel file: {exc}") from None
        except json.JSONDecodeError as exc:
            raise InputError(f"channel file is not JSON: {exc}") from None
    if args.p0 is None or args.asym is None:
        raise InputError("give either --channel or both --p0 and --asym")
    return from_marginal_params(float(args.p0), float(args.asym))


# -- subcommands -------------------------------------------------------------------

def cmd_single(args) -> int:
    if args.rounds < 1:
        raise InputError("--rounds must be >= 1")
    ch = _channel(args)
    traj = trajectory(ch, args.rounds)
    exact = satisfies_hypothesis(ch)
    u = marginals(ch).u
    rows = []
    for k, out in enumerate(traj.outcomes, start=1):
        cf = closed_form_fidelity(ch.fidelity, u, k) if exact else None
        rows.append((k, out.success_probability, out.fidelity, cf))
    emit(args, ("round", "p_succ", "fidelity", "closed_form"), rows)
    return EXIT_OK


def cmd_scan(args) -> int:
    p0s = parse_values(args.p0, "--p0")
    asyms = parse_values(args.asym, "--asym")
    if args.rounds < 0:
        raise InputError("--rounds must be >= 0")
    rows = []
    for p0 in p0s:
        for A in asyms:
            ch = from_marginal_params(p0, A)
            u = marginals(ch).u
            rows.append((p0, A, u[1], u[2], converges(ch), closed_form_fidelity(p0, u, args.rounds)))
    emit(args, ("p0", "asym", "u1", "u2", "converges", "fidelity"), rows)
    return EXIT_OK


def cmd_mcaepp(args) -> int:
    ps = parse_values(args.p, "--p")
    ms = [int(v) for v in parse_values(args.m, "--m")]
    for p in ps:
        if not 1 / 9 <= p <= 1:
            raise InputError(f"--p must lie in [1/9, 1], got {p}")
    if any(m < 1 for m in ms):
        raise InputError("--m must be >= 1")
    rows = []
    for p in ps:
        for m in ms:
            traj = fixed_point(p, m, tol=args.tol, max_rounds=args.max_rounds)
            bound = infidelity_bound(p, m)
            for out in traj.outcomes:
                rounds = int(out.label.split(":")[1])
                rows.append((p, m, rounds, out.success_probability, out.fidelity, None, bound))
            rows[-1] = rows[-1][:5] + (fixed_point_infidelity(p, m), bound)
    emit(args, ("p", "m", "rounds", "p_succ", "fidelity", "fixed_point_infidelity", "bound"), rows)
    return EXIT_OK


def cmd_adaptive(args) -> int:
    ch = _channel(args)
    schedule = Schedule.parse(args.schedule) if args.schedule else Schedule.default(args.m, args.k)
    S, rotated = mub_preprocess(ch) if not args.no_preprocess else (None, ch)
    traj = run_adaptive(ch, args.m, schedule, check=args.check, preprocess=not args.no_preprocess)
    cum = traj.cumulative_success
    rows = [
        (i, out.label, out.success_probability, cum[i - 1], out.fidelity)
        for i, out in enumerate(traj.outcomes, start=1)
    ]
    extra = {
        "rotation": None if S is None else [list(r) for r in S.as_matrix()],
        "initial_fidelity": ch.fidelity,
        "preprocessed_fidelity": rotated.fidelity,
        "final_fidelity": traj.converged_fidelity,
    }
    emit(args, ("phase", "label", "p_succ", "cumulative_success", "fidelity"), rows, extra)
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    if args.samples < 1:
        raise InputError("--samples must be >= 1")
    if args.m < 1:
        raise InputError("--m must be >= 1")
    report = cross_check(args.d, args.m, args.samples, args.seed)
    rows = sorted(report.deviations.items())
    rows.append(("max", report.max_deviation))
    emit(args, ("comparison", "max_deviation"), rows)
    if report.max_deviation > ORACLE_TOL:
        print(f"oracle mismatch: {report.max_deviation:.3e} > {ORACLE_TOL:g}", file=sys.stderr)
        return EXIT_ORACLE_MISMATCH
    return EXIT_OK


def cmd_mub(args) -> int:
    ch = _channel(args)
    w = mub_weights(ch)
    S, rotated = mub_preprocess(ch)
    rows = [(i, ln.kind, w.L[i], i == w.argmax) for i, ln in enumerate(w.lines)]
    (a, b), (c, e) = S.as_matrix()
    extra = {"rotation": [[a, b], [c, e]], "rotated_u": marginals(rotated).u.tolist()}
    if args.format == "csv":
        rows.append(("rotation", f"[[{a} {b}] [{c} {e}]]", marginals(rotated).u[0], None))
    emit(args, ("line", "kind", "weight", "chosen"), rows, extra)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="caepp", description="Carrier-assisted purification runs.")
    parser.add_argument("--version", action="version", version=f"caepp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None, help="output file (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("single", help="single-carrier trajectory")
    p.add_argument("--p0", type=float)
    p.add_argument("--asym", type=float, help="share of the error mass in shift row 1")
    p.add_argument("--channel", help="channel JSON file instead of --p0/--asym")
    p.add_argument("--rounds", type=int, default=200)
    common(p)
    p.set_defaults(func=cmd_single)

    p = sub.add_parser("scan", help="convergence over a (p0, asym) grid")
    p.add_argument("--p0", required=True, help="list a,b,c or grid start:stop:count")
    p.add_argument("--asym", required=True, help="list a,b,c or grid start:stop:count")
    p.add_argument("--rounds", type=int, default=200)
    common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("mcaepp", help="multi-carrier fixed point under depolarizing noise")
    p.add_argument("--p", required=True, help="list or grid of channel fidelities")
    p.add_argument("--m", required=True, help="list or grid of carrier counts")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-rounds", type=int, default=2**64)
    common(p)
    p.set_defaults(func=cmd_mcaepp)

    p = sub.add_parser("adaptive", help="MUB preprocessing plus a check/rotate schedule")
    p.add_argument("--channel", required=True)
    p.add_argument("--m", type=int, default=12)
    p.add_argument("--k", type=int, default=3, help="checks per basis in the default schedule")
    p.add_argument("--schedule", default=None, help="e.g. check:12,rotate,check:12,correct")
    p.add_argument("--check", choices=("star", "ideal"), default="star")
    p.add_argument("--no-preprocess", action="store_true")
    common(p)
    p.set_defaults(func=cmd_adaptive, p0=None, asym=None)

    p = sub.add_parser("oracle-check", help="closed forms against the oracles")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("mub", help="MUB line weights and the chosen rotation")
    p.add_argument("--channel", required=True)
    common(p)
    p.set_defaults(func=cmd_mub, p0=None, asym=None)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SizeGuardError as exc:
        print(f"size guard: {exc}", file=sys.stderr)
        return EXIT_SIZE_GUARD
    except NonConvergenceError as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except ZeroSuccessError as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    except ValueError as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
