"""Command-line entry point: family sweeps as CSV, and single-state reports.

Exit codes: 0 success, 1 usage or input error, 2 a bound ordering was
violated on some emitted row or report.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from contextlib import contextmanager
from dataclasses import replace

import numpy as np

from . import closed_forms as cf
from .bounds import (
    bound_report,
    tripartite_report,
)
from .correlations import OptimizerConfig, correlation_report
from .measurements import computational, fourier, parse_measurement, pauli_x, pauli_z
from .states import InvalidStateError, isotropic, load_state, random_pure, werner_general, werner_main

ORDER_TOL = 1e-6
NUMERIC_MAX_DIM = 6
EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2

SWEEP_COLUMNS = ["family", "d", "lam", "p", "uncertainty_sum", "mu_bound", "refined_bound",
                 "berta_bound", "new_bound", "J_A", "D_A", "S_cond_AB"]
DIFF_COLUMNS = ["uncertainty_sum", "berta_bound", "new_bound", "J_A", "D_A", "S_cond_AB"]
FIGURE1_COLUMNS = ["p", "berta_bound", "new_bound", "uncertainty_sum"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if x == 0:
        x = 0.0  # drop the sign of negative zero
    return format(x, ".12g")


@contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
        return
    try:
        f = open(path, "w", newline="")
    except OSError as e:
        raise UsageError(f"cannot write {path}: {e}") from e
    with f:
        yield f


def _write_csv(path, columns, rows) -> None:
    with _open_out(path) as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt(row[c]) for c in columns])


def _config(args) -> OptimizerConfig:
    if args.restarts < 0:
        raise UsageError("--restarts must be nonnegative")
    if args.tol <= 0:
        raise UsageError("--tol must be positive")
    return OptimizerConfig(restarts=args.restarts, seed=args.seed, tol=args.tol)


def _ordered(row, tol=ORDER_TOL) -> bool:
    return (row["uncertainty_sum"] >= row["new_bound"] - tol
            and row["new_bound"] >= row["berta_bound"] - tol)


def _report(msg: str) -> None:
    print(msg, file=sys.stderr)


# --- figure1 ---

def figure1_rows(p_steps: int, config: OptimizerConfig) -> list[dict]:
    if p_steps < 2:
        raise UsageError("--p-steps must be at least 2")
    P, Q = pauli_x(), pauli_z()
    rows = []
    for p in np.linspace(0.0, 1.0, p_steps):
        rep = bound_report(P, Q, werner_main(p), config)
        rows.append({"p": float(p), "berta_bound": rep.berta_bound,
                     "new_bound": rep.new_bound, "uncertainty_sum": rep.uncertainty_sum})
    return rows


def cmd_figure1(args) -> int:
    rows = figure1_rows(args.p_steps, _config(args))
    _write_csv(args.out, FIGURE1_COLUMNS, rows)
    bad = [r["p"] for r in rows if not _ordered(r)]
    if bad:
        _report(f"ordering violated at p = {bad}")
        return EXIT_VIOLATION
    return EXIT_OK


# --- sweep ---

def _family_state(family: str, d: int, lam: float):
    return werner_general(d, lam) if family == "werner" else isotropic(d, lam)


def _werner_p(family: str, d: int, lam: float):
    # the two-qubit noise parameter, defined where lam = (1 + 3p)/4 has p in [0, 1]
    if family != "werner" or d != 2:
        return ""
    p = (4 * lam - 1) / 3
    return p if -1e-12 <= p <= 1 + 1e-12 else ""


def closed_row(family: str, d: int, lam: float) -> dict:
    pt = cf.FamilyPoint(family, d, lam)
    j = cf.classical_correlation(pt)
    mutual = 2 * cf.marginal_entropy(pt) - cf.joint_entropy(pt)
    log_d = cf.conjugate_incompatibility_term(d)
    return {"family": family, "d": d, "lam": lam, "p": _werner_p(family, d, lam),
            "uncertainty_sum": cf.uncertainty_sum(pt), "mu_bound": log_d,
            "refined_bound": log_d + cf.marginal_entropy(pt),
            "berta_bound": cf.berta_bound(pt), "new_bound": cf.new_bound(pt),
            "J_A": j, "D_A": mutual - j, "S_cond_AB": cf.conditional_entropy(pt)}


def numeric_row(family: str, d: int, lam: float, config: OptimizerConfig) -> dict:
    if d > NUMERIC_MAX_DIM:
        raise UsageError(f"numeric mode supports d <= {NUMERIC_MAX_DIM}, got {d}")
    rho = _family_state(family, d, lam)
    P, Q = computational(d), fourier(d)
    rep = bound_report(P, Q, rho, replace(config, allow_large=True))
    return {"family": family, "d": d, "lam": lam, "p": _werner_p(family, d, lam),
            "uncertainty_sum": rep.uncertainty_sum, "mu_bound": rep.mu_bound,
            "refined_bound": rep.refined_bound, "berta_bound": rep.berta_bound,
            "new_bound": rep.new_bound, "J_A": rep.classical_correlation,
            "D_A": rep.discord, "S_cond_AB": rep.conditional_entropy_AB}


def sweep_rows(families, d_list, lam_steps: int, mode: str, config: OptimizerConfig) -> tuple[list[dict], list[str]]:
    if lam_steps < 2:
        raise UsageError("--lambda-steps must be at least 2")
    if any(d < 2 for d in d_list):
        raise UsageError("dimensions must be at least 2")
    if mode != "closed" and max(d_list) > NUMERIC_MAX_DIM:
        raise UsageError(f"numeric mode supports d <= {NUMERIC_MAX_DIM}, got {max(d_list)}")
    columns = list(SWEEP_COLUMNS)
    if mode == "both":
        columns += [f"absdiff_{c}" for c in DIFF_COLUMNS]
    rows = []
    for family in families:
        for d in d_list:
            for lam in np.linspace(0.0, 1.0, lam_steps):
                lam = float(lam)
                if mode == "closed":
                    row = closed_row(family, d, lam)
                elif mode == "numeric":
                    row = numeric_row(family, d, lam, config)
                else:
                    row = numeric_row(family, d, lam, config)
                    ref = closed_row(family, d, lam)
                    for c in DIFF_COLUMNS:
                        row[f"absdiff_{c}"] = abs(row[c] - ref[c])
                rows.append(row)
    return rows, columns


def cmd_sweep(args) -> int:
    families = ["werner", "isotropic"] if args.family == "all" else [args.family]
    rows, columns = sweep_rows(families, args.d, args.lambda_steps, args.mode, _config(args))
    _write_csv(args.out, columns, rows)
    bad = [(r["family"], r["d"], r["lam"]) for r in rows if not _ordered(r)]
    if bad:
        _report(f"ordering violated at {bad}")
        return EXIT_VIOLATION
    return EXIT_OK


# --- analyze / tripartite ---

def _load(path):
    try:
        return load_state(path)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read state file {path}: {e}") from e
    except (InvalidStateError, ValueError, TypeError, KeyError) as e:
        raise UsageError(f"invalid state file {path}: {e}") from e


def _measurements(args, d: int):
    default_p, default_q = ("pauli-x", "pauli-z") if d == 2 else ("comp", "fourier")
    try:
        P = parse_measurement(args.p or default_p, d)
        Q = parse_measurement(args.q or default_q, d)
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise UsageError(f"bad measurement: {e}") from e
    if P.dim != d or Q.dim != d:
        raise UsageError(f"measurements act on dimension {P.dim}/{Q.dim}, system A has {d}")
    return P, Q


def _emit_json(path, payload) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    with _open_out(path) as f:
        f.write(text + "\n")


def cmd_analyze(args) -> int:
    rho = _load(args.state)
    if rho.n_factors != 2:
        raise UsageError(f"analyze needs a bipartite state, got factors {list(rho.dims)}")
    P, Q = _measurements(args, rho.dims[0])
    config = _config(args)
    try:
        corr = correlation_report(rho, 0, config, candidates=(P, Q))
        rep = bound_report(P, Q, rho, classical_corr=corr.classical_correlation, state_id=args.state)
    except ValueError as e:
        raise UsageError(str(e)) from e
    out = sys.stderr if args.json == "-" else sys.stdout
    for k, v in rep.as_dict().items():
        print(f"{k:24s} {fmt(v)}", file=out)
    corr_d = corr.as_dict()
    for k in ("mutual_information", "classical_correlation", "discord", "optimizer_iterations"):
        print(f"{k:24s} {fmt(corr_d[k])}", file=out)
    violations = rep.violations(ORDER_TOL)
    if args.json:
        _emit_json(args.json, {"bounds": rep.as_dict(), "correlations": corr_d,
                               "violations": violations})
    if violations:
        _report("violations: " + ", ".join(violations))
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_tripartite(args) -> int:
    config = _config(args)
    if args.random is not None:
        if args.random < 1:
            raise UsageError("--random needs a positive count")
        states = [(f"random-{args.seed + k}", random_pure([2, 2, 2], args.seed + k)) for k in range(args.random)]
    elif args.state:
        states = [(args.state, _load(args.state))]
    else:
        raise UsageError("give a state file or --random N")
    results = []
    for name, rho in states:
        if rho.n_factors != 3:
            raise UsageError(f"tripartite needs factors A, B, E; got {list(rho.dims)}")
        P, Q = _measurements(args, rho.dims[0])
        try:
            r = tripartite_report(P, Q, rho, config)
        except ValueError as e:
            raise UsageError(str(e)) from e
        results.append({"state": name, "lhs": r.lhs, "rhs": r.rhs, "slack": r.slack,
                        "discord_purified": r.discord_purified,
                        "classical_correlation_ab": r.classical_correlation_ab})
    _write_csv("-", ["state", "lhs", "rhs", "slack"], results)
    if args.json:
        _emit_json(args.json, results)
    bad = [r["state"] for r in results if r["slack"] < -ORDER_TOL]
    if bad:
        _report(f"{len(bad)} violation(s): {bad}")
        return EXIT_VIOLATION
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--restarts", type=int, default=32)
    common.add_argument("--tol", type=float, default=1e-9)

    parser = _Parser(prog="discord-eur", description="Uncertainty bounds with quantum memory.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f1 = sub.add_parser("figure1", parents=[common], help="two-qubit Werner curves as CSV")
    f1.add_argument("--p-steps", type=int, default=101)
    f1.add_argument("--out", default="-")
    f1.set_defaults(func=cmd_figure1)

    sw = sub.add_parser("sweep", parents=[common], help="Werner or isotropic family sweep as CSV")
    sw.add_argument("--family", choices=["werner", "isotropic", "all"], default="werner")
    sw.add_argument("--d", type=int, nargs="+", default=[2, 3, 4, 5])
    sw.add_argument("--lambda-steps", type=int, default=21)
    sw.add_argument("--mode", choices=["closed", "numeric", "both"], default="closed")
    sw.add_argument("--out", default="-")
    sw.set_defaults(func=cmd_sweep)

    an = sub.add_parser("analyze", parents=[common], help="bounds and correlations of a bipartite state file")
    an.add_argument("state")
    an.add_argument("--p", help="pauli-x|pauli-y|pauli-z|comp|fourier or a measurement JSON file")
    an.add_argument("--q")
    an.add_argument("--json", help="write the full report as JSON ('-' for stdout)")
    an.set_defaults(func=cmd_analyze)

    tp = sub.add_parser("tripartite", parents=[common], help="S(P|B) + S(Q|E) against its lower bound")
    tp.add_argument("state", nargs="?")
    tp.add_argument("--random", type=int, help="check N random pure 2x2x2 states instead")
    tp.add_argument("--p")
    tp.add_argument("--q")
    tp.add_argument("--json")
    tp.set_defaults(func=cmd_tripartite)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        _report(f"error: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
