"""Command line front end.

Subcommands
-----------
apply        apply the channel to a density matrix read from JSON
spectrum     closed-form two-copy spectrum vs dense diagonalization
entropy      S1/S2 split of the two-copy output entropy
min-entropy  single-copy minimum output entropy vs its closed form
additivity   two-copy minimum entropy certificate over a t grid
schur-scan   Schur criterion scan for the secular symmetric polynomials
verify       inequality scans; --kind all runs every family

Exit codes: 0 success, 1 a checked quantity violated its tolerance,
2 usage or parse error, 3 input validation error.

Output is deterministic for a fixed seed: scan sampling uses
counter-based streams, so --threads never changes the bytes printed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import serialize
from .channel import new_channel, apply
from .entropy import (
    OptimizerConfig,
    additivity_gap,
    entropy_split,
    min_entropy_closed_form,
    min_output_entropy,
)
from .errors import TdchanError
from .spectrum import SchmidtVector, full_spectrum, sigma12
from .verification import SCAN_KINDS, run_scan

LN2 = float(np.log(2.0))


def _parse_int_range(text: str) -> list[int]:
    """'3' -> [3]; '3:6' -> [3, 4, 5, 6] (inclusive)."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [int(parts[0])]
        if len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected D or LO:HI, got {text!r}")


def _parse_t_grid(text: str) -> np.ndarray:
    """'a:b:steps' -> linspace(a, b, steps); a bare float -> one value."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) == 3:
            a, b, steps = float(parts[0]), float(parts[1]), int(parts[2])
            if steps < 2:
                raise ValueError
            return np.linspace(a, b, steps)
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected T or A:B:STEPS, got {text!r}")


def _parse_lambda(text: str) -> np.ndarray:
    try:
        return np.array([float(x) for x in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}")


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="base RNG seed (default 0)")
    p.add_argument(
        "--threads",
        type=int,
        default=None,
        help="worker threads; default TDCHAN_THREADS or the CPU count",
    )
    p.add_argument("--log-base", choices=("e", "2"), default="e", help="entropy unit")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--tol", type=float, default=None, help="override the check tolerance")


def _resolve_threads(value: int | None) -> int:
    if value is not None:
        return max(1, value)
    env = os.environ.get("TDCHAN_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return max(1, os.cpu_count() or 1)


def _scale(value: float | None, base: str) -> float | None:
    if value is None:
        return None
    return value / LN2 if base == "2" else value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tdchan", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("apply", help="apply the channel to a JSON density matrix")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--input", required=True, help="JSON file, or - for stdin")
    _common_flags(p)

    p = sub.add_parser("spectrum", help="two-copy spectrum for Schmidt coefficients")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=_parse_lambda, required=True)
    _common_flags(p)

    p = sub.add_parser("entropy", help="S1/S2 entropy split of the two-copy output")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=_parse_lambda, required=True)
    _common_flags(p)

    p = sub.add_parser("min-entropy", help="minimum output entropy, sampled vs exact")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--restarts", type=int, default=50)
    _common_flags(p)

    p = sub.add_parser("additivity", help="two-copy additivity certificate")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--t", type=_parse_t_grid, default=None, help="T or A:B:STEPS")
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--n-random", type=int, default=200)
    _common_flags(p)

    p = sub.add_parser("schur-scan", help="Schur criterion scan")
    p.add_argument("--d", type=_parse_int_range, required=True, help="D or LO:HI")
    p.add_argument("--t-grid", type=_parse_t_grid, default=None)
    p.add_argument("--samples", type=int, default=1000)
    _common_flags(p)

    p = sub.add_parser("verify", help="inequality scans")
    kinds = [k.replace("_", "-") for k in SCAN_KINDS] + ["all"]
    p.add_argument("--kind", choices=kinds, required=True)
    p.add_argument("--d", type=_parse_int_range, required=True, help="D or LO:HI")
    p.add_argument("--t-grid", type=_parse_t_grid, default=None)
    p.add_argument("--samples", type=int, default=1000)
    _common_flags(p)

    return parser


def _emit_reports(reports, fmt: str) -> int:
    if fmt == "json":
        body = ",\n".join("  " + serialize.to_json(r.as_dict()) for r in reports)
        print("[\n" + body + "\n]")
    else:
        header = ["kind", "d", "t", "k_values", "samples", "violations", "worst_margin", "seed"]
        rows = [
            [
                r.kind,
                r.d,
                r.t_values[0],
                ";".join(str(k) for k in r.k_values),
                r.samples,
                r.violations,
                r.worst_margin,
                r.seed,
            ]
            for r in reports
        ]
        if fmt == "csv":
            sys.stdout.write(serialize.rows_to_csv(header, rows))
        else:
            sys.stdout.write(serialize.rows_to_table(header, rows))
    return 1 if any(r.violations for r in reports) else 0


def _cmd_apply(args) -> int:
    ch = new_channel(args.d, args.t)
    if args.input == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.input, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
            return 2
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        print(f"error: bad JSON input: {exc}", file=sys.stderr)
        return 2
    rho = serialize.density_from_obj(obj)
    out = apply(ch, rho)
    result = serialize.density_to_obj(out)
    if args.format == "json":
        print(serialize.to_json(result))
    else:
        header = ["row", "col", "re", "im"]
        rows = [
            [i, j, out.mat[i, j].real, out.mat[i, j].imag]
            for i in range(out.dim)
            for j in range(out.dim)
        ]
        text_out = serialize.rows_to_csv(header, rows) if args.format == "csv" else serialize.rows_to_table(header, rows)
        sys.stdout.write(text_out)
    return 0


def _cmd_spectrum(args) -> int:
    ch = new_channel(args.d, args.t)
    lam = SchmidtVector(args.lam)
    spec = full_spectrum(ch, lam)
    dense = np.sort(np.linalg.eigvalsh(sigma12(ch, lam).mat))[::-1]
    delta = float(np.max(np.abs(spec.all_eigenvalues() - dense)))
    tol = args.tol if args.tol is not None else 1e-9
    result = {
        "offdiag": [float(x) for x in spec.offdiag],
        "secular": [float(x) for x in spec.secular],
        "dense_delta": delta,
    }
    if args.format == "json":
        print(serialize.to_json(result))
    else:
        header = ["family", "index", "value"]
        rows = [["offdiag", i, float(x)] for i, x in enumerate(spec.offdiag)]
        rows += [["secular", i, float(x)] for i, x in enumerate(spec.secular)]
        rows += [["dense_delta", "", delta]]
        out = serialize.rows_to_csv(header, rows) if args.format == "csv" else serialize.rows_to_table(header, rows)
        sys.stdout.write(out)
    return 1 if delta > tol else 0


def _cmd_entropy(args) -> int:
    ch = new_channel(args.d, args.t)
    rep = entropy_split(ch, SchmidtVector(args.lam))
    result = {
        "s_total": _scale(rep.s_total, args.log_base),
        "s1": _scale(rep.s1, args.log_base),
        "s2": _scale(rep.s2, args.log_base),
        "c": rep.c,
    }
    _emit_record(result, args.format)
    return 0


def _emit_record(result: dict, fmt: str) -> None:
    if fmt == "json":
        print(serialize.to_json(result))
    elif fmt == "csv":
        sys.stdout.write(serialize.rows_to_csv(list(result), [list(result.values())]))
    else:
        sys.stdout.write(serialize.rows_to_table(list(result), [list(result.values())]))


def _cmd_min_entropy(args) -> int:
    ch = new_channel(args.d, args.t)
    cfg = OptimizerConfig(restarts=args.restarts, seed=args.seed, log_base=args.log_base)
    h, argmin = min_output_entropy(ch, cfg)
    exact = min_entropy_closed_form(ch)
    tol = args.tol if args.tol is not None else 1e-6
    result = {
        "h": _scale(h, args.log_base),
        "h_closed_form": _scale(exact, args.log_base),
        "argmin_re": [float(x) for x in np.real(argmin)],
        "argmin_im": [float(x) for x in np.imag(argmin)],
    }
    _emit_record(result, args.format)
    return 1 if abs(h - exact) > tol else 0


def _cmd_additivity(args) -> int:
    tol = args.tol if args.tol is not None else 1e-6
    lo, hi = -1.0 / (args.d - 1), 1.0 / (args.d + 1)
    grid = args.t if args.t is not None else np.linspace(lo, hi, 9)
    rows = []
    worst = np.inf
    for t in np.asarray(grid, dtype=float):
        ch = new_channel(args.d, t)
        cfg = OptimizerConfig(
            restarts=args.restarts, tol=tol, n_random=args.n_random, seed=args.seed
        )
        gap, min_simplex, min_random = additivity_gap(ch, cfg)
        worst = min(worst, gap)
        rows.append(
            {
                "t": float(t),
                "h": _scale(min_entropy_closed_form(ch), args.log_base),
                "min_simplex": _scale(min_simplex, args.log_base),
                "min_random": _scale(min_random, args.log_base),
                "gap": _scale(gap, args.log_base),
            }
        )
    if args.format == "json":
        body = ",\n".join("  " + serialize.to_json(r) for r in rows)
        print("[\n" + body + "\n]")
    else:
        header = list(rows[0])
        table = [[r[k] for k in header] for r in rows]
        out = serialize.rows_to_csv(header, table) if args.format == "csv" else serialize.rows_to_table(header, table)
        sys.stdout.write(out)
    return 1 if worst < -tol else 0


def _cmd_verify(args, kind: str | None = None) -> int:
    kind = kind or args.kind
    threads = _resolve_threads(args.threads)
    kinds = list(SCAN_KINDS) if kind == "all" else [kind.replace("-", "_")]
    reports = []
    for k in kinds:
        reports.extend(
            run_scan(
                k,
                args.d,
                t_grid=args.t_grid,
                samples=args.samples,
                seed=args.seed,
                threads=threads,
            )
        )
    return _emit_reports(reports, args.format)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "apply": _cmd_apply,
        "spectrum": _cmd_spectrum,
        "entropy": _cmd_entropy,
        "min-entropy": _cmd_min_entropy,
        "additivity": _cmd_additivity,
        "verify": _cmd_verify,
    }
    try:
        if args.command == "schur-scan":
            return _cmd_verify(args, kind="schur")
        return handlers[args.command](args)
    except TdchanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
