"""Command-line front end.

Every subcommand writes JSON-lines: one object per result, then a manifest
object with the parameters needed to replay the run.  Exact rationals are
written as "p/q" strings.  Exit codes: 0 success, 1 invalid parameters,
2 budget exhausted without results, 3 precision overflow, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction
from typing import Iterable, List, Optional

from . import __version__
from .certreal import PREC_CAP_ENV, CertifiedReal, parse_alpha, prec_cap
from .dioph import WitnessQuery, construct_solvable_alpha, gamma_witnesses
from .disc import (
    choose_k,
    compute_exponents,
    discrepancy_report,
    power_sequence_fracs,
    xi_threshold,
)
from .errors import (
    BudgetExceeded,
    InvalidParams,
    NoSolutionFound,
    PrecisionOverflow,
    PsLinearError,
)
from .pscore import member, segment
from .solver import SearchParams, brute_force_solutions, find_solutions
from .sums import find_triples

SCHEMA = 1
EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_PRECISION, EXIT_USAGE = 0, 1, 2, 3, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}")


def _range(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("range must be s,t")
    return tuple(_rational(p) for p in parts)


def _jsonable(value):
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, CertifiedReal):
        return {"lo": _jsonable(value.lower()), "hi": _jsonable(value.upper()), "approx": repr(float(value.mid))}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, bool) or value is None or isinstance(value, (int, str, float)):
        return value
    return str(value)


# ---------------------------------------------------------------- handlers


def _generate(args) -> Iterable[dict]:
    for t in segment(parse_alpha(args.alpha), args.start, args.end, workers=args.threads):
        yield {"n": t.n, "value": t.value}


def _member(args):
    yield {"value": args.value, "n": member(args.value, parse_alpha(args.alpha))}


def _pair(p) -> dict:
    return {"x": p.x, "y": p.y, "n_x": p.n_x, "n_y": p.n_y, "provenance": p.provenance_dict()}


def _solve(args, state):
    params = SearchParams(
        gamma=args.gamma,
        xi=args.xi,
        epsilon=args.epsilon,
        s=args.s,
        t=args.t,
        delta=args.delta,
        max_convergents=args.max_convergents,
        window_multiplier=args.window_multiplier,
        max_window_points=args.max_window_points,
        time_budget=args.time_budget,
        limit=args.limit,
        workers=args.threads,
    )
    stream = find_solutions(args.a, args.b, parse_alpha(args.alpha), params)
    state["report"] = stream.report
    for p in stream:
        yield _pair(p)


def _brute(args):
    for p in brute_force_solutions(args.a, args.b, parse_alpha(args.alpha), args.x_max):
        yield _pair(p)


def _witness(args):
    wq = WitnessQuery(args.a, parse_alpha(args.alpha), args.gamma, args.q_max)
    for p, q in gamma_witnesses(wq):
        yield {"p": p, "q": q, "complete": wq.complete}


def _alpha_construct(args):
    alpha = construct_solvable_alpha(args.a, args.p, args.q, args.range)
    if alpha is None:
        yield {"alpha": None, "in_range": False}
        return
    yield {"alpha": str(alpha), "approx": repr(float(alpha)), "enclosure": alpha.enclose(128), "in_range": True}


def _discrepancy(args):
    points = power_sequence_fracs(args.coef, parse_alpha(args.alpha), args.n)
    rep = discrepancy_report(points, args.m)
    yield {
        "n_points": rep.n_points,
        "discrepancy": rep.exact_d,
        "erdos_turan": [{"m": m, "bound": repr(b)} for m, b in rep.et_bounds],
    }


def _bounds(args):
    k = args.k if args.k is not None else choose_k(args.alpha, args.gamma)
    ex = compute_exponents(args.alpha, args.gamma, args.xi, k)
    yield {
        "k": ex.k,
        "psi1": ex.psi1,
        "psi2": ex.psi2,
        "psi": ex.psi,
        "negative": ex.negative,
        "xi_threshold": xi_threshold(args.alpha, args.gamma, k),
    }


def _triples(args):
    for t in find_triples(
        parse_alpha(args.alpha), args.bound, args.limit, args.allow_degenerate, workers=args.threads
    ):
        yield {"k": t.k, "l": t.l, "m": t.m, "witnesses": list(t.witnesses), "degenerate": t.degenerate}


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pslinear", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write records to FILE instead of stdout")
    common.add_argument("--csv", action="store_true", help="CSV result rows; manifest goes to stderr")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--prec-cap", type=int, help=f"precision cap in bits (also ${PREC_CAP_ENV})")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", parents=[common], help="terms floor(n^alpha) for n in [start, end]")
    p.add_argument("--alpha", required=True)
    p.add_argument("--start", type=int, default=1)
    p.add_argument("--end", type=int, required=True)
    p.set_defaults(handler=_generate)

    p = sub.add_parser("member", parents=[common], help="index of a value in PS(alpha)")
    p.add_argument("--alpha", required=True)
    p.add_argument("--value", type=int, required=True)
    p.set_defaults(handler=_member)

    p = sub.add_parser("solve", parents=[common], help="constructive search for y = a x + b")
    p.add_argument("--a", type=_rational, required=True)
    p.add_argument("--b", type=_rational, required=True)
    p.add_argument("--alpha", required=True)
    for flag in ("--gamma", "--xi", "--epsilon", "--s", "--t", "--delta"):
        p.add_argument(flag, type=_rational)
    p.add_argument("--limit", type=int)
    p.add_argument("--max-convergents", type=int, default=200)
    p.add_argument("--window-multiplier", type=_rational, default=Fraction(1))
    p.add_argument("--max-window-points", type=int, default=50_000)
    p.add_argument("--time-budget", type=float, default=120.0)
    p.set_defaults(handler=_solve, wants_state=True)

    p = sub.add_parser("brute", parents=[common], help="all pairs with x <= x-max by enumeration")
    p.add_argument("--a", type=_rational, required=True)
    p.add_argument("--b", type=_rational, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--x-max", type=int, required=True)
    p.set_defaults(handler=_brute)

    p = sub.add_parser("witness", parents=[common], help="convergents p/q with |a^(1/alpha) - p/q| <= q^-gamma")
    p.add_argument("--a", type=_rational, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--gamma", type=_rational, required=True)
    p.add_argument("--q-max", type=int, required=True)
    p.set_defaults(handler=_witness)

    p = sub.add_parser("alpha-construct", parents=[common], help="alpha = ln a / ln(p/q) inside a range")
    p.add_argument("--a", type=_rational, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--range", type=_range, required=True)
    p.set_defaults(handler=_alpha_construct)

    p = sub.add_parser("discrepancy", parents=[common], help="discrepancy of coef*n^alpha mod 1")
    p.add_argument("--alpha", required=True)
    p.add_argument("--coef", type=_rational, default=Fraction(1))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, nargs="+", default=[1, 10, 100])
    p.set_defaults(handler=_discrepancy)

    p = sub.add_parser("bounds", parents=[common], help="k and the exponents psi1, psi2, psi")
    p.add_argument("--alpha", type=_rational, required=True)
    p.add_argument("--gamma", type=_rational, required=True)
    p.add_argument("--xi", type=_rational, required=True)
    p.add_argument("--k", type=int)
    p.set_defaults(handler=_bounds)

    p = sub.add_parser("triples", parents=[common], help="triples with all seven sums in PS(alpha)")
    p.add_argument("--alpha", required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--limit", type=int)
    p.add_argument("--allow-degenerate", action="store_true")
    p.set_defaults(handler=_triples)
    return parser


# ---------------------------------------------------------------- driver


def _params_record(args) -> dict:
    skip = {"handler", "wants_state", "out", "csv"}
    return {k: _jsonable(v) for k, v in sorted(vars(args).items()) if k not in skip}


def _dump(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def _csv_text(rows: List[dict]) -> str:
    buf = io.StringIO()
    if rows:
        flat = [{k: json.dumps(v) if isinstance(v, (dict, list)) else v for k, v in r.items()} for r in rows]
        writer = csv.DictWriter(buf, fieldnames=list(flat[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(flat)
    return buf.getvalue()


def run(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return EXIT_USAGE
    if args.threads < 1:
        print("usage error: --threads must be positive", file=stderr)
        return EXIT_USAGE
    saved_cap = os.environ.get(PREC_CAP_ENV)
    if args.prec_cap is not None:
        os.environ[PREC_CAP_ENV] = str(args.prec_cap)

    start = time.monotonic()
    state: dict = {}
    records: List[dict] = []
    outcome = {"status": "ok"}
    code = EXIT_OK
    try:
        gen = args.handler(args, state) if getattr(args, "wants_state", False) else args.handler(args)
        for rec in gen:
            records.append({"schema": SCHEMA, "kind": args.command, **_jsonable(rec)})
    except (NoSolutionFound, BudgetExceeded) as exc:
        code = EXIT_BUDGET if not records else EXIT_OK
        outcome = {"status": "budget_exhausted", "message": str(exc)}
    except PrecisionOverflow as exc:
        code = EXIT_PRECISION
        outcome = {"status": "precision_overflow", "message": str(exc), "prec": exc.prec}
    except (InvalidParams, PsLinearError, ValueError) as exc:
        code = EXIT_INVALID
        outcome = {"status": "invalid_params", "message": str(exc)}
    finally:
        cap = prec_cap()
        if args.prec_cap is not None:
            if saved_cap is None:
                os.environ.pop(PREC_CAP_ENV, None)
            else:
                os.environ[PREC_CAP_ENV] = saved_cap
    if "report" in state:
        rep = vars(state["report"]).copy()
        rep.pop("elapsed", None)
        outcome["search"] = _jsonable(rep)
    outcome["records"] = len(records)
    outcome["exit_code"] = code
    manifest = {
        "schema": SCHEMA,
        "kind": "manifest",
        "subcommand": args.command,
        "argv": argv,
        "params": _params_record(args),
        "prec_cap": cap,
        "threads": args.threads,
        "version": __version__,
        "wall_time": round(time.monotonic() - start, 6),
        "outcome": outcome,
    }
    if code != EXIT_OK:
        print(f"{args.command}: {outcome['status']}: {outcome.get('message', '')}", file=stderr)

    body = _csv_text(records) if args.csv else "".join(_dump(r) + "\n" for r in records)
    if not args.csv:
        body += _dump(manifest) + "\n"
    else:
        print(_dump(manifest), file=stderr)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        stdout.write(body)
    return code


def replay(manifest) -> tuple:
    """Re-run a manifest (dict, JSON text or path); returns ``(code, result_lines)``."""
    if isinstance(manifest, str):
        if os.path.exists(manifest):
            with open(manifest, encoding="utf-8") as fh:
                lines = [ln for ln in fh.read().splitlines() if ln.strip()]
            manifest = json.loads(lines[-1])
        else:
            manifest = json.loads(manifest)
    argv = [a for a in manifest["argv"]]
    # result records only go to the returned buffer
    cleaned, skip = [], False
    for a in argv:
        if skip:
            skip = False
            continue
        if a == "--out":
            skip = True
            continue
        if a.startswith("--out=") or a == "--csv":
            continue
        cleaned.append(a)
    if "--prec-cap" not in cleaned:
        cleaned += ["--prec-cap", str(manifest["prec_cap"])]
    buf = io.StringIO()
    code = run(cleaned, stdout=buf, stderr=io.StringIO())
    lines = buf.getvalue().splitlines()[:-1]
    return code, lines


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
