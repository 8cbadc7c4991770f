"""Command-line front end: compute sums, run verification suites, approximate rationals.

Exit codes: 0 success, 1 verification failure, 2 usage/input error,
3 internal invariant or precision failure.  JSON goes to stdout and is
byte-identical for identical seed + config (timing is therefore reported on
stderr and in the text/CSV formats only).
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
import time

from .dedekind import SumContext, d_norm, d_sum
from .density import Target, construct, find_prime
from .errors import (
    ConstructionError,
    DedekindError,
    ExcludedRingError,
    InadmissibleTargetError,
    NotAMultiplierError,
    PrecisionLossError,
    SearchLimitError,
)
from .lattice import Lattice, PrecisionPolicy
from .ring import QuadOrder
from .verification import SUITE_NAMES, run_suite

__all__ = ["main", "entry"]

_EXIT_OK = 0
_EXIT_VERIFY_FAIL = 1
_EXIT_USAGE = 2
_EXIT_INTERNAL = 3

_DEFAULT_SEED = 12345

_ENV_PREFIX = "ELLIPTIC_DEDEKIND_"


def _env_default(name: str, cast, fallback):
    raw = os.environ.get(_ENV_PREFIX + name)
    if raw is None:
        return fallback
    try:
        return cast(raw)
    except ValueError:
        return fallback


# ---------------------------------------------------------------------------
# Deterministic JSON with 17-significant-digit floats.


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} in JSON output")
    return format(float(x), ".17g")


def _to_json(obj) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, complex):
        return _to_json({"re": obj.real, "im": obj.imag})
    if isinstance(obj, str):
        out = ['"']
        for ch in obj:
            if ch == '"':
                out.append('\\"')
            elif ch == "\\":
                out.append("\\\\")
            elif ord(ch) < 0x20:
                out.append(f"\\u{ord(ch):04x}")
            else:
                out.append(ch)
        out.append('"')
        return "".join(out)
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_to_json(v) for v in obj) + "]"
    if isinstance(obj, dict):
        items = (f"{_to_json(str(key))}:{_to_json(val)}" for key, val in obj.items())
        return "{" + ",".join(items) + "}"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _emit_json(config: dict, records: list, summary: dict) -> None:
    sys.stdout.write(_to_json({"config": config, "records": records, "summary": summary}) + "\n")


def _emit_csv(rows: list[dict], columns: list[str]) -> None:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([row.get(col, "") for col in columns])


# ---------------------------------------------------------------------------
# Argument parsing.


def _parse_coords(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'u,v' integer pair, got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected integers in {text!r}") from exc


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cannot parse complex number {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="elliptic-dedekind",
        description="Elliptic Dedekind sums over imaginary quadratic orders",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--dk", type=int, default=-8, help="fundamental discriminant d_K < 0 (default -8)")
        p.add_argument("-f", "--conductor", type=int, default=1, help="conductor f >= 1 (default 1)")
        p.add_argument("--omega1", type=_parse_complex, default=None, help="custom basis vector omega1")
        p.add_argument("--omega2", type=_parse_complex, default=None, help="custom basis vector omega2")
        p.add_argument(
            "--zeta-radius",
            type=int,
            default=_env_default("ZETA_RADIUS", int, 40),
            help="direct-sum shell radius for reference oracles",
        )
        p.add_argument(
            "--q-terms", type=int, default=_env_default("Q_TERMS", int, 64), help="q-series truncation length"
        )
        p.add_argument("--tol", type=float, default=_env_default("TOL", float, 1e-9), help="numerical tolerance")
        p.add_argument("--seed", type=int, default=_DEFAULT_SEED, help="PRNG seed for randomized suites")
        p.add_argument("--threads", type=int, default=1, help="worker threads for coset summation")
        p.add_argument("--format", choices=("text", "json", "csv"), default="text", help="output format")
        p.add_argument("--max-prime", type=int, default=2_000_000, help="prime-search candidate budget")

    p_sum = sub.add_parser("sum", help="compute D_L and the normalized sum for one (h, k) pair")
    add_common(p_sum)
    p_sum.add_argument("--h", type=_parse_coords, required=True, metavar="U,V", help="h in theta-coordinates")
    p_sum.add_argument("--k", type=_parse_coords, required=True, metavar="U,V", help="k in theta-coordinates")

    p_verify = sub.add_parser("verify", help="run an invariant suite")
    add_common(p_verify)
    p_verify.add_argument("--suite", choices=SUITE_NAMES, required=True)

    p_approx = sub.add_parser("approximate", help="approximate 2a/b by normalized sums")
    add_common(p_approx)
    p_approx.add_argument("--a", type=int, required=True)
    p_approx.add_argument("--b", type=int, required=True)
    p_approx.add_argument("--steps", type=int, default=3)
    return parser


def _config_dict(args) -> dict:
    cfg = {
        "command": args.command,
        "d_k": args.dk,
        "conductor": args.conductor,
        "zeta_radius": args.zeta_radius,
        "q_terms": args.q_terms,
        "tol": args.tol,
        "seed": args.seed,
        "threads": args.threads,
        "format": args.format,
        "max_prime": args.max_prime,
    }
    if args.omega1 is not None or args.omega2 is not None:
        cfg["omega1"] = args.omega1 if args.omega1 is not None else 1.0 + 0.0j
        cfg["omega2"] = args.omega2
    return cfg


def _make_context(args) -> SumContext:
    order = QuadOrder(args.dk, args.conductor)
    precision = PrecisionPolicy(zeta_radius=args.zeta_radius, q_terms=args.q_terms, tol=args.tol)
    if args.omega1 is not None or args.omega2 is not None:
        if args.omega1 is None or args.omega2 is None:
            raise InadmissibleTargetError("--omega1 and --omega2 must be given together")
        lattice = Lattice(args.omega1, args.omega2, precision)
    else:
        lattice = Lattice.from_order(order, precision)
    return SumContext(order, lattice)


# ---------------------------------------------------------------------------
# Subcommands.


def _cmd_sum(args) -> int:
    started = time.perf_counter()
    ctx = _make_context(args)
    order = ctx.order
    h = order.element(*args.h)
    k = order.element(*args.k)
    if k.is_zero():
        print("error: zero modulus (k must be nonzero)", file=sys.stderr)
        return _EXIT_USAGE
    value = d_sum(h, k, ctx, threads=args.threads)
    normalized = d_norm(h, k, ctx, threads=args.threads)
    e2 = ctx.lattice.e2_zero()
    elapsed = time.perf_counter() - started
    record = {
        "h": list(args.h),
        "k": list(args.k),
        "d_sum": value,
        "d_norm": normalized,
        "e2_zero": e2,
        "coset_count": k.norm(),
    }
    if args.format == "json":
        _emit_json(_config_dict(args), [record], {"status": "ok"})
    elif args.format == "csv":
        row = {
            "h": f"{args.h[0]},{args.h[1]}",
            "k": f"{args.k[0]},{args.k[1]}",
            "d_sum_re": repr(value.real),
            "d_sum_im": repr(value.imag),
            "d_norm": repr(normalized),
            "e2_re": repr(e2.real),
            "e2_im": repr(e2.imag),
            "coset_count": k.norm(),
            "wall_time_s": f"{elapsed:.6f}",
        }
        _emit_csv([row], list(row.keys()))
    else:
        print(f"order: d_K={order.d_k}, f={order.f} (discriminant {order.discriminant})")
        print(f"h = {args.h[0]} + {args.h[1]}*theta,  k = {args.k[0]} + {args.k[1]}*theta")
        print(f"coset count: {k.norm()}")
        print(f"D_L(h,k)  = {value.real:+.12e} {value.imag:+.12e}i")
        print(f"Dtilde    = {normalized:+.12e}")
        print(f"E2(0)     = {e2.real:+.12e} {e2.imag:+.12e}i")
        print(f"wall time = {elapsed:.3f} s")
    print(f"sum finished in {elapsed:.3f} s", file=sys.stderr)
    return _EXIT_OK


def _cmd_verify(args) -> int:
    started = time.perf_counter()
    order = QuadOrder(args.dk, args.conductor)
    checks = run_suite(args.suite, order, seed=args.seed)
    elapsed = time.perf_counter() - started
    failures = [c for c in checks if not c.passed]
    records = [
        {"name": c.name, "residual": c.residual, "tolerance": c.tolerance, "passed": c.passed, "info": c.info}
        for c in checks
    ]
    summary = {"suite": args.suite, "checks": len(checks), "failures": len(failures), "passed": not failures}
    if args.format == "json":
        _emit_json(_config_dict(args), records, summary)
    elif args.format == "csv":
        rows = [
            {
                "name": c.name,
                "residual": repr(c.residual),
                "tolerance": repr(c.tolerance),
                "passed": int(c.passed),
                "info": c.info,
            }
            for c in checks
        ]
        _emit_csv(rows, ["name", "residual", "tolerance", "passed", "info"])
    else:
        for c in checks:
            status = "PASS" if c.passed else "FAIL"
            extra = f"  [{c.info}]" if c.info else ""
            print(f"{status}  {c.name}: residual {c.residual:.3e} (tol {c.tolerance:.1e}){extra}")
        print(f"{len(checks) - len(failures)}/{len(checks)} checks passed in {elapsed:.2f} s")
    print(f"verify finished in {elapsed:.2f} s", file=sys.stderr)
    return _EXIT_OK if not failures else _EXIT_VERIFY_FAIL


def _cmd_approximate(args) -> int:
    order = QuadOrder(args.dk, args.conductor)
    target = Target(args.a, args.b, order)
    records = []
    rows = []
    started = time.perf_counter()
    steps = []
    for index in range(args.steps):
        t0 = time.perf_counter()
        p = find_prime(target, index, max_candidates=args.max_prime)
        step = construct(target, p)
        wall = time.perf_counter() - t0
        steps.append(step)
        bound = (2.0 / args.b + 1.0) / step.p
        records.append(
            {
                "index": index,
                "p": step.p,
                "e": step.e,
                "ell": step.ell,
                "k": step.k,
                "dtilde": step.dtilde,
                "abs_err": step.err_bound,
                "bound": bound,
            }
        )
        rows.append(
            {
                "index": index,
                "p": step.p,
                "e": step.e,
                "dtilde": repr(step.dtilde),
                "abs_err": repr(step.err_bound),
                "bound": repr(bound),
                "wall_time_s": f"{wall:.6f}",
            }
        )
    elapsed = time.perf_counter() - started
    two_x = 2.0 * args.a / args.b
    summary = {"a": args.a, "b": args.b, "discriminant": order.discriminant, "two_x": two_x, "steps": args.steps}
    if args.format == "json":
        _emit_json(_config_dict(args), records, summary)
    elif args.format == "csv":
        _emit_csv(rows, ["index", "p", "e", "dtilde", "abs_err", "bound", "wall_time_s"])
    else:
        print(f"target 2a/b = {two_x:.12g} over discriminant {order.discriminant}")
        for rec in records:
            print(
                f"step {rec['index']}: p={rec['p']}  e={rec['e']}  dtilde={rec['dtilde']:.10g}  "
                f"|err|={rec['abs_err']:.3e}  bound={rec['bound']:.3e}"
            )
        print(f"wall time = {elapsed:.3f} s")
    print(f"approximate finished in {elapsed:.3f} s", file=sys.stderr)
    return _EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "sum":
            return _cmd_sum(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "approximate":
            return _cmd_approximate(args)
        parser.error(f"unknown command {args.command!r}")
    except (InadmissibleTargetError, ExcludedRingError, NotAMultiplierError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_USAGE
    except (PrecisionLossError, ConstructionError, SearchLimitError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return _EXIT_INTERNAL
    except DedekindError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_USAGE
    return _EXIT_USAGE


def entry() -> None:
    sys.exit(main())
