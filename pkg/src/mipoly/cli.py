"""Batch command-line interface.

Machine-readable JSON goes to stdout, a one-line human summary to stderr.
Exit codes: 0 ok/constant, 2 input error, 3 infeasible or unbounded,
4 refused grid size, 5 internal failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .errors import InfeasibleError, MipolyError, RefusedSizeError, UnboundedError
from .exact import format_rational, parse_rational
from .instances import Instance, dumps_instance, generate_an1, generate_parity, load_instance
from .integer_opt import bounds, lattice_points, oracle_optimize
from .mixed_opt import (
    DEFAULT_MAX_GRID_POINTS,
    fptas_maximize,
    is_constant,
    range_bounds,
    weak_maximize,
)
from .polytopes import enumerate_grid_points, integral_scaling_factor

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_REFUSED = 4
EXIT_INTERNAL = 5


def _rational_arg(text: str) -> Fraction:
    return parse_rational(text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mipoly",
        description=(
            "certified approximate maximization of polynomials over the "
            "mixed-integer points of rational polytopes"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    opt = sub.add_parser("optimize", help="run the approximation schemes or the oracle")
    opt.add_argument("instance")
    opt.add_argument("--epsilon", type=_rational_arg, help="exact rational in (0,1), e.g. 1/2")
    opt.add_argument("--weak", action="store_true", help="range-relative guarantee")
    opt.add_argument("--oracle", action="store_true", help="brute-force grid oracle")
    opt.add_argument("--grid-m", type=int, help="grid denominator override (uncertified)")
    opt.add_argument(
        "--max-grid-points",
        type=int,
        default=DEFAULT_MAX_GRID_POINTS,
        help="enumeration budget before refusing",
    )

    bnd = sub.add_parser("bounds", help="power-mean bounds L_k, U_k (pure-integer instances)")
    bnd.add_argument("instance")
    bnd.add_argument("--k", type=int, required=True)

    cnt = sub.add_parser("count", help="number of grid-feasible points")
    cnt.add_argument("instance")
    cnt.add_argument("--grid-m", type=int, default=1)

    cst = sub.add_parser("constant", help="decide constancy on the feasible set")
    cst.add_argument("instance")

    rng = sub.add_parser("range", help="range bracketing trace")
    rng.add_argument("instance")
    rng.add_argument("--delta", type=_rational_arg, required=True)
    rng.add_argument("--n", type=int, required=True)

    dlt = sub.add_parser("delta", help="integral scaling factor of the constraint matrix")
    dlt.add_argument("instance")

    gen = sub.add_parser("generate", help="emit a generated instance file")
    gen.add_argument("--family", choices=("an1", "parity"), required=True)
    gen.add_argument("--a", type=int)
    gen.add_argument("--b", type=int)
    gen.add_argument("--c", type=int)

    return parser


def _cmd_optimize(args) -> dict:
    instance = load_instance(args.instance)
    report: dict = {"command": "optimize", "instance": instance.name}
    if args.oracle:
        m = args.grid_m if args.grid_m is not None else 1
        report["mode"] = "oracle"
        report["grid_m"] = m
        points = enumerate_grid_points(instance.polytope, m)
        result = oracle_optimize(points, instance.objective)
        report["status"] = "ok"
        report["solution"] = result.max.to_json()
        report["minimum"] = result.min.to_json()
        return report
    if args.epsilon is None:
        raise ValueError("--epsilon is required unless --oracle is given")
    if args.weak:
        report["mode"] = "weak"
        solution = weak_maximize(
            instance.polytope,
            instance.objective,
            args.epsilon,
            max_grid_points=args.max_grid_points,
        )
    else:
        report["mode"] = "fptas"
        solution = fptas_maximize(
            instance.polytope,
            instance.objective,
            args.epsilon,
            grid_m=args.grid_m,
            max_grid_points=args.max_grid_points,
        )
    report["status"] = "constant" if solution.guarantee.kind == "constant" else "ok"
    report["solution"] = solution.to_json()
    return report


def _cmd_bounds(args) -> dict:
    instance = load_instance(args.instance)
    if instance.polytope.d1 != 0:
        raise ValueError("bounds requires a pure-integer instance (d1 = 0)")
    pair = bounds(instance.polytope, instance.objective, args.k)
    return {
        "command": "bounds",
        "instance": instance.name,
        "status": "ok",
        "k": pair.k,
        "L": format_rational(pair.L),
        "U": format_rational(pair.U),
        "N": len(lattice_points(instance.polytope)),
    }


def _cmd_count(args) -> dict:
    instance = load_instance(args.instance)
    if args.grid_m < 1:
        raise ValueError("--grid-m must be positive")
    count = sum(1 for _ in enumerate_grid_points(instance.polytope, args.grid_m))
    return {
        "command": "count",
        "instance": instance.name,
        "status": "ok",
        "grid_m": args.grid_m,
        "count": count,
    }


def _cmd_constant(args) -> dict:
    instance = load_instance(args.instance)
    result = is_constant(instance.polytope, instance.objective)
    report = {
        "command": "constant",
        "instance": instance.name,
        "status": "ok",
        "constant": result.constant,
        "grid_m": result.grid_m,
    }
    if result.constant:
        report["value"] = format_rational(result.value)
    else:
        first, second = result.witness
        v1, v2 = result.witness_values
        report["witness"] = [
            {"point": first.to_json(), "value": format_rational(v1)},
            {"point": second.to_json(), "value": format_rational(v2)},
        ]
    return report


def _cmd_range(args) -> dict:
    instance = load_instance(args.instance)
    states = range_bounds(instance.polytope, instance.objective, args.delta, args.n)
    return {
        "command": "range",
        "instance": instance.name,
        "status": "ok",
        "delta": format_rational(args.delta),
        "n": args.n,
        "trace": [state.to_json() for state in states],
    }


def _cmd_delta(args) -> dict:
    instance = load_instance(args.instance)
    return {
        "command": "delta",
        "instance": instance.name,
        "status": "ok",
        "Delta": integral_scaling_factor(instance.polytope),
    }


def _cmd_generate(args) -> Instance:
    if args.family == "parity":
        return generate_parity()
    if args.a is None or args.b is None or args.c is None:
        raise ValueError("an1 requires --a, --b and --c")
    return generate_an1(args.a, args.b, args.c)


_HANDLERS = {
    "optimize": _cmd_optimize,
    "bounds": _cmd_bounds,
    "count": _cmd_count,
    "constant": _cmd_constant,
    "range": _cmd_range,
    "delta": _cmd_delta,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()

    if args.command == "generate":
        try:
            instance = _cmd_generate(args)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        sys.stdout.write(dumps_instance(instance))
        print(f"generated instance {instance.name!r}", file=sys.stderr)
        return EXIT_OK

    handler = _HANDLERS[args.command]
    try:
        report = handler(args)
        code = EXIT_OK
    except (ValueError, OSError) as exc:
        report = {"command": args.command, "status": "error", "message": str(exc)}
        code = EXIT_INPUT
    except InfeasibleError as exc:
        report = {"command": args.command, "status": "infeasible", "message": str(exc)}
        code = EXIT_INFEASIBLE
    except UnboundedError as exc:
        report = {"command": args.command, "status": "unbounded", "message": str(exc)}
        code = EXIT_INFEASIBLE
    except RefusedSizeError as exc:
        report = {
            "command": args.command,
            "status": "refused-size",
            "message": str(exc),
            "grid_m": str(exc.m),
            "estimate": str(exc.estimate),
            "limit": exc.limit,
        }
        code = EXIT_REFUSED
    except MipolyError as exc:
        report = {"command": args.command, "status": "error", "message": str(exc)}
        code = EXIT_INTERNAL

    report["timing"] = {"microseconds": int((time.perf_counter() - start) * 1_000_000)}
    print(json.dumps(report, indent=2))
    summary = report.get("status", "error")
    print(f"{args.command}: {summary}", file=sys.stderr)
    return code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
