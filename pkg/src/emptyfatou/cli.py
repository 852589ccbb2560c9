"""Command-line front end.

Exit codes: 0 all hard checks passed, 1 a mathematical check or operation
failed, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys

from emptyfatou.dynamics import find_expansion_witness, orbit
from emptyfatou.errors import ConfigError, EmptyFatouError, OrbitError
from emptyfatou.field import format_element, parse_element
from emptyfatou.projective import format_distance, parse_point, spherical_distance
from emptyfatou.symbolic import decode, format_word, itinerary, parse_word, periodic_point
from emptyfatou.verify import SUITES, RunConfig, exit_code, format_records, run_verify


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("field and map")
    g.add_argument("--p", type=int, default=2)
    g.add_argument("--e", type=int, default=1)
    g.add_argument("--f", type=int, default=1)
    g.add_argument("--m", type=int, default=3)
    g.add_argument("--n", type=int, default=2)
    g.add_argument("--precision", type=int, default=32, help="base-p digits; pi-adic precision is e times this")
    r = common.add_argument_group("run")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--samples", type=int, default=500)
    r.add_argument("--format", choices=("json", "csv"), default=None,
                   help="verify defaults to json lines; other commands print plain literals unless set")
    r.add_argument("--max-steps", type=int, default=None)
    r.add_argument("--attempts", type=int, default=8)
    r.add_argument("--workers", type=int, default=1)
    r.add_argument("--output", default=None, help="write the report here instead of stdout")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="emptyfatou", description="Empty Fatou set checks for phi on P^1(K).")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run every checker and stream a report")
    v.add_argument("--delta-log", type=int, default=10)
    v.add_argument("--suite", action="append", default=None, choices=list(SUITES),
                   help="restrict to the named suite(s)")

    o = sub.add_parser("orbit", parents=[common], help="iterate phi from a point")
    o.add_argument("--P", "--z", dest="P", required=True)
    o.add_argument("--depth", "--steps", dest="depth", type=int, default=8)

    i = sub.add_parser("itinerary", parents=[common], help="residues of the orbit of z in O_K")
    i.add_argument("--z", required=True)
    i.add_argument("--depth", type=int, default=8)

    d = sub.add_parser("decode", parents=[common], help="ball of points with the given itinerary prefix")
    d.add_argument("--word", required=True)

    pp = sub.add_parser("periodic", parents=[common], help="the periodic point of a word")
    pp.add_argument("--word", required=True)

    w = sub.add_parser("witness", parents=[common], help="search for a point whose orbit separates from P")
    w.add_argument("--P", "--z", dest="P", required=True)
    w.add_argument("--delta-log", type=int, default=10)
    w.add_argument("--precision-limit", type=int, default=None,
                   help="allow re-running at higher precision, up to this many base-p digits")

    ds = sub.add_parser("dist", parents=[common], help="spherical distance between two points")
    ds.add_argument("--P", required=True)
    ds.add_argument("--Q", required=True)

    sub.add_parser("field", parents=[common], help="describe the field and the map")
    return parser


def _config(args) -> RunConfig:
    cfg = RunConfig(p=args.p, e=args.e, f=args.f, m=args.m, n=args.n, precision=args.precision, seed=args.seed,
                    samples=args.samples, format=args.format or "json", max_steps=args.max_steps,
                    attempts=args.attempts, delta_log=getattr(args, "delta_log", 10), workers=args.workers)
    cfg.validate()
    return cfg


def _emit(text: str, args) -> None:
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _result(args, command: str, inputs: dict, observed: dict, text: str) -> str:
    """Render a single-operation result as plain text, a JSON record, or a CSV row."""
    if args.format is None:
        return text + "\n"
    record = {"suite": command, "index": 0, "inputs": inputs, "observed": observed, "expected": "",
              "verdict": "pass", "regime_flag": ""}
    return format_records([record], args.format)


def _run(args) -> int:
    cfg = _config(args)
    phi = cfg.phi()
    K = phi.field
    record = {"regime": phi.regime_flag}

    if args.command == "verify":
        records = run_verify(cfg, args.suite)
        _emit(format_records(records, cfg.format), args)
        return exit_code(records)

    if args.command == "field":
        observed = {"field": K.spec_string(), "unram_poly": list(K.unram_poly), "eis_poly": list(K.eis_poly),
                    "d": K.d, "v_pi_p": K.element(K.p).valuation(), "map": phi.describe(), **record}
        _emit(_result(args, "field", {}, observed, json.dumps(observed)), args)
        return 0

    if args.command == "dist":
        P, Q = parse_point(K, args.P), parse_point(K, args.Q)
        k = spherical_distance(P, Q)
        text = format_distance(k, K)
        _emit(_result(args, "dist", {"P": P.literal(), "Q": Q.literal()}, {"rho_log": k, "rho": text}, text),
              args)
        return 0

    if args.command == "orbit":
        P = parse_point(K, args.P)
        orb = orbit(phi, P, args.depth)
        lines = [Q.literal() for Q in orb]
        if orb.truncated_at is not None:
            lines.append(f"... truncated at step {orb.truncated_at} (precision exhausted)")
        observed = {"points": [Q.literal() for Q in orb], "truncated_at": orb.truncated_at}
        _emit(_result(args, "orbit", {"P": P.literal(), "steps": args.depth}, observed, "\n".join(lines)), args)
        return 0

    if args.command == "itinerary":
        z = parse_element(K, args.z)
        w = format_word(itinerary(phi, z, args.depth))
        _emit(_result(args, "itinerary", {"z": format_element(z), "depth": args.depth}, {"word": w}, w), args)
        return 0

    if args.command == "decode":
        w = parse_word(args.word, K.q)
        ball = decode(phi, w)
        observed = {"center": format_element(ball.center), "radius_log": ball.radius_log}
        _emit(_result(args, "decode", {"word": format_word(w)}, observed, ball.literal()), args)
        return 0

    if args.command == "periodic":
        w = parse_word(args.word, K.q)
        z = periodic_point(phi, w)
        _emit(_result(args, "periodic", {"word": format_word(w)}, {"z": format_element(z)}, format_element(z)),
              args)
        return 0

    if args.command == "witness":
        P = parse_point(K, args.P)
        steps = args.max_steps if args.max_steps is not None else K.pi_precision
        wit = find_expansion_witness(phi, P, args.delta_log, steps, args.attempts,
                                     precision_limit=args.precision_limit)
        observed = {"Q": wit.Q.literal(), "steps": wit.steps, "final_distance_log": wit.final_distance_log,
                    "initial_distance_log": wit.initial_distance_log, "pi_precision_used": wit.precision}
        text = f"Q = {wit.Q.literal()}\nn = {wit.steps}\nrho_log = {wit.final_distance_log}"
        _emit(_result(args, "witness", {"P": P.literal(), "delta_log": args.delta_log}, observed, text), args)
        return 0

    raise AssertionError(args.command)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except ConfigError as exc:
        print(f"{exc.name}: {exc}", file=sys.stderr)
        return 2
    except OrbitError as exc:
        print(f"{exc.name} at step {exc.step}: {exc.cause}", file=sys.stderr)
        return 1
    except EmptyFatouError as exc:
        print(f"{exc.name}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"BadParameters: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
